from django.test import SimpleTestCase, override_settings

from comet.charformula import coeff_recursion
from comet.crystal import (
    Block,
    SteepSequence,
    apply_e,
    apply_e_bruteforce,
    apply_f,
    degree_of,
    enumerate_steep,
    enumerate_words,
    epsilon_real,
    format_steep,
    is_steep,
    normalize,
    one_step_rewrites,
    parse_steep,
    to_word,
)
from comet.exceptions import TruncationError
from comet.quiver import DegreeVector, Generator, parse_word

J = Generator.real(1)
J2 = Generator.real(2)
I1 = Generator.imag(1)
I2 = Generator.imag(2)
I3 = Generator.imag(3)
EMPTY = SteepSequence.empty(1)


def steep(p0: int, *blocks: tuple[int, int]) -> SteepSequence:
    return SteepSequence((p0,), tuple(Block(size, (count,)) for size, count in blocks))


class DegreeAndShapeTests(SimpleTestCase):
    def test_degree_of(self) -> None:
        self.assertEqual(degree_of((), 1), DegreeVector.of(0, 0))
        self.assertEqual(degree_of((I2, J, J), 1), DegreeVector.of(2, 2))
        self.assertEqual(degree_of((J, I1, J2, I3), 2), DegreeVector.of(4, 1, 1))
        self.assertEqual(degree_of(steep(2, (1, 1))), DegreeVector.of(1, 3))

    def test_is_steep(self) -> None:
        self.assertTrue(is_steep((J, J, I1, J), 1))
        self.assertFalse(is_steep((I1, J, J), 1))
        self.assertTrue(is_steep((I2, J, I1, J), 1))


class NormalizeTests(SimpleTestCase):
    def test_crystal_serre_move(self) -> None:
        self.assertEqual(normalize((I1, J, J), 1), steep(1, (1, 1)))

    def test_excess_travels_across_blocks(self) -> None:
        self.assertEqual(normalize((I1, J, I1, J, J, J), 1), steep(2, (1, 1), (1, 1)))

    def test_steep_input_is_fixed(self) -> None:
        for w in ((J, J, I1, J), (I2, J, I1, J), ()):
            self.assertEqual(to_word(normalize(w, 1)), w)

    def test_colors_are_independent(self) -> None:
        b = normalize((I1, J, J2, J2, J), 2)
        self.assertEqual(b, SteepSequence((1, 1), (Block(1, (1, 1)),)))

    def test_soundness_over_small_degrees(self) -> None:
        for d in (DegreeVector.of(2, 2), DegreeVector.of(3, 2), DegreeVector.of(2, 4)):
            for w in enumerate_words(d):
                b = normalize(w, 1)
                self.assertEqual(b.degree(), d)
                self.assertTrue(is_steep(to_word(b), 1))
                self.assertEqual(normalize(to_word(b), 1), b)

    def test_confluence(self) -> None:
        for d in (DegreeVector.of(2, 3), DegreeVector.of(3, 3)):
            for w in enumerate_words(d):
                target = normalize(w, 1)
                for u in one_step_rewrites(w):
                    self.assertEqual(normalize(u, 1), target, f"{w} -> {u}")

    def test_confluence_two_colors(self) -> None:
        for w in enumerate_words(DegreeVector.of(2, 2, 1)):
            target = normalize(w, 2)
            for u in one_step_rewrites(w):
                self.assertEqual(normalize(u, 2), target)


class RewriteTests(SimpleTestCase):
    def test_serre_move_both_ways(self) -> None:
        self.assertIn((J, I1, J), one_step_rewrites((I1, J, J)))
        self.assertIn((I1, J, J), one_step_rewrites((J, I1, J)))
        self.assertEqual(one_step_rewrites((I1, J)), set())

    def test_color_swap(self) -> None:
        self.assertEqual(one_step_rewrites((J, J2)), {(J2, J)})


class OperatorTests(SimpleTestCase):
    def test_apply_f(self) -> None:
        self.assertEqual(apply_f(J, EMPTY), steep(1))
        self.assertEqual(apply_f(I1, steep(0, (1, 1))), steep(0, (1, 0), (1, 1)))
        self.assertEqual(apply_f(J, steep(0, (1, 1))), steep(1, (1, 1)))

    def test_apply_e(self) -> None:
        self.assertEqual(apply_e(I1, steep(0, (1, 0))), EMPTY)
        self.assertIsNone(apply_e(J, steep(0, (1, 1))))
        self.assertEqual(apply_e(J, steep(1, (1, 1))), steep(0, (1, 1)))
        self.assertIsNone(apply_e(I2, steep(0, (1, 0))))

    def test_epsilon(self) -> None:
        self.assertEqual(epsilon_real(1, EMPTY), 0)
        self.assertEqual(epsilon_real(1, steep(2, (1, 1))), 2)
        self.assertEqual(epsilon_real(1, steep(0, (3, 2))), 0)

    def test_epsilon_counts_iterated_lowering(self) -> None:
        for b in enumerate_steep(DegreeVector.of(2, 3)):
            steps, current = 0, b
            while (current := apply_e_bruteforce(J, current)) is not None:
                steps += 1
            self.assertEqual(steps, epsilon_real(1, b))

    def test_inverse_laws_and_injectivity(self) -> None:
        entries = (J, I1, I2)
        for d in (DegreeVector.of(1, 1), DegreeVector.of(2, 2), DegreeVector.of(1, 3)):
            sequences = enumerate_steep(d)
            for iota in entries:
                images = [apply_f(iota, b) for b in sequences]
                self.assertEqual(len(set(images)), len(images))
                for b, image in zip(sequences, images):
                    self.assertEqual(apply_e(iota, image), b)

    def test_fast_path_matches_search(self) -> None:
        for d in (DegreeVector.of(1, 2), DegreeVector.of(2, 3)):
            for b in enumerate_steep(d):
                self.assertEqual(apply_e(J, b), apply_e_bruteforce(J, b))


class EnumerationTests(SimpleTestCase):
    def test_counts(self) -> None:
        self.assertEqual(len(enumerate_steep(DegreeVector.of(0, 3))), 1)
        self.assertEqual(enumerate_steep(DegreeVector.of(1, 2)), [steep(1, (1, 1)), steep(2, (1, 0))])
        self.assertEqual(len(enumerate_steep(DegreeVector.of(2, 1))), 5)

    def test_counts_follow_recursion(self) -> None:
        memo: dict = {}
        for n in range(4):
            for m in range(4):
                d = DegreeVector.of(n, m)
                self.assertEqual(len(enumerate_steep(d)), coeff_recursion(1, d, memo))

    def test_no_real_vertices(self) -> None:
        for n in range(1, 6):
            sequences = enumerate_steep(DegreeVector.of(n))
            self.assertEqual(len(sequences), 2 ** (n - 1))
            self.assertEqual(len(set(sequences)), len(sequences))

    def test_order_is_deterministic(self) -> None:
        listed = enumerate_steep(DegreeVector.of(2, 1, 1))
        keys = [(len(b.body), format_steep(b)) for b in listed]
        self.assertEqual(keys, sorted(keys))
        self.assertTrue(all(is_steep(to_word(b), 2) for b in listed))

    @override_settings(COMET_CRYSTAL_MAX_I=2)
    def test_bounds_guard(self) -> None:
        with self.assertRaises(TruncationError):
            enumerate_steep(DegreeVector.of(3, 0))


class TextFormTests(SimpleTestCase):
    def test_format(self) -> None:
        self.assertEqual(format_steep(EMPTY), "1")
        self.assertEqual(format_steep(steep(1, (1, 1))), "j | (i,1) j")
        self.assertEqual(format_steep(steep(0, (2, 2), (1, 0))), "(i,2) j^2 | (i,1)")
        self.assertEqual(format_steep(SteepSequence((2, 1), (Block(3, (0, 2)),))), "j1^2 j2 | (i,3) j2^2")

    def test_parse(self) -> None:
        for text, r in (("1", 1), ("j | (i,1) j", 1), ("(i,2) j^2 | (i,1)", 1), ("j1^2 j2 | (i,3) j2^2", 2)):
            self.assertEqual(format_steep(parse_steep(text, r)), text)

    def test_parse_rejects_non_steep(self) -> None:
        with self.assertRaises(ValueError):
            parse_steep("(i,1) j^2", 1)
        with self.assertRaises(ValueError):
            parse_steep("j | j", 1)

    def test_word_round_trip(self) -> None:
        w = parse_word("(i,1) j (i,1) j^3", 1)
        self.assertEqual(format_steep(normalize(w, 1)), "j^2 | (i,1) j | (i,1) j")
