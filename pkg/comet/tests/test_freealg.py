import random

from django.test import SimpleTestCase, override_settings

from comet.charformula import coeff_recursion
from comet.exceptions import LatticeViolation, TruncationError
from comet.freealg import (
    FACT_NAMES,
    GradedQuotient,
    NCPoly,
    build_quotient,
    check_fact,
    fact_grid,
    fact_quotient,
    lattice_contains,
    lattice_equiv,
    pairing,
    relation_set,
    verify_algebra_fact,
)
from comet.qarith import RationalFunction, qint
from comet.quiver import DegreeVector, Generator, QuiverParams, words_of_degree

J = Generator.real(1)
J2 = Generator.real(2)
I1 = Generator.imag(1)
I2 = Generator.imag(2)
V_INV = RationalFunction.monomial(-1)

RANK_ONE = QuiverParams(omega=2, r=1, max_i=2, max_j=3, max_loop=2)
RANK_TWO = QuiverParams(omega=2, r=2, max_i=1, max_j=2, max_loop=1)
WIDE = QuiverParams(omega=2, r=1, max_i=4, max_j=4, max_loop=4)
SERRE_STRIP = QuiverParams(omega=2, r=1, max_i=1, max_j=4, max_loop=1)
NO_REALS = QuiverParams(omega=2, r=0, max_i=4, max_j=0, max_loop=4)


def word(*letters: Generator, r: int = 1, coeff: object = 1) -> NCPoly:
    return NCPoly.word(letters, r, coeff)


class NCPolyTests(SimpleTestCase):
    def test_products_and_degrees(self) -> None:
        x = word(I1) * word(J)
        self.assertEqual(x, word(I1, J))
        self.assertEqual(x.degree, DegreeVector.of(1, 1))
        self.assertTrue((x - x).is_zero)
        self.assertEqual((x + x).coefficient((I1, J)), RationalFunction(2))

    def test_divided_power(self) -> None:
        f2 = NCPoly.divided_power(J, 2, 1)
        self.assertEqual(f2.coefficient((J, J)), RationalFunction(1, qint(2)))
        self.assertTrue(NCPoly.divided_power(J, -1, 1).is_zero)
        self.assertEqual(NCPoly.divided_power(J, 0, 1), NCPoly.one(1))

    def test_text(self) -> None:
        self.assertEqual(NCPoly.zero().text(1), "0")
        self.assertEqual((word(I1, J) - word(J, I1)).text(1), "(i,1) j + -j (i,1)")

    def test_pairing(self) -> None:
        self.assertEqual(pairing(I1, I2, omega=2), -4)
        self.assertEqual(pairing(I2, J), -2)
        self.assertEqual(pairing(J, J2), 0)
        self.assertEqual(pairing(J, J), 2)


class RelationTests(SimpleTestCase):
    def test_relation_counts(self) -> None:
        self.assertEqual(len(relation_set(RANK_ONE)), 2)
        self.assertEqual(len(relation_set(RANK_TWO)), 3)

    def test_serre_relation_of_loop_one(self) -> None:
        serre = next(rel for rel in relation_set(RANK_ONE) if rel.degree == DegreeVector.of(1, 2))
        half = RationalFunction(1, qint(2))
        self.assertEqual(serre.coefficient((J, J, I1)), half)
        self.assertEqual(serre.coefficient((J, I1, J)), RationalFunction(-1))
        self.assertEqual(serre.coefficient((I1, J, J)), half)


class RankOneQuotientTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls) -> None:
        super().setUpClass()
        cls.q = build_quotient(RANK_ONE, eager=True)

    def test_dimensions_match_recursion(self) -> None:
        memo: dict = {}
        for d in RANK_ONE.degrees():
            with self.subTest(degree=d.text()):
                self.assertEqual(self.q.dim(d), coeff_recursion(1, d, memo))

    def test_known_dimensions(self) -> None:
        self.assertEqual(self.q.dim(DegreeVector.of(0, 0)), 1)
        self.assertEqual(self.q.dim(DegreeVector.of(0, 3)), 1)
        self.assertEqual(self.q.dim(DegreeVector.of(1, 1)), 2)
        self.assertEqual(self.q.dim(DegreeVector.of(1, 2)), 2)
        self.assertEqual(self.q.dim(DegreeVector.of(2, 1)), 5)

    def test_relations_vanish(self) -> None:
        for rel in relation_set(RANK_ONE):
            self.assertTrue(self.q.is_zero(rel))

    def test_reduce_and_lift(self) -> None:
        x = word(J, J, I1) + word(I1, J, J)
        column = self.q.reduce(x)
        self.assertEqual(len(column), 2)
        self.assertTrue(self.q.equal(self.q.lift(DegreeVector.of(1, 2), column), x))
        with self.assertRaises(ValueError):
            self.q.reduce(word(I1, J), DegreeVector.of(1, 2))

    def test_eprime(self) -> None:
        self.assertEqual(self.q.eprime(J, word(I1, J)), word(I1, coeff=V_INV))
        self.assertEqual(self.q.eprime(J, word(J, I1)), word(I1))
        self.assertEqual(self.q.eprime(I1, word(I1, J)), word(J))
        self.assertTrue(self.q.eprime(J, word(I1)).is_zero)

    def test_decompose_real(self) -> None:
        x = word(I1, J)
        parts = dict(self.q.decompose_real(J, x))
        self.assertEqual(sorted(parts), [0, 1])
        self.assertTrue(self.q.equal(parts[1], word(I1, coeff=V_INV)))
        self.assertTrue(self.q.equal(parts[0], word(I1, J) - word(J, I1, coeff=V_INV)))
        self.assertTrue(self.q.equal(self.q.reassemble(J, parts.items(), x.degree), x))

    def test_kashiwara_operators(self) -> None:
        self.assertTrue(self.q.equal(self.q.kashiwara_f(J, word(I1)), word(J, I1)))
        self.assertTrue(self.q.equal(self.q.kashiwara_f(I1, word(J)), word(I1, J)))
        for d in (DegreeVector.of(1, 1), DegreeVector.of(2, 1), DegreeVector.of(1, 2)):
            for basis_word in self.q.basis(d):
                x = NCPoly.word(basis_word, 1)
                with self.subTest(word=x.text(1)):
                    raised = self.q.kashiwara_f(J, x)
                    self.assertTrue(self.q.equal(self.q.kashiwara_e_real(J, raised), x))
        with self.assertRaises(TruncationError):
            self.q.kashiwara_f(J, word(J, J, J))

    def test_z_table(self) -> None:
        table = self.q.z_table(1, 0)
        self.assertEqual(list(table), [0])
        self.assertTrue(self.q.equal(table[0], word(I1)))
        self.assertTrue(self.q.is_zero(self.q.z(1, 0, 2), DegreeVector.of(1, 2)))
        with self.assertRaises(ValueError):
            self.q.z_table(3, 0)

    def test_serre_order(self) -> None:
        self.assertEqual(self.q.serre_order(word(I1), J), 1)
        self.assertEqual(self.q.serre_order(word(I2), J), 2)
        with self.assertRaises(ValueError):
            self.q.serre_order(NCPoly.zero(DegreeVector.of(1, 0)), J)

    def test_serre_order_is_additive(self) -> None:
        one = self.q.serre_order(word(I1), J)
        self.assertEqual(self.q.serre_order(word(I1, I1), J), one + one)
        with self.assertRaises(ValueError):
            self.q.serre_order(word(I1, I1) - word(I1, I1), J)

    def test_eprime_is_a_skew_derivation(self) -> None:
        rng = random.Random(11)
        letters = (I1, I2, J)

        def sample(d: DegreeVector) -> NCPoly:
            words = words_of_degree(d, letters)
            chosen = rng.sample(words, min(3, len(words)))
            return NCPoly({w: RationalFunction(rng.randint(1, 5)) * RationalFunction.monomial(rng.randint(-2, 2)) for w in chosen}, d)

        degrees = [DegreeVector.of(0, 1), DegreeVector.of(1, 0), DegreeVector.of(1, 1), DegreeVector.of(2, 1)]
        for dx in degrees:
            for dy in degrees:
                x, y = sample(dx), sample(dy)
                for iota in (J, I1):
                    twist = RationalFunction.monomial(pairing(iota, dx, omega=2))
                    with self.subTest(x=dx.text(), y=dy.text(), iota=iota.text(1)):
                        expected = self.q.eprime(iota, x) * y + (x * self.q.eprime(iota, y)).scale(twist)
                        self.assertEqual(self.q.eprime(iota, x * y), expected)

    def test_lattice_is_stable_under_kashiwara_operators(self) -> None:
        for d in RANK_ONE.degrees():
            if d.n > 1:
                continue
            for column in self.q.lattice(d).generators:
                x = self.q.lift(d, column)
                for iota in (J, I1):
                    target = d + iota.degree(1)
                    if target.n <= 1 and self.q.supports(target):
                        with self.subTest(degree=d.text(), op=f"f~{iota.text(1)}"):
                            self.assertTrue(lattice_contains(self.q.lattice(target), self.q.kashiwara_f(iota, x, d)))
                lower = d - J.degree(1)
                if lower.is_nonnegative():
                    with self.subTest(degree=d.text(), op="e~j"):
                        self.assertTrue(lattice_contains(self.q.lattice(lower), self.q.kashiwara_e_real(J, x, d)))

    def test_every_fact_on_its_grid(self) -> None:
        for fact in FACT_NAMES:
            for params in fact_grid(self.q, fact):
                with self.subTest(fact=fact, params=params):
                    outcome = check_fact(self.q, fact, params)
                    self.assertTrue(outcome.passed, outcome.witness or outcome.note)

    def test_grids_cover_the_core_facts(self) -> None:
        for fact in ("moving_fjs", "gen_serre", "z_recursion", "expansion", "decomp", "crystal_serre_lattice"):
            self.assertTrue(fact_grid(self.q, fact), fact)
        self.assertEqual(fact_grid(self.q, "kj_nested"), [])

    def test_fact_arguments(self) -> None:
        self.assertTrue(verify_algebra_fact(self.q, "moving_fjs", (1, 0)))
        with self.assertRaises(ValueError):
            verify_algebra_fact(self.q, "no_such_fact", ())
        with self.assertRaises(ValueError):
            verify_algebra_fact(self.q, "z_vanishing", (1, 1))
        with self.assertRaises(ValueError):
            verify_algebra_fact(self.q, "in_linfty", (2, 0))

    def test_crystal_serre_in_the_lattice(self) -> None:
        d = DegreeVector.of(1, 2)
        lattice = self.q.lattice(d)
        left = self.q.apply_word((I1, J, J))
        right = self.q.apply_word((J, I1, J))
        self.assertTrue(lattice_contains(lattice, left))
        self.assertTrue(lattice_equiv(lattice, left, right))

    def test_distinct_crystal_elements(self) -> None:
        lattice = self.q.lattice(DegreeVector.of(1, 1))
        self.assertEqual(lattice.rank, 2)
        self.assertFalse(lattice_equiv(lattice, self.q.apply_word((I1, J)), self.q.apply_word((J, I1))))

    def test_lattice_violation(self) -> None:
        lattice = self.q.lattice(DegreeVector.of(0, 1))
        with self.assertRaises(LatticeViolation):
            lattice_equiv(lattice, word(J, coeff=RationalFunction.monomial(1)), word(J))


class RankTwoQuotientTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls) -> None:
        super().setUpClass()
        cls.q = build_quotient(RANK_TWO)

    def test_dimensions_match_recursion(self) -> None:
        memo: dict = {}
        for d in RANK_TWO.degrees():
            with self.subTest(degree=d.text()):
                self.assertEqual(self.q.dim(d), coeff_recursion(2, d, memo))

    def test_commutator_vanishes(self) -> None:
        x = word(J, J2, r=2) - word(J2, J, r=2)
        self.assertTrue(self.q.is_zero(x))

    def test_serre_order_across_colors(self) -> None:
        self.assertEqual(self.q.serre_order(word(J2, r=2), J), 0)
        self.assertEqual(self.q.serre_order(word(I1, J2, r=2), J), 1)

    def test_color_facts(self) -> None:
        for fact in ("ftilde_commute", "eprime_commute", "kj_nested", "decomp", "eprime_descends"):
            cases = fact_grid(self.q, fact)
            self.assertTrue(cases, fact)
            for params in cases:
                with self.subTest(fact=fact, params=params):
                    outcome = check_fact(self.q, fact, params)
                    self.assertTrue(outcome.passed, outcome.witness or outcome.note)


class NoRealVertexTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls) -> None:
        super().setUpClass()
        cls.q = build_quotient(NO_REALS)

    def test_free_on_the_loops(self) -> None:
        self.assertEqual(relation_set(NO_REALS), [])
        for n in range(1, 5):
            self.assertEqual(self.q.dim(DegreeVector(n, ())), 2 ** (n - 1))

    def test_real_vertex_facts_have_no_cases(self) -> None:
        everywhere = ("decomp", "eprime_descends")
        for fact in FACT_NAMES:
            if fact not in everywhere:
                self.assertEqual(fact_grid(self.q, fact), [], fact)
        for fact in everywhere:
            for params in fact_grid(self.q, fact):
                with self.subTest(fact=fact, params=params):
                    self.assertTrue(verify_algebra_fact(self.q, fact, params))


class WidenedGridTests(SimpleTestCase):
    def test_grids_reach_past_the_color_bound(self) -> None:
        q = GradedQuotient(WIDE)
        grid = fact_grid(q, "gen_serre")
        self.assertEqual(len(grid), 6)
        for case in ((1, 3), (2, 2), (3, 1)):
            self.assertIn(case, grid)
        for case in ((2, 2), (3, 1), (3, 2)):
            self.assertIn(case, fact_grid(q, "moving_fjs"))
        self.assertIn((3, 5), fact_grid(q, "z_vanishing"))

    def test_cases_run_on_a_widened_quotient(self) -> None:
        q = GradedQuotient(WIDE)
        self.assertIs(fact_quotient(q, "gen_serre", (1, 2)), q)
        wide = fact_quotient(q, "gen_serre", (2, 2))
        self.assertEqual(wide.params.max_j, 5)
        self.assertIs(fact_quotient(q, "moving_fjs", (3, 1)), wide)
        self.assertIs(fact_quotient(q, "decomp", (1, 1)), q)
        with self.assertRaises(ValueError):
            fact_quotient(q, "gen_serre", (1,))
        self.assertTrue(verify_algebra_fact(q, "gen_serre", (2, 2)))
        self.assertEqual(q.params.max_j, 4)


class CrystalSerreLatticeTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls) -> None:
        super().setUpClass()
        cls.q = build_quotient(SERRE_STRIP)

    def test_serre_pairs_agree_modulo_the_shrunk_lattice(self) -> None:
        for n in range(3):
            d = DegreeVector.of(1, n + 2)
            left = self.q.apply_word((I1,) + (J,) * (n + 2))
            right = self.q.apply_word((J, I1) + (J,) * (n + 1))
            with self.subTest(n=n):
                self.assertTrue(lattice_equiv(self.q.lattice(d), left, right))

    def test_single_steps_stay_apart(self) -> None:
        lattice = self.q.lattice(DegreeVector.of(1, 1))
        self.assertFalse(lattice_equiv(lattice, self.q.apply_word((I1, J)), self.q.apply_word((J, I1))))


class GuardTests(SimpleTestCase):
    def test_outside_the_box(self) -> None:
        q = GradedQuotient(RANK_ONE)
        with self.assertRaises(TruncationError):
            q.piece(DegreeVector.of(3, 0))
        self.assertFalse(q.supports(DegreeVector.of(0, 4)))

    @override_settings(COMET_MAX_WORDS=2)
    def test_word_bound(self) -> None:
        q = GradedQuotient(RANK_ONE)
        self.assertEqual(q.dim(DegreeVector.of(1, 1)), 2)
        with self.assertLogs("comet.freealg", level="WARNING"):
            with self.assertRaises(TruncationError):
                q.piece(DegreeVector.of(1, 2))
