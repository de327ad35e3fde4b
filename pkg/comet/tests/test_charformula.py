from django.test import SimpleTestCase

from comet.charformula import (
    CountReport,
    char_series,
    coeff_recursion,
    compare_counts,
    inverse_series,
    multiply,
)
from comet.freealg import GradedQuotient
from comet.quiver import DegreeVector, QuiverParams


class InverseSeriesTests(SimpleTestCase):
    def test_no_real_vertices(self) -> None:
        series = inverse_series(0, 5, 0)
        self.assertEqual(series.coefficient(DegreeVector.of(0)), 1)
        for n in range(1, 6):
            self.assertEqual(series.coefficient(DegreeVector.of(n)), -1)

    def test_one_real_vertex(self) -> None:
        series = inverse_series(1, 3, 3)
        self.assertEqual(series.coefficient(DegreeVector.of(0, 0)), 1)
        self.assertEqual(series.coefficient(DegreeVector.of(0, 1)), -1)
        self.assertEqual(series.coefficient(DegreeVector.of(1, 2)), 1)
        self.assertEqual(series.coefficient(DegreeVector.of(1, 0)), -1)
        self.assertEqual(series.coefficient(DegreeVector.of(1, 1)), 0)

    def test_constant_term(self) -> None:
        for r in range(4):
            self.assertEqual(inverse_series(r, 2, 2).coefficient(DegreeVector.zero(r)), 1)

    def test_negative_rank(self) -> None:
        with self.assertRaises(ValueError):
            inverse_series(-1, 2, 2)


class CharSeriesTests(SimpleTestCase):
    def test_values(self) -> None:
        self.assertEqual(char_series(0, 4, 0).coefficient(DegreeVector.of(3)), 4)
        series = char_series(1, 3, 4)
        self.assertEqual(series.coefficient(DegreeVector.of(1, 1)), 2)
        for m in range(5):
            self.assertEqual(series.coefficient(DegreeVector.of(0, m)), 1)

    def test_inverts(self) -> None:
        for r in range(3):
            product = multiply(char_series(r, 3, 3), inverse_series(r, 3, 3))
            self.assertTrue(product.is_one())

    def test_coefficients_are_positive(self) -> None:
        series = char_series(2, 3, 3)
        self.assertTrue(all(value > 0 for value in series.coefficients.values()))
        self.assertEqual(len(series.coefficients), 4 * 4 * 4)


class RecursionTests(SimpleTestCase):
    def test_anchors(self) -> None:
        self.assertEqual(coeff_recursion(1, DegreeVector.of(0, 0)), 1)
        self.assertEqual(coeff_recursion(1, DegreeVector.of(1, 1)), 2)
        self.assertEqual(coeff_recursion(1, DegreeVector.of(2, 1)), 5)
        self.assertEqual(coeff_recursion(1, DegreeVector.of(2, 2)), 7)
        self.assertEqual(coeff_recursion(1, DegreeVector.of(1, 2)), 2)
        self.assertEqual(coeff_recursion(1, DegreeVector.of(-1, 2)), 0)
        self.assertEqual(coeff_recursion(2, DegreeVector.of(1, -1, 0)), 0)

    def test_compositions(self) -> None:
        for n in range(1, 8):
            self.assertEqual(coeff_recursion(0, DegreeVector.of(n)), 2 ** (n - 1))

    def test_agrees_with_series(self) -> None:
        for r in range(3):
            series = char_series(r, 3, 3)
            memo: dict = {}
            for d in series.degrees():
                self.assertEqual(coeff_recursion(r, d, memo), series.coefficient(d), d.text())

    def test_extra_color_is_invisible(self) -> None:
        for n in range(4):
            for m in range(4):
                self.assertEqual(coeff_recursion(1, DegreeVector.of(n, m)), coeff_recursion(2, DegreeVector.of(n, m, 0)))

    def test_wrong_rank(self) -> None:
        with self.assertRaises(ValueError):
            coeff_recursion(2, DegreeVector.of(1, 1))


class CompareCountsTests(SimpleTestCase):
    def test_three_way(self) -> None:
        report = compare_counts(DegreeVector.of(3))
        self.assertEqual(report.values, [4, 4, 4])
        self.assertTrue(report.passed)

    def test_with_quotient(self) -> None:
        quotient = GradedQuotient(QuiverParams(r=1, max_i=1, max_j=2, max_loop=1))
        report = compare_counts(DegreeVector.of(1, 1), quotient)
        self.assertEqual(report.values, [2, 2, 2, 2])
        self.assertTrue(report.passed)
        origin = compare_counts(DegreeVector.of(0, 0), quotient)
        self.assertEqual(origin.values, [1, 1, 1, 1])
        outside = compare_counts(DegreeVector.of(2, 0), quotient)
        self.assertIsNone(outside.quotient)

    def test_disagreement_fails(self) -> None:
        report = CountReport(DegreeVector.of(1, 1), 2, 2, 2, 3)
        self.assertFalse(report.passed)
