"""Character formula of U^- for Q(omega, r) as truncated power series.

Monomials y^n x_1^m_1 ... x_r^m_r are keyed by DegreeVector(n, m). The
inverse character has a closed form; Ch U^- is its inverse up to the bounds,
and its coefficients also satisfy a three-part recursion.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, MutableMapping

from comet.crystal import enumerate_steep
from comet.freealg import GradedQuotient
from comet.quiver import DegreeVector

logger = logging.getLogger(__name__)


@dataclass
class TruncatedSeries:
    r: int
    max_i: int
    max_j: int
    coefficients: dict[DegreeVector, int] = field(default_factory=dict)

    def degrees(self) -> Iterator[DegreeVector]:
        """Every monomial inside the bounds, in an order where divisors come first."""
        for n in range(self.max_i + 1):
            for m in _boxes(self.r, self.max_j):
                yield DegreeVector(n, m)

    def in_bounds(self, d: DegreeVector) -> bool:
        return d.is_nonnegative() and d.n <= self.max_i and all(x <= self.max_j for x in d.m)

    def coefficient(self, d: DegreeVector) -> int:
        return self.coefficients.get(d, 0)

    def add(self, d: DegreeVector, value: int) -> None:
        if not self.in_bounds(d) or not value:
            return
        total = self.coefficients.get(d, 0) + value
        if total:
            self.coefficients[d] = total
        else:
            self.coefficients.pop(d, None)

    def is_one(self) -> bool:
        return self.coefficients == {DegreeVector.zero(self.r): 1}


def _boxes(r: int, top: int) -> Iterator[tuple[int, ...]]:
    if r == 0:
        yield ()
        return
    for head in range(top + 1):
        for rest in _boxes(r - 1, top):
            yield (head, *rest)


def _subsets(r: int) -> Iterator[tuple[int, ...]]:
    for size in range(r + 1):
        yield from combinations(range(r), size)


def _subset_vector(subset: tuple[int, ...], r: int, scale: int = 1) -> tuple[int, ...]:
    return tuple(scale if k in subset else 0 for k in range(r))


def inverse_series(r: int, max_i: int, max_j: int) -> TruncatedSeries:
    """sum over p of (-1)^|p| pi(p) (1 - pi(p) y / (1 - pi(p) y)), expanded to the bounds."""
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    series = TruncatedSeries(r, max_i, max_j)
    for subset in _subsets(r):
        sign = -1 if len(subset) % 2 else 1
        series.add(DegreeVector(0, _subset_vector(subset, r)), sign)
        for k in range(1, max_i + 1):
            series.add(DegreeVector(k, _subset_vector(subset, r, k + 1)), -sign)
    return series


def multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    product = TruncatedSeries(a.r, min(a.max_i, b.max_i), min(a.max_j, b.max_j))
    for da, ca in a.coefficients.items():
        for db, cb in b.coefficients.items():
            product.add(da + db, ca * cb)
    return product


def char_series(r: int, max_i: int, max_j: int) -> TruncatedSeries:
    """Inverse of inverse_series by recursive convolution."""
    inverse = inverse_series(r, max_i, max_j)
    zero = DegreeVector.zero(r)
    if inverse.coefficient(zero) != 1:
        raise ArithmeticError("inverse character has no unit constant term")
    terms = [(d, c) for d, c in inverse.coefficients.items() if d != zero]
    series = TruncatedSeries(r, max_i, max_j, {zero: 1})
    for d in series.degrees():
        if d == zero:
            continue
        value = 0
        for e, c in terms:
            rest = d - e
            if rest.is_nonnegative():
                value -= c * series.coefficient(rest)
        series.add(d, value)
    logger.debug("Ch U^- for r=%d up to (%d, %d): %d nonzero terms", r, max_i, max_j, len(series.coefficients))
    return series


def coeff_recursion(r: int, d: DegreeVector, memo: MutableMapping[DegreeVector, int] | None = None) -> int:
    """c(n, m) from the imaginary-tail sum, inclusion-exclusion over colors and the correction sum."""
    if not d.is_nonnegative():
        return 0
    if d.r != r:
        raise ValueError(f"degree {d} does not have {r} colors")
    if memo is None:
        memo = {}
    cached = memo.get(d)
    if cached is not None:
        return cached
    if d.n == 0 and not any(d.m):
        memo[d] = 1
        return 1
    subsets = [subset for subset in _subsets(r) if subset]
    value = 0
    for k in range(1, d.n + 1):
        value += coeff_recursion(r, DegreeVector(d.n - k, d.m), memo)
    for subset in subsets:
        sign = -1 if len(subset) % 2 else 1
        value -= sign * coeff_recursion(r, d - DegreeVector(0, _subset_vector(subset, r)), memo)
        for k in range(1, d.n + 1):
            value += sign * coeff_recursion(r, d - DegreeVector(k, _subset_vector(subset, r, k + 1)), memo)
    memo[d] = value
    return value


@dataclass
class CountReport:
    degree: DegreeVector
    series: int
    recursion: int
    steep: int
    quotient: int | None = None

    @property
    def values(self) -> list[int]:
        found = [self.series, self.recursion, self.steep]
        if self.quotient is not None:
            found.append(self.quotient)
        return found

    @property
    def passed(self) -> bool:
        return len(set(self.values)) == 1


def compare_counts(
    d: DegreeVector,
    quotient: GradedQuotient | None = None,
    series: TruncatedSeries | None = None,
    memo: MutableMapping[DegreeVector, int] | None = None,
) -> CountReport:
    """Series coefficient, recursion value and steep count at d, plus dim U^-[d] when the quotient supports d."""
    if series is None or not series.in_bounds(d):
        series = char_series(d.r, d.n, max(d.m, default=0))
    dim = None
    if quotient is not None and quotient.supports(d):
        dim = quotient.dim(d)
    report = CountReport(
        degree=d,
        series=series.coefficient(d),
        recursion=coeff_recursion(d.r, d, memo),
        steep=len(enumerate_steep(d)),
        quotient=dim,
    )
    if not report.passed:
        logger.warning("Counts disagree at %s: %s", d, report.values)
    return report
