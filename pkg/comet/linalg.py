"""Exact linear algebra over Q(v).

Sparse rows of Laurent polynomials are eliminated fraction free; a rank
profile modulo a large prime at a random point selects the independent rows
before any exact work happens. Small dense systems over RationalFunction
(kernels, direct-sum solves) go through plain Gauss-Jordan.
"""

from __future__ import annotations

import logging
from functools import reduce
from typing import Mapping, Sequence

from comet.exceptions import SingularMatrix
from comet.qarith import LaurentPoly, RationalFunction, laurent_gcd

logger = logging.getLogger(__name__)

PRIME = 2**61 - 1

Row = dict[int, LaurentPoly]
Vector = dict[int, RationalFunction]
Matrix = list[list[RationalFunction]]


def rank_profile_mod_p(rows: Sequence[Mapping[int, LaurentPoly]], point: int, prime: int = PRIME) -> list[int]:
    """Indices of the rows independent of all earlier rows after setting v = point in GF(prime)."""
    pivots: dict[int, dict[int, int]] = {}
    chosen: list[int] = []
    for position, row in enumerate(rows):
        vec = {}
        for col, value in row.items():
            residue = value.evaluate_mod(point, prime)
            if residue:
                vec[col] = residue
        while vec:
            col = max(vec)
            pivot_row = pivots.get(col)
            if pivot_row is None:
                break
            factor = vec[col]
            for c, x in pivot_row.items():
                y = (vec.get(c, 0) - factor * x) % prime
                if y:
                    vec[c] = y
                else:
                    vec.pop(c, None)
        if vec:
            col = max(vec)
            inverse = pow(vec[col], -1, prime)
            pivots[col] = {c: x * inverse % prime for c, x in vec.items()}
            chosen.append(position)
    return chosen


def _primitive(row: Row) -> Row:
    """Divide out the content and normalize the pivot (largest column) entry."""
    content = reduce(
        lambda acc, value: acc if acc.is_one else laurent_gcd(acc, value),
        row.values(),
        LaurentPoly.zero(),
    )
    if not content.is_one:
        row = {col: value.divide_exact(content) for col, value in row.items()}
    lead = row[max(row)]
    unit = LaurentPoly.monomial(lead.min_exp, lead.leading_coeff)
    if not unit.is_one:
        row = {col: value.divide_exact(unit) for col, value in row.items()}
    return row


def _combine(target: Row, pivot_row: Row, col: int) -> Row:
    """p * target - a * pivot_row with a, p the entries at col, after cancelling their gcd."""
    a = target[col]
    p = pivot_row[col]
    common = laurent_gcd(a, p)
    a = a.divide_exact(common)
    p = p.divide_exact(common)
    result = {c: value * p for c, value in target.items()} if not p.is_one else dict(target)
    for c, value in pivot_row.items():
        updated = result.get(c, LaurentPoly.zero()) - a * value
        if updated:
            result[c] = updated
        else:
            result.pop(c, None)
    result.pop(col, None)
    return result


class ReducedEchelon:
    """Fraction-free Gauss-Jordan form over Q[v, 1/v].

    Each stored row is primitive, its pivot is its largest column, and no
    other stored row has an entry in that column.
    """

    def __init__(self) -> None:
        self.rows: dict[int, Row] = {}
        self._fractions: dict[int, Vector] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def reduce_row(self, row: Mapping[int, LaurentPoly]) -> Row:
        current: Row = {col: value for col, value in row.items() if value}
        for col in [c for c in current if c in self.rows]:
            if col in current:
                current = _combine(current, self.rows[col], col)
        return _primitive(current) if current else current

    def add(self, row: Mapping[int, LaurentPoly]) -> int | None:
        """Insert a row; returns its pivot column, or None when it is dependent."""
        reduced = self.reduce_row(row)
        if not reduced:
            return None
        col = max(reduced)
        for other_col, other in list(self.rows.items()):
            if col in other:
                self.rows[other_col] = _primitive(_combine(other, reduced, col))
        self.rows[col] = reduced
        self._fractions.clear()
        return col

    def _as_fractions(self, col: int) -> Vector:
        cached = self._fractions.get(col)
        if cached is None:
            row = self.rows[col]
            scale = RationalFunction.from_laurent(row[col]).inverse()
            cached = {c: RationalFunction.from_laurent(value) * scale for c, value in row.items()}
            self._fractions[col] = cached
        return cached

    def reduce_vector(self, vec: Mapping[int, RationalFunction]) -> Vector:
        """Remainder of vec modulo the row space; supported on non-pivot columns."""
        current: Vector = {col: value for col, value in vec.items() if value}
        for col in [c for c in current if c in self.rows]:
            factor = current.pop(col)
            for c, value in self._as_fractions(col).items():
                if c == col:
                    continue
                updated = current.get(c, RationalFunction.zero()) - factor * value
                if updated:
                    current[c] = updated
                else:
                    current.pop(c, None)
        return current


def zeros(count: int) -> list[RationalFunction]:
    return [RationalFunction.zero() for _ in range(count)]


def rref(matrix: Sequence[Sequence[RationalFunction]], ncols: int) -> tuple[Matrix, list[int]]:
    rows = [list(row) for row in matrix]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        found = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if found is None:
            continue
        rows[rank], rows[found] = rows[found], rows[rank]
        scale = rows[rank][col].inverse()
        rows[rank] = [value * scale if value else value for value in rows[rank]]
        for i, row in enumerate(rows):
            if i == rank or not row[col]:
                continue
            factor = row[col]
            rows[i] = [x - factor * y if y else x for x, y in zip(row, rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def nullspace(matrix: Sequence[Sequence[RationalFunction]], ncols: int) -> Matrix:
    """Basis of {x : matrix x = 0}, one vector per free column."""
    reduced, pivots = rref(matrix, ncols)
    pivot_set = set(pivots)
    basis: Matrix = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = zeros(ncols)
        vec[free] = RationalFunction.one()
        for row, pivot in zip(reduced, pivots):
            if row[free]:
                vec[pivot] = -row[free]
        basis.append(vec)
    return basis


def inverse(matrix: Sequence[Sequence[RationalFunction]]) -> Matrix:
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise SingularMatrix(f"matrix is not square ({size} rows)")
    augmented = []
    for i, row in enumerate(matrix):
        unit = zeros(size)
        unit[i] = RationalFunction.one()
        augmented.append(list(row) + unit)
    reduced, pivots = rref(augmented, size)
    if pivots != list(range(size)):
        raise SingularMatrix(f"rank {len(pivots)} < {size}")
    return [row[size:] for row in reduced]


def mat_vec(matrix: Sequence[Sequence[RationalFunction]], vec: Sequence[RationalFunction]) -> list[RationalFunction]:
    result = []
    for row in matrix:
        total = RationalFunction.zero()
        for a, b in zip(row, vec):
            if a and b:
                total = total + a * b
        result.append(total)
    return result
