"""Degree-truncated exact model of U^- for the comet quiver Q(omega, r).

U^- is the free algebra on F_(i,l) and F_j modulo the commutation and Serre
relations. Graded pieces are built lazily, one degree at a time, from the
pieces directly below them. On top of the quotient sit the skew derivations
e'_iota, the direct sum U^- = sum_l F_j^(l) K_j, the Kashiwara operators and
the A-lattice spanned by Kashiwara monomials applied to 1.

The imaginary generators b_(i,l) are modelled by F_(i,l). Lattice checks are
exact only where every imaginary entry has size 1.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import count
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from comet.conf import setting
from comet.exceptions import DirectSumError, LatticeViolation, SingularMatrix, TruncationError
from comet.linalg import PRIME, Matrix, ReducedEchelon, inverse, mat_vec, nullspace, rank_profile_mod_p, zeros
from comet.qarith import LaurentPoly, RationalFunction, binom_or_zero, is_regular_at_v_inv, qfact, qint
from comet.quiver import (
    DegreeVector,
    Generator,
    QuiverParams,
    Word,
    color_vector,
    degree_pairing,
    format_word,
    word_degree,
    word_key,
    words_of_degree,
)

logger = logging.getLogger(__name__)

FACT_NAMES: Sequence[str] = (
    "moving_fjs",
    "gen_serre",
    "endo_serre",
    "z_recursion",
    "z_scaling",
    "z_vanishing",
    "expansion",
    "in_linfty",
    "opassoc",
    "ftilde_commute",
    "eprime_commute",
    "eprime_descends",
    "kj_nested",
    "decomp",
    "crystal_serre_lattice",
    "partinL",
    "rightmult",
)

Column = tuple[RationalFunction, ...]
Scalar = RationalFunction | LaurentPoly | int | Fraction


def pairing(a: Generator | DegreeVector, b: Generator | DegreeVector, omega: int = 2) -> int:
    """Symmetric bilinear form on I and I_infinity, extended to degree vectors."""
    if isinstance(a, Generator) and isinstance(b, Generator):
        if a.imaginary and b.imaginary:
            return a.label * b.label * (2 - 2 * omega)
        if a.imaginary or b.imaginary:
            return -(a.label if a.imaginary else b.label)
        return 2 if a.label == b.label else 0
    r = a.r if isinstance(a, DegreeVector) else b.r
    left = a if isinstance(a, DegreeVector) else a.degree(r)
    right = b if isinstance(b, DegreeVector) else b.degree(r)
    return degree_pairing(left, right, omega)


class NCPoly:
    """Finite combination of words in the generators with Q(v) coefficients.

    `degree` is a tag carried along when the element is known to be
    homogeneous; equality compares terms only.
    """

    __slots__ = ("_terms", "degree")

    def __init__(self, terms: Mapping[Sequence[Generator], Scalar] | None = None, degree: DegreeVector | None = None) -> None:
        cleaned: dict[Word, RationalFunction] = {}
        for word, coeff in (terms or {}).items():
            value = RationalFunction.coerce(coeff)
            if value:
                key = tuple(word)
                total = cleaned.get(key, RationalFunction.zero()) + value
                if total:
                    cleaned[key] = total
                else:
                    cleaned.pop(key, None)
        self._terms = cleaned
        self.degree = degree

    @classmethod
    def _wrap(cls, terms: dict[Word, RationalFunction], degree: DegreeVector | None) -> NCPoly:
        poly = object.__new__(cls)
        poly._terms = terms
        poly.degree = degree
        return poly

    @classmethod
    def zero(cls, degree: DegreeVector | None = None) -> NCPoly:
        return cls._wrap({}, degree)

    @classmethod
    def one(cls, r: int) -> NCPoly:
        return cls._wrap({(): RationalFunction.one()}, DegreeVector.zero(r))

    @classmethod
    def word(cls, word: Sequence[Generator], r: int, coeff: Scalar = 1) -> NCPoly:
        return cls({tuple(word): coeff}, word_degree(word, r))

    @classmethod
    def generator(cls, letter: Generator, r: int) -> NCPoly:
        return cls.word((letter,), r)

    @classmethod
    def divided_power(cls, letter: Generator, n: int, r: int) -> NCPoly:
        """F^(n) = F^n / [n]!."""
        if n < 0:
            return cls.zero()
        coeff = RationalFunction.from_laurent(qfact(n)).inverse()
        return cls.word((letter,) * n, r, coeff)

    def items(self) -> Iterator[tuple[Word, RationalFunction]]:
        return iter(self._terms.items())

    def words(self) -> list[Word]:
        return sorted(self._terms, key=word_key)

    def coefficient(self, word: Sequence[Generator]) -> RationalFunction:
        return self._terms.get(tuple(word), RationalFunction.zero())

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def _sum_degree(self, other: NCPoly) -> DegreeVector | None:
        if self.degree == other.degree:
            return self.degree
        if not self._terms and self.degree is None:
            return other.degree
        if not other._terms and other.degree is None:
            return self.degree
        return None

    def __add__(self, other: NCPoly) -> NCPoly:
        if not isinstance(other, NCPoly):
            return NotImplemented
        terms = dict(self._terms)
        for word, coeff in other._terms.items():
            total = terms.get(word, RationalFunction.zero()) + coeff
            if total:
                terms[word] = total
            else:
                terms.pop(word, None)
        return NCPoly._wrap(terms, self._sum_degree(other))

    def __neg__(self) -> NCPoly:
        return NCPoly._wrap({word: -coeff for word, coeff in self._terms.items()}, self.degree)

    def __sub__(self, other: NCPoly) -> NCPoly:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Scalar) -> NCPoly:
        value = RationalFunction.coerce(factor)
        if not value:
            return NCPoly.zero(self.degree)
        return NCPoly._wrap({word: coeff * value for word, coeff in self._terms.items()}, self.degree)

    def __mul__(self, other: object) -> NCPoly:
        if isinstance(other, NCPoly):
            terms: dict[Word, RationalFunction] = {}
            for w1, c1 in self._terms.items():
                for w2, c2 in other._terms.items():
                    word = w1 + w2
                    total = terms.get(word, RationalFunction.zero()) + c1 * c2
                    if total:
                        terms[word] = total
                    else:
                        terms.pop(word, None)
            degree = self.degree + other.degree if self.degree is not None and other.degree is not None else None
            return NCPoly._wrap(terms, degree)
        if isinstance(other, (RationalFunction, LaurentPoly, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: object) -> NCPoly:
        if isinstance(other, (RationalFunction, LaurentPoly, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def text(self, r: int) -> str:
        if not self._terms:
            return "0"
        parts = []
        for word in self.words():
            coeff = self._terms[word]
            body = format_word(word, r)
            if coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"({coeff.text()})*{body}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"NCPoly({len(self._terms)} terms, degree={self.degree})"


def _serre_terms(j: Generator, iota: Generator, omega: int) -> tuple[int, list[tuple[Word, int, int]]]:
    """(N, [(word, t, sign)]) for sum_{t+t'=N} (-1)^t F_j^(t) F_iota F_j^(t'), N = 1 - (j, iota)."""
    top = 1 - pairing(j, iota, omega)
    terms = [((j,) * t + (iota,) + (j,) * (top - t), t, -1 if t % 2 else 1) for t in range(top + 1)]
    return top, terms


def _same_up_to_sign(a: Mapping[Word, LaurentPoly], b: Mapping[Word, LaurentPoly]) -> bool:
    if a.keys() != b.keys():
        return False
    return all(a[w] == b[w] for w in a) or all(a[w] == -b[w] for w in a)


def _relation_rows(params: QuiverParams) -> list[tuple[DegreeVector, dict[Word, LaurentPoly]]]:
    """Defining relations, each Serre element scaled by [N]! so coefficients stay Laurent."""
    rows: list[tuple[DegreeVector, dict[Word, LaurentPoly]]] = []
    reals = params.real_generators()
    for s, js in enumerate(reals):
        for jt in reals[s + 1:]:
            commutator = {(js, jt): LaurentPoly.one(), (jt, js): -LaurentPoly.one()}
            rows.append((word_degree((js, jt), params.r), commutator))
    for j in reals:
        for iota in params.generators():
            if iota == j:
                continue
            top, terms = _serre_terms(j, iota, params.omega)
            scaled = {word: sign * binom_or_zero(top, t) for word, t, sign in terms}
            if not iota.imaginary:
                if not any(_same_up_to_sign(scaled, existing) for _, existing in rows):
                    raise AssertionError(f"real Serre element for {j}, {iota} is not a commutator")
                continue
            rows.append((word_degree(terms[0][0], params.r), scaled))
    return rows


def relation_set(params: QuiverParams) -> list[NCPoly]:
    """Commutators [F_js, F_jt] for s < t and the Serre elements of every real j with every imaginary index."""
    relations: list[NCPoly] = []
    for degree, scaled in _relation_rows(params):
        words = list(scaled)
        if len(words) == 2 and all(not letter.imaginary for letter in words[0]):
            relations.append(NCPoly(scaled, degree))
            continue
        letters = words[0]
        j = next(letter for letter in letters if not letter.imaginary)
        top = len(letters) - 1
        normalizer = RationalFunction.from_laurent(qfact(top)).inverse()
        relations.append(NCPoly({word: RationalFunction.from_laurent(coeff) * normalizer for word, coeff in scaled.items()}, degree))
        logger.debug("Serre relation for %s in degree %s", j, degree)
    return relations


@dataclass
class GradedPiece:
    degree: DegreeVector
    words: tuple[Word, ...]
    index: dict[Word, int]
    echelon: ReducedEchelon
    basis: list[Word]
    basis_columns: list[int]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class FactOutcome:
    passed: bool
    witness: str | None = None
    note: str = ""


class GradedQuotient:
    """U^-[d] for every d in the truncation box, built on first use."""

    def __init__(
        self,
        params: QuiverParams,
        max_words: int | None = None,
        rank_trials: int | None = None,
        seed: int | None = None,
    ) -> None:
        self.params = params
        self.max_words = max_words if max_words is not None else setting("COMET_MAX_WORDS", 10_000)
        self.rank_trials = max(1, rank_trials if rank_trials is not None else setting("COMET_RANK_TRIALS", 3))
        self.seed = seed if seed is not None else setting("COMET_SEED", 0)
        self._rng = random.Random(self.seed)
        self._letters = tuple(params.generators())
        self._relations = _relation_rows(params)
        self._pieces: dict[DegreeVector, GradedPiece] = {}
        self._kernels: dict[tuple[int, DegreeVector], Matrix] = {}
        self._splittings: dict[tuple[int, DegreeVector], tuple[Matrix, list[tuple[int, int]]]] = {}
        self._z_tables: dict[tuple[int, int, int], dict[int, NCPoly]] = {}
        self._images: dict[Word, NCPoly] = {(): NCPoly.one(params.r)}
        self._lattices: dict[tuple[DegreeVector, bool], LatticeBasis] = {}
        self._widened: dict[int, GradedQuotient] = {}

    @property
    def r(self) -> int:
        return self.params.r

    # -- graded pieces -------------------------------------------------

    def supports(self, d: DegreeVector) -> bool:
        """In the box, under the word bound, and spanned by the admitted generators."""
        return (
            self.params.in_range(d)
            and d.n <= self.params.max_loop
            and self.params.word_count(d) <= self.max_words
        )

    def _check(self, d: DegreeVector) -> None:
        if not self.params.in_range(d):
            raise TruncationError(f"degree {d} is outside the truncation box")
        words = self.params.word_count(d)
        if words > self.max_words:
            logger.warning("Skipping degree %s: %d words exceed the bound %d", d, words, self.max_words)
            raise TruncationError(f"degree {d} has {words} words, above the bound {self.max_words}")

    def piece(self, d: DegreeVector) -> GradedPiece:
        cached = self._pieces.get(d)
        if cached is not None:
            return cached
        self._check(d)
        words = words_of_degree(d, self._letters)
        index = {word: col for col, word in enumerate(words)}
        candidates = self._ideal_candidates(d, index)
        echelon = ReducedEchelon()
        if candidates:
            chosen = self._independent_rows(d, candidates)
            for position in chosen:
                if echelon.add(candidates[position]) is None:
                    logger.warning("Row %d in degree %s is dependent over Q(v) despite the modular profile", position, d)
        pivots = set(echelon.rows)
        basis_columns = [col for col in range(len(words)) if col not in pivots]
        piece = GradedPiece(
            degree=d,
            words=words,
            index=index,
            echelon=echelon,
            basis=[words[col] for col in basis_columns],
            basis_columns=basis_columns,
        )
        logger.info("U^-[%s]: %d words, relation rank %d, dim %d", d, len(words), echelon.rank, piece.dim)
        self._pieces[d] = piece
        return piece

    def _ideal_candidates(self, d: DegreeVector, index: Mapping[Word, int]) -> list[dict[int, LaurentPoly]]:
        """Spanning rows of the ideal in degree d: F_g times the ideal below, plus relations times words."""
        candidates: list[dict[int, LaurentPoly]] = []
        for letter in self._letters:
            rest = d - letter.degree(self.r)
            if not rest.is_nonnegative():
                continue
            lower = self.piece(rest)
            for row in lower.echelon.rows.values():
                candidates.append({index[(letter, *lower.words[col])]: value for col, value in row.items()})
        for rel_degree, terms in self._relations:
            rest = d - rel_degree
            if not rest.is_nonnegative():
                continue
            for tail in words_of_degree(rest, self._letters):
                candidates.append({index[word + tail]: value for word, value in terms.items()})
        return candidates

    def _independent_rows(self, d: DegreeVector, candidates: list[dict[int, LaurentPoly]]) -> list[int]:
        best: list[int] = []
        ranks: list[int] = []
        for _ in range(self.rank_trials):
            point = self._rng.randrange(2, PRIME - 1)
            chosen = rank_profile_mod_p(candidates, point)
            ranks.append(len(chosen))
            if len(chosen) > len(best):
                best = chosen
        if len(set(ranks)) > 1:
            logger.warning("Modular rank trials disagree in degree %s: %s", d, ranks)
        return best

    def basis(self, d: DegreeVector) -> list[Word]:
        return self.piece(d).basis

    def dim(self, d: DegreeVector) -> int:
        return self.piece(d).dim

    def build(self, upto: DegreeVector | None = None) -> list[DegreeVector]:
        """Build every supported piece (inside `upto` if given); returns the degrees built."""
        built = []
        for d in self.params.degrees(upto):
            if self.supports(d):
                self.piece(d)
                built.append(d)
        return built

    def widened(self, max_j: int) -> GradedQuotient:
        """This quotient with the per-color bound raised to max_j; self when it is already that wide."""
        if max_j <= self.params.max_j:
            return self
        cached = self._widened.get(max_j)
        if cached is None:
            logger.debug("Widening the color bound from %d to %d", self.params.max_j, max_j)
            cached = GradedQuotient(replace(self.params, max_j=max_j), self.max_words, self.rank_trials, self.seed)
            self._widened[max_j] = cached
        return cached

    # -- elements --------------------------------------------------------

    def gen(self, letter: Generator) -> NCPoly:
        return NCPoly.generator(letter, self.r)

    def fdiv(self, color: int, n: int) -> NCPoly:
        """F_{j_color}^(n); zero for n < 0."""
        if n < 0:
            return NCPoly.zero(DegreeVector.zero(self.r))
        return NCPoly.divided_power(Generator.real(color), n, self.r)

    def one(self) -> NCPoly:
        return NCPoly.one(self.r)

    def degree_of(self, x: NCPoly) -> DegreeVector:
        if x.degree is not None:
            return x.degree
        degrees = {word_degree(word, self.r) for word, _ in x.items()}
        if len(degrees) != 1:
            raise ValueError("element is zero without a degree tag or is not homogeneous")
        return degrees.pop()

    def reduce(self, x: NCPoly, degree: DegreeVector | None = None) -> Column:
        """Coordinates of the image of x in U^-[d] over the stored basis."""
        d = degree if degree is not None else self.degree_of(x)
        piece = self.piece(d)
        vec: dict[int, RationalFunction] = {}
        for word, coeff in x.items():
            col = piece.index.get(word)
            if col is None:
                raise ValueError(f"word {format_word(word, self.r)} does not have degree {d} or uses an excluded generator")
            vec[col] = coeff
        remainder = piece.echelon.reduce_vector(vec)
        zero = RationalFunction.zero()
        return tuple(remainder.get(col, zero) for col in piece.basis_columns)

    def lift(self, d: DegreeVector, column: Sequence[RationalFunction]) -> NCPoly:
        basis = self.basis(d)
        return NCPoly({word: coeff for word, coeff in zip(basis, column) if coeff}, d)

    def normal_form(self, x: NCPoly, degree: DegreeVector | None = None) -> NCPoly:
        d = degree if degree is not None else self.degree_of(x)
        return self.lift(d, self.reduce(x, d))

    def is_zero(self, x: NCPoly, degree: DegreeVector | None = None) -> bool:
        if x.is_zero:
            return True
        return not any(self.reduce(x, degree))

    def equal(self, x: NCPoly, y: NCPoly, degree: DegreeVector | None = None) -> bool:
        if degree is None:
            degree = x.degree if x.degree is not None else y.degree
        return self.is_zero(x - y, degree)

    # -- skew derivations ------------------------------------------------

    def eprime(self, iota: Generator, x: NCPoly) -> NCPoly:
        """e'_iota on representatives: delete one occurrence of iota, twisted by v^(iota, prefix)."""
        omega = self.params.omega
        shift = iota.degree(self.r)
        terms: dict[Word, RationalFunction] = {}
        for word, coeff in x.items():
            prefix = DegreeVector.zero(self.r)
            for position, letter in enumerate(word):
                if letter == iota:
                    reduced = word[:position] + word[position + 1:]
                    twist = coeff * RationalFunction.monomial(degree_pairing(shift, prefix, omega))
                    total = terms.get(reduced, RationalFunction.zero()) + twist
                    if total:
                        terms[reduced] = total
                    else:
                        terms.pop(reduced, None)
                prefix = prefix + letter.degree(self.r)
        degree = None
        if x.degree is not None and (x.degree - shift).is_nonnegative():
            degree = x.degree - shift
        return NCPoly._wrap(terms, degree)

    def kernel(self, color: int, d: DegreeVector) -> Matrix:
        """Basis of K_j[d] = ker e'_j, as coordinate columns over basis(d)."""
        key = (color, d)
        cached = self._kernels.get(key)
        if cached is not None:
            return cached
        basis = self.basis(d)
        j = Generator.real(color)
        target = d - j.degree(self.r)
        if not target.is_nonnegative():
            vectors = [[RationalFunction.one() if i == k else RationalFunction.zero() for i in range(len(basis))] for k in range(len(basis))]
        else:
            images = [self.reduce(self.eprime(j, NCPoly.word(word, self.r)), target) for word in basis]
            rows = [[images[col][row] for col in range(len(basis))] for row in range(self.dim(target))]
            vectors = nullspace(rows, len(basis))
        logger.debug("K_%d[%s] has dimension %d", color, d, len(vectors))
        self._kernels[key] = vectors
        return vectors

    def kernel_elements(self, color: int, d: DegreeVector) -> list[NCPoly]:
        return [self.lift(d, vector) for vector in self.kernel(color, d)]

    def _splitting(self, color: int, d: DegreeVector) -> tuple[Matrix, list[tuple[int, int]]]:
        key = (color, d)
        cached = self._splittings.get(key)
        if cached is not None:
            return cached
        columns: list[Column] = []
        layout: list[tuple[int, int]] = []
        for power in range(d.m[color - 1] + 1):
            lower = d - color_vector(color, self.r, power)
            for position, vector in enumerate(self.kernel(color, lower)):
                element = self.fdiv(color, power) * self.lift(lower, vector)
                columns.append(self.reduce(element, d))
                layout.append((power, position))
        size = self.dim(d)
        if len(columns) != size:
            raise DirectSumError(d, f"{len(columns)} summand vectors for a space of dimension {size}")
        matrix = [[columns[c][row] for c in range(size)] for row in range(size)]
        try:
            solver = inverse(matrix) if size else []
        except SingularMatrix as exc:
            raise DirectSumError(d, f"summands F_j^(l) K_j are dependent ({exc})") from exc
        self._splittings[key] = (solver, layout)
        return solver, layout

    def decompose_real(self, j: Generator, x: NCPoly, degree: DegreeVector | None = None) -> list[tuple[int, NCPoly]]:
        """The nonzero components z_l in K_j of x = sum_l F_j^(l) z_l, in normal form."""
        if j.imaginary:
            raise ValueError("decompose_real needs a real vertex")
        d = degree if degree is not None else self.degree_of(x)
        solver, layout = self._splitting(j.label, d)
        coefficients = mat_vec(solver, self.reduce(x, d)) if solver else []
        parts: dict[int, list[RationalFunction]] = {}
        for coeff, (power, position) in zip(coefficients, layout):
            if not coeff:
                continue
            lower = d - color_vector(j.label, self.r, power)
            vector = self.kernel(j.label, lower)[position]
            acc = parts.setdefault(power, zeros(len(vector)))
            for i, value in enumerate(vector):
                if value:
                    acc[i] = acc[i] + coeff * value
        result = []
        for power in sorted(parts):
            if any(parts[power]):
                lower = d - color_vector(j.label, self.r, power)
                result.append((power, self.lift(lower, parts[power])))
        return result

    def reassemble(self, j: Generator, parts: Iterable[tuple[int, NCPoly]], d: DegreeVector) -> NCPoly:
        total = NCPoly.zero(d)
        for power, z in parts:
            total = total + self.fdiv(j.label, power) * z
        return total

    # -- Kashiwara operators ---------------------------------------------

    def kashiwara_f(self, iota: Generator, x: NCPoly, degree: DegreeVector | None = None) -> NCPoly:
        d = degree if degree is not None else self.degree_of(x)
        target = d + iota.degree(self.r)
        if not self.supports(target) or (iota.imaginary and iota.label > self.params.max_loop):
            raise TruncationError(f"f~_{iota.text(self.r)} leaves the truncation box at {target}")
        if iota.imaginary:
            return self.normal_form(self.gen(iota) * x, target)
        raised = NCPoly.zero(target)
        for power, z in self.decompose_real(iota, x, d):
            raised = raised + self.fdiv(iota.label, power + 1) * z
        return self.normal_form(raised, target)

    def kashiwara_e_real(self, j: Generator, x: NCPoly, degree: DegreeVector | None = None) -> NCPoly:
        d = degree if degree is not None else self.degree_of(x)
        target = d - j.degree(self.r)
        if not target.is_nonnegative():
            return NCPoly.zero()
        lowered = NCPoly.zero(target)
        for power, z in self.decompose_real(j, x, d):
            if power >= 1:
                lowered = lowered + self.fdiv(j.label, power - 1) * z
        return self.normal_form(lowered, target)

    def apply_word(self, word: Sequence[Generator]) -> NCPoly:
        """f~_(w_1) ... f~_(w_n) . 1, memoized on suffixes."""
        word = tuple(word)
        cached = self._images.get(word)
        if cached is None:
            cached = self.kashiwara_f(word[0], self.apply_word(word[1:]))
            self._images[word] = cached
        return cached

    # -- z data and Serre orders -----------------------------------------

    def z_table(self, l: int, c: int, color: int = 1) -> dict[int, NCPoly]:
        """k -> z_(k,c) with b_(i,l) F_j^(c) = sum_k F_j^(k) z_(k,c)."""
        if self.r < 1:
            raise ValueError("z data needs a real vertex")
        if not 1 <= l <= self.params.max_loop or c < 0:
            raise ValueError(f"z_(k,{c}) for l = {l} is outside 1 <= l <= {self.params.max_loop}, c >= 0")
        key = (l, c, color)
        cached = self._z_tables.get(key)
        if cached is not None:
            return cached
        j = Generator.real(color)
        d = DegreeVector(l, color_vector(color, self.r, c).m)
        product = self.gen(Generator.imag(l)) * self.fdiv(color, c)
        parts = dict(self.decompose_real(j, product, d))
        table = {k: parts.get(k, NCPoly.zero(d - color_vector(color, self.r, k))) for k in range(c + 1)}
        self._z_tables[key] = table
        return table

    def z(self, l: int, k: int, c: int, color: int = 1) -> NCPoly:
        """z_(k,c), zero for k < 0, c < 0 or k > c."""
        if k < 0 or c < 0 or k > c:
            return NCPoly.zero()
        return self.z_table(l, c, color)[k]

    def serre_sum(self, x: NCPoly, j: Generator, order: int) -> NCPoly:
        """sum_{t=0}^{a+1} (-1)^(a+1-t) F_j^(a+1-t) x F_j^(t)."""
        total = NCPoly.zero()
        for t in range(order + 2):
            sign = -1 if (order + 1 - t) % 2 else 1
            total = total + (self.fdiv(j.label, order + 1 - t) * x * self.fdiv(j.label, t)).scale(sign)
        return total

    def serre_order(self, x: NCPoly, j: Generator) -> int | None:
        d = self.degree_of(x)
        if self.is_zero(x, d):
            raise ValueError("serre_order is undefined for zero")
        for order in count():
            target = d + color_vector(j.label, self.r, order + 1)
            if not self.supports(target):
                return None
            if self.is_zero(self.serre_sum(x, j, order), target):
                return order
        return None

    # -- lattice -----------------------------------------------------------

    def lattice(self, d: DegreeVector, exact: bool = True) -> LatticeBasis:
        key = (d, exact)
        cached = self._lattices.get(key)
        if cached is None:
            cached = lattice_build(self, d, exact)
            self._lattices[key] = cached
        return cached


def build_quotient(params: QuiverParams, eager: bool = False, **options: int | None) -> GradedQuotient:
    quotient = GradedQuotient(params, **options)
    if eager:
        quotient.build()
    return quotient


def reduce(q: GradedQuotient, x: NCPoly) -> Column:
    return q.reduce(x)


def eprime(q: GradedQuotient, iota: Generator, x: NCPoly) -> NCPoly:
    return q.eprime(iota, x)


def decompose_real(q: GradedQuotient, j: Generator, x: NCPoly) -> list[tuple[int, NCPoly]]:
    return q.decompose_real(j, x)


def z_table(q: GradedQuotient, l: int, c: int) -> dict[int, NCPoly]:
    return q.z_table(l, c)


def serre_order(q: GradedQuotient, x: NCPoly, j: Generator) -> int | None:
    return q.serre_order(x, j)


def kashiwara_f(q: GradedQuotient, iota: Generator, x: NCPoly) -> NCPoly:
    return q.kashiwara_f(iota, x)


def kashiwara_e_real(q: GradedQuotient, j: Generator, x: NCPoly) -> NCPoly:
    return q.kashiwara_e_real(j, x)


@dataclass
class LatticeBasis:
    """A-basis of the span of Kashiwara monomials applied to 1 in one degree.

    `reduced` holds (pivot position, vector) pairs; each vector vanishes at
    the pivot positions of the vectors before it.
    """

    degree: DegreeVector
    quotient: GradedQuotient = field(repr=False)
    operator_words: list[Word]
    generators: list[Column]
    reduced: list[tuple[int, Column]]
    exact: bool = True

    @property
    def rank(self) -> int:
        return len(self.reduced)


def _order(value: RationalFunction) -> int:
    order = value.order
    if order is None:
        raise ValueError("zero has no order")
    return order


def _axpy(target: Column, factor: RationalFunction, source: Column) -> Column:
    """target - factor * source."""
    return tuple(t - factor * s if s else t for t, s in zip(target, source))


def lattice_build(q: GradedQuotient, d: DegreeVector, exact: bool = True) -> LatticeBasis:
    """Valuation-greedy echelon over A of the images f~_w . 1 for all operator words w of degree d."""
    if not q.supports(d):
        raise TruncationError(f"degree {d} is outside the supported range")
    imaginary = [Generator.imag(1)] if exact else [Generator.imag(l) for l in range(1, q.params.max_loop + 1)]
    letters = tuple(imaginary + q.params.real_generators())
    operator_words = list(words_of_degree(d, letters))
    generators = [q.reduce(q.apply_word(word), d) for word in operator_words]
    remaining = [column for column in generators if any(column)]
    reduced: list[tuple[int, Column]] = []
    for position in range(q.dim(d)):
        candidates = [column for column in remaining if column[position]]
        if not candidates:
            continue
        pivot = max(candidates, key=lambda column: _order(column[position]))
        survivors = []
        for column in remaining:
            if column is pivot:
                continue
            if column[position]:
                column = _axpy(column, column[position] / pivot[position], pivot)
            if any(column):
                survivors.append(column)
        remaining = survivors
        reduced.append((position, pivot))
    logger.debug("Lattice in degree %s: %d operator words, rank %d", d, len(operator_words), len(reduced))
    return LatticeBasis(d, q, operator_words, generators, reduced, exact)


def lattice_coordinates(lattice: LatticeBasis, x: NCPoly | Column) -> tuple[list[RationalFunction], Column]:
    """(coefficients over the reduced basis, residual)."""
    column = lattice.quotient.reduce(x, lattice.degree) if isinstance(x, NCPoly) else tuple(x)
    coefficients = []
    for position, vector in lattice.reduced:
        factor = column[position] / vector[position] if column[position] else RationalFunction.zero()
        coefficients.append(factor)
        if factor:
            column = _axpy(column, factor, vector)
    return coefficients, column


def lattice_contains(lattice: LatticeBasis, x: NCPoly | Column) -> bool:
    coefficients, residual = lattice_coordinates(lattice, x)
    return not any(residual) and all(is_regular_at_v_inv(c)[0] for c in coefficients)


def in_shrunk_lattice(lattice: LatticeBasis, x: NCPoly | Column) -> bool:
    """x in v^-1 L: every A-coordinate has order <= -1 and nothing is left over."""
    coefficients, residual = lattice_coordinates(lattice, x)
    return not any(residual) and all(c.order is None or c.order <= -1 for c in coefficients)


def lattice_equiv(lattice: LatticeBasis, x: NCPoly, y: NCPoly) -> bool:
    for name, element in (("x", x), ("y", y)):
        if not lattice_contains(lattice, element):
            raise LatticeViolation(f"{name} is not in the A-lattice of degree {lattice.degree}")
    q = lattice.quotient
    difference = tuple(a - b for a, b in zip(q.reduce(x, lattice.degree), q.reduce(y, lattice.degree)))
    return in_shrunk_lattice(lattice, difference)


# -- fact inventory --------------------------------------------------------


def _outcome(q: GradedQuotient, difference: NCPoly, degree: DegreeVector) -> FactOutcome:
    if q.is_zero(difference, degree):
        return FactOutcome(True)
    return FactOutcome(False, q.normal_form(difference, degree).text(q.r))


def _combine(outcomes: Iterable[FactOutcome]) -> FactOutcome:
    checked = 0
    for outcome in outcomes:
        checked += 1
        if not outcome.passed:
            return outcome
    return FactOutcome(True, note=f"{checked} checks")


def _need_real(q: GradedQuotient, colors: int = 1) -> None:
    if q.r < colors:
        raise ValueError(f"this fact needs r >= {colors}")


def _degree_param(q: GradedQuotient, params: Sequence[int]) -> DegreeVector:
    if len(params) != 1 + q.r:
        raise ValueError(f"expected a degree (n, m_1..m_{q.r}), got {tuple(params)}")
    return DegreeVector(params[0], tuple(params[1:]))


def _color_one(q: GradedQuotient, n: int, m: int) -> DegreeVector:
    return DegreeVector(n, color_vector(1, q.r, m).m)


def _fact_moving_fjs(q: GradedQuotient, l: int, n: int) -> FactOutcome:
    _need_real(q)
    x = q.gen(Generator.imag(l))
    d = _color_one(q, l, l + 1 + n)
    lhs = x * q.fdiv(1, l + 1 + n)
    rhs = NCPoly.zero(d)
    for t in range(l + 1):
        sign = -1 if (l + t) % 2 else 1
        rhs = rhs + (q.fdiv(1, l + 1 + n - t) * x * q.fdiv(1, t)).scale(sign * binom_or_zero(l + n - t, n))
    return _outcome(q, lhs - rhs, d)


def _fact_gen_serre(q: GradedQuotient, a: int, b: int) -> FactOutcome:
    _need_real(q)
    xy = q.gen(Generator.imag(a)) * q.gen(Generator.imag(b))
    d = _color_one(q, a + b, a + b + 1)
    return _outcome(q, q.serre_sum(xy, Generator.real(1), a + b), d)


def _fact_endo_serre(q: GradedQuotient, l: int) -> FactOutcome:
    _need_real(q)
    order = q.serre_order(q.gen(Generator.imag(l)), Generator.real(1))
    return FactOutcome(order == l, None if order == l else f"order {order}")


def _fact_z_recursion(q: GradedQuotient, l: int, k: int, c: int) -> FactOutcome:
    _need_real(q)
    if not 0 <= k <= c:
        raise ValueError("z_recursion needs 0 <= k <= c")
    d = _color_one(q, l, c - k)
    if c == 0:
        expected = q.gen(Generator.imag(l))
    else:
        j = q.gen(Generator.real(1))
        previous = q.z(l, k, c - 1)
        expected = (
            previous * j
            - (j * previous).scale(RationalFunction.monomial(-l + 2 * (c - k - 1)))
            + q.z(l, k - 1, c - 1).scale(RationalFunction.from_laurent(qint(k).shift(-l + 2 * (c - k))))
        ).scale(RationalFunction.from_laurent(qint(c)).inverse())
    return _outcome(q, q.z(l, k, c) - expected, d)


def _fact_z_scaling(q: GradedQuotient, l: int, k: int, c: int) -> FactOutcome:
    _need_real(q)
    if not 0 <= k <= c:
        raise ValueError("z_scaling needs 0 <= k <= c")
    d = _color_one(q, l, c - k)
    expected = q.z(l, 0, c - k).scale(RationalFunction.monomial(k * (c - k - l)))
    return _outcome(q, q.z(l, k, c) - expected, d)


def _fact_z_vanishing(q: GradedQuotient, l: int, c: int) -> FactOutcome:
    _need_real(q)
    if c <= l:
        raise ValueError("z_(0,c) vanishes only for c > l")
    return _outcome(q, q.z(l, 0, c), _color_one(q, l, c))


def _fact_expansion(q: GradedQuotient, l: int, n: int) -> FactOutcome:
    _need_real(q)
    d = _color_one(q, l, l + 1 + n)
    lhs = q.gen(Generator.imag(l)) * q.fdiv(1, l + 1 + n)
    rhs = NCPoly.zero(d)
    for r in range(l + 1):
        rhs = rhs + (q.fdiv(1, r + n + 1) * q.z(l, 0, l - r)).scale(RationalFunction.monomial(-r * (n + r + 1)))
    return _outcome(q, lhs - rhs, d)


def _require_exact_sector(l: int) -> None:
    if l != 1:
        raise ValueError("lattice checks are exact only for l = 1, where b_(i,1) = F_(i,1)")


def _fact_in_linfty(q: GradedQuotient, l: int, c: int) -> FactOutcome:
    _need_real(q)
    _require_exact_sector(l)
    if not 0 <= c <= l:
        raise ValueError("in_linfty needs 0 <= c <= l")
    d = _color_one(q, l, c)
    word = (Generator.imag(l),) + (Generator.real(1),) * c
    image = q.apply_word(word)
    z = q.z(l, 0, c)
    passed = lattice_equiv(q.lattice(d), z, image)
    return FactOutcome(passed, None if passed else (z - image).text(q.r))


def _fact_crystal_serre_lattice(q: GradedQuotient, l: int, n: int) -> FactOutcome:
    _need_real(q)
    _require_exact_sector(l)
    j, b = Generator.real(1), Generator.imag(l)
    d = _color_one(q, l, l + n + 1)
    left = q.apply_word((b,) + (j,) * (l + n + 1))
    right = q.apply_word((j, b) + (j,) * (l + n))
    passed = lattice_equiv(q.lattice(d), left, right)
    return FactOutcome(passed, None if passed else q.normal_form(left - right, d).text(q.r))


def _fact_opassoc(q: GradedQuotient, nx: int, mx: int, nz: int, mz: int) -> FactOutcome:
    _need_real(q)
    j = Generator.real(1)
    dx, dz = _color_one(q, nx, mx), _color_one(q, nz, mz)
    total = dx + dz

    def checks() -> Iterator[FactOutcome]:
        for word in q.basis(dx):
            x = NCPoly.word(word, q.r)
            for z in q.kernel_elements(1, dz):
                if q.supports(total + j.degree(q.r)):
                    target = total + j.degree(q.r)
                    yield _outcome(q, q.kashiwara_f(j, x * z, total) - q.kashiwara_f(j, x, dx) * z, target)
                for size in range(1, q.params.max_loop + 1):
                    b = Generator.imag(size)
                    target = total + b.degree(q.r)
                    if q.supports(target):
                        yield _outcome(q, q.kashiwara_f(b, x * z, total) - q.kashiwara_f(b, x, dx) * z, target)

    return _combine(checks())


def _fact_ftilde_commute(q: GradedQuotient, *degree: int) -> FactOutcome:
    _need_real(q, 2)
    d = _degree_param(q, degree)
    j1, j2 = Generator.real(1), Generator.real(2)
    target = d + j1.degree(q.r) + j2.degree(q.r)

    def checks() -> Iterator[FactOutcome]:
        for word in q.basis(d):
            u = NCPoly.word(word, q.r)
            one_two = q.kashiwara_f(j1, q.kashiwara_f(j2, u, d))
            two_one = q.kashiwara_f(j2, q.kashiwara_f(j1, u, d))
            yield _outcome(q, one_two - two_one, target)

    return _combine(checks())


def _fact_eprime_commute(q: GradedQuotient, *degree: int) -> FactOutcome:
    _need_real(q, 2)
    d = _degree_param(q, degree)
    j1, j2 = Generator.real(1), Generator.real(2)
    target = d - j1.degree(q.r) - j2.degree(q.r)
    if not target.is_nonnegative():
        raise ValueError("eprime_commute needs m_1, m_2 >= 1")

    def checks() -> Iterator[FactOutcome]:
        for word in q.basis(d):
            x = NCPoly.word(word, q.r)
            yield _outcome(q, q.eprime(j1, q.eprime(j2, x)) - q.eprime(j2, q.eprime(j1, x)), target)

    return _combine(checks())


def _fact_kj_nested(q: GradedQuotient, *degree: int) -> FactOutcome:
    _need_real(q, 2)
    d = _degree_param(q, degree)
    j1, j2 = Generator.real(1), Generator.real(2)

    def checks() -> Iterator[FactOutcome]:
        for z in q.kernel_elements(2, d):
            for power, part in q.decompose_real(j1, z, d):
                lower = d - color_vector(1, q.r, power) - j2.degree(q.r)
                if lower.is_nonnegative():
                    yield _outcome(q, q.eprime(j2, part), lower)

    return _combine(checks())


def _fact_eprime_descends(q: GradedQuotient, *degree: int) -> FactOutcome:
    d = _degree_param(q, degree)
    piece = q.piece(d)
    relations = [NCPoly(terms, rel_degree) for rel_degree, terms in q._relations if rel_degree == d]
    ideal = [NCPoly({piece.words[col]: value for col, value in row.items()}, d) for row in piece.echelon.rows.values()]

    def checks() -> Iterator[FactOutcome]:
        for element in relations + ideal:
            for letter in q.params.generators():
                lower = d - letter.degree(q.r)
                if lower.is_nonnegative():
                    yield _outcome(q, q.eprime(letter, element), lower)

    return _combine(checks())


def _fact_decomp(q: GradedQuotient, *degree: int) -> FactOutcome:
    d = _degree_param(q, degree)

    def checks() -> Iterator[FactOutcome]:
        for j in q.params.real_generators():
            try:
                q._splitting(j.label, d)
            except DirectSumError as exc:
                yield FactOutcome(False, note=str(exc))
                return
            for word in q.basis(d):
                x = NCPoly.word(word, q.r)
                parts = q.decompose_real(j, x, d)
                for power, z in parts:
                    lower = d - color_vector(j.label, q.r, power) - j.degree(q.r)
                    if lower.is_nonnegative():
                        yield _outcome(q, q.eprime(j, z), lower)
                yield _outcome(q, q.reassemble(j, parts, d) - x, d)

    return _combine(checks())


def _fact_partinl(q: GradedQuotient, *degree: int) -> FactOutcome:
    d = _degree_param(q, degree)
    if d.n > 1:
        raise ValueError("partinL is checked in the exact sector n <= 1")
    lattice = q.lattice(d)

    def checks() -> Iterator[FactOutcome]:
        for column in lattice.generators:
            element = q.lift(d, column)
            for j in q.params.real_generators():
                for power, part in q.decompose_real(j, element, d):
                    lower = d - color_vector(j.label, q.r, power)
                    inside = lattice_contains(q.lattice(lower), part)
                    yield FactOutcome(inside, None if inside else part.text(q.r))

    return _combine(checks())


def _fact_rightmult(q: GradedQuotient, nk: int, mk: int, nz: int, mz: int) -> FactOutcome:
    _need_real(q)
    if nk + nz > 1:
        raise ValueError("rightmult is checked in the exact sector n <= 1")
    dk, dz = _color_one(q, nk, mk), _color_one(q, nz, mz)
    j = Generator.real(1)
    total = dk + dz
    lattice = q.lattice(total)
    below = dz - j.degree(q.r)

    def in_kernel(z: NCPoly) -> bool:
        return not below.is_nonnegative() or q.is_zero(q.eprime(j, z), below)

    def checks() -> Iterator[FactOutcome]:
        left = [q.lift(dk, column) for column in q.lattice(dk).generators]
        right = [z for z in (q.lift(dz, column) for column in q.lattice(dz).generators) if in_kernel(z)]
        for k in left:
            for z in right:
                inside = lattice_contains(lattice, k * z)
                yield FactOutcome(inside, None if inside else (k * z).text(q.r))

    return _combine(checks())


FACTS: Mapping[str, Callable[..., FactOutcome]] = {
    "moving_fjs": _fact_moving_fjs,
    "gen_serre": _fact_gen_serre,
    "endo_serre": _fact_endo_serre,
    "z_recursion": _fact_z_recursion,
    "z_scaling": _fact_z_scaling,
    "z_vanishing": _fact_z_vanishing,
    "expansion": _fact_expansion,
    "in_linfty": _fact_in_linfty,
    "opassoc": _fact_opassoc,
    "ftilde_commute": _fact_ftilde_commute,
    "eprime_commute": _fact_eprime_commute,
    "eprime_descends": _fact_eprime_descends,
    "kj_nested": _fact_kj_nested,
    "decomp": _fact_decomp,
    "crystal_serre_lattice": _fact_crystal_serre_lattice,
    "partinL": _fact_partinl,
    "rightmult": _fact_rightmult,
}


# Largest color-1 count a case of each single-color fact reaches.
FACT_REACH: Mapping[str, Callable[..., int]] = {
    "moving_fjs": lambda l, n: l + 1 + n,
    "gen_serre": lambda a, b: a + b + 1,
    "endo_serre": lambda l: l + 1,
    "z_recursion": lambda l, k, c: c,
    "z_scaling": lambda l, k, c: c,
    "z_vanishing": lambda l, c: c,
    "expansion": lambda l, n: l + 1 + n,
    "in_linfty": lambda l, c: c,
    "crystal_serre_lattice": lambda l, n: l + n + 1,
}


def fact_quotient(q: GradedQuotient, fact: str, params: Sequence[int]) -> GradedQuotient:
    """The quotient a case runs on: q, or q widened so the case's degrees fit."""
    reach = FACT_REACH.get(fact)
    if reach is None or q.r < 1:
        return q
    try:
        needed = reach(*params)
    except TypeError:
        raise ValueError(f"wrong number of parameters for {fact}: {tuple(params)}") from None
    return q.widened(needed)


def check_fact(q: GradedQuotient, fact: str, params: Sequence[int]) -> FactOutcome:
    try:
        check = FACTS[fact]
    except KeyError:
        raise ValueError(f"unknown fact {fact!r}; expected one of {', '.join(FACT_NAMES)}") from None
    values = tuple(int(p) for p in params)
    return check(fact_quotient(q, fact, values), *values)


def verify_algebra_fact(q: GradedQuotient, fact: str, params: Sequence[int]) -> bool:
    return check_fact(q, fact, params).passed


def fact_grid(q: GradedQuotient, fact: str) -> list[tuple[int, ...]]:
    """Default parameter grid of a fact.

    Single-color facts keep every case whose imaginary weight fits the
    truncation; check_fact widens the color bound for them as needed.
    """
    if fact not in FACTS:
        raise ValueError(f"unknown fact {fact!r}")
    p = q.params
    loops = range(1, p.max_loop + 1)

    def ok(n: int, m: int) -> bool:
        return q.r >= 1 and q.supports(_color_one(q, n, m))

    def reachable(n: int, m: int) -> bool:
        return q.r >= 1 and q.widened(m).supports(_color_one(q, n, m))

    if fact == "moving_fjs":
        return [(l, n) for l in loops if l <= 3 for n in range(3) if reachable(l, l + 1 + n)]
    if fact == "gen_serre":
        return [(a, b) for a in loops for b in loops if a + b <= 4 and reachable(a + b, a + b + 1)]
    if fact == "endo_serre":
        return [(l,) for l in loops if reachable(l, l + 1)]
    if fact in ("z_recursion", "z_scaling"):
        return [(l, k, c) for l in loops if l <= 3 for c in range(l + 3) for k in range(c + 1) if reachable(l, c)]
    if fact == "z_vanishing":
        return [(l, c) for l in loops if l <= 3 for c in range(l + 1, l + 3) if reachable(l, c)]
    if fact == "expansion":
        return [(l, n) for l in loops if l <= 2 for n in range(2) if reachable(l, l + 1 + n)]
    if fact == "in_linfty":
        return [(1, c) for c in range(2) if reachable(1, c)]
    if fact == "crystal_serre_lattice":
        return [(1, n) for n in range(3) if reachable(1, n + 2)]
    if fact == "opassoc":
        return [
            (nx, mx, nz, mz)
            for nx in range(2)
            for mx in range(2)
            for nz in range(2)
            for mz in range(2)
            if ok(nx + nz, mx + mz + 1)
        ]
    if fact == "rightmult":
        return [
            (nk, mk, nz, mz)
            for nk in range(2)
            for mk in range(2)
            for nz in range(2)
            for mz in range(2)
            if nk + nz <= 1 and ok(nk + nz, mk + mz)
        ]
    supported = [d for d in p.degrees() if q.supports(d)]
    if fact == "ftilde_commute":
        if q.r < 2:
            return []
        lift = color_vector(1, q.r) + color_vector(2, q.r)
        return [d.flat() for d in supported if q.supports(d + lift)]
    if fact == "eprime_commute":
        return [d.flat() for d in supported if q.r >= 2 and d.m[0] >= 1 and d.m[1] >= 1]
    if fact == "kj_nested":
        return [d.flat() for d in supported if q.r >= 2]
    if fact == "partinL":
        return [d.flat() for d in supported if d.n <= 1 and q.r >= 1]
    return [d.flat() for d in supported]
