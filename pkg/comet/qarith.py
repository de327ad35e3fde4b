"""Exact Laurent polynomials and rational functions in v, quantum numbers and
the q-binomial identity inventory.

Coefficients are `fractions.Fraction`; polynomial gcd and exact division go
through SymPy's dense univariate kernel over QQ.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from sympy.polys.densearith import dup_div
from sympy.polys.domains import QQ
from sympy.polys.euclidtools import dup_inner_gcd

Scalar = int | Fraction

IDENTITY_NAMES: Sequence[str] = (
    "triple_binom",
    "q_triple",
    "steep_sum",
    "serre_core",
    "pascal",
    "alternating_zero",
    "subset",
    "alternating_binom",
    "q_conversion",
)


class LaurentPoly:
    """Immutable finite sum of c * v^e with exact rational c."""

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None) -> None:
        cleaned: dict[int, Fraction] = {}
        for exp, coeff in (coeffs or {}).items():
            if coeff:
                cleaned[int(exp)] = Fraction(coeff)
        self._coeffs = cleaned
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, coeffs: dict[int, Fraction]) -> LaurentPoly:
        poly = object.__new__(cls)
        poly._coeffs = coeffs
        poly._hash = None
        return poly

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls._wrap({})

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls._wrap({0: Fraction(1)})

    @classmethod
    def constant(cls, value: Scalar) -> LaurentPoly:
        return cls({0: value})

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> LaurentPoly:
        return cls({exp: coeff})

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    @property
    def is_monomial(self) -> bool:
        return len(self._coeffs) == 1

    @property
    def is_one(self) -> bool:
        return self._coeffs == {0: 1}

    @property
    def min_exp(self) -> int:
        if not self._coeffs:
            raise ValueError("the zero polynomial has no exponents")
        return min(self._coeffs)

    @property
    def max_exp(self) -> int:
        if not self._coeffs:
            raise ValueError("the zero polynomial has no exponents")
        return max(self._coeffs)

    @property
    def leading_coeff(self) -> Fraction:
        return self._coeffs[self.max_exp]

    def coefficient(self, exp: int) -> Fraction:
        return self._coeffs.get(exp, Fraction(0))

    def terms(self) -> Iterator[tuple[int, Fraction]]:
        """Yield (exponent, coefficient) pairs by descending exponent."""
        for exp in sorted(self._coeffs, reverse=True):
            yield exp, self._coeffs[exp]

    def _coerce(self, other: object) -> LaurentPoly | None:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other: object) -> LaurentPoly:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        result = dict(self._coeffs)
        for exp, coeff in rhs._coeffs.items():
            total = result.get(exp, 0) + coeff
            if total:
                result[exp] = total
            else:
                result.pop(exp, None)
        return LaurentPoly._wrap(result)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._wrap({exp: -coeff for exp, coeff in self._coeffs.items()})

    def __sub__(self, other: object) -> LaurentPoly:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> LaurentPoly:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> LaurentPoly:
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly.zero()
            return LaurentPoly._wrap({exp: coeff * other for exp, coeff in self._coeffs.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        result: dict[int, Fraction] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                exp = e1 + e2
                result[exp] = result.get(exp, 0) + c1 * c2
        return LaurentPoly._wrap({exp: coeff for exp, coeff in result.items() if coeff})

    __rmul__ = __mul__

    def __pow__(self, power: int) -> LaurentPoly:
        if power < 0:
            if not self.is_monomial:
                raise ArithmeticError("only monomials have Laurent inverses")
            (exp, coeff), = self._coeffs.items()
            return LaurentPoly._wrap({exp * power: Fraction(1) / coeff ** (-power)})
        result = LaurentPoly.one()
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._coeffs == rhs._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._coeffs.items()))
        return self._hash

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by v^k."""
        if not k:
            return self
        return LaurentPoly._wrap({exp + k: coeff for exp, coeff in self._coeffs.items()})

    def scale_exponents(self, factor: int) -> LaurentPoly:
        """Substitute v -> v^factor; factor 2 turns a polynomial in q into one in v with q = v^2."""
        if factor == 0:
            raise ValueError("exponent factor must be nonzero")
        return LaurentPoly._wrap({exp * factor: coeff for exp, coeff in self._coeffs.items()})

    def bar(self) -> LaurentPoly:
        return self.scale_exponents(-1)

    def evaluate(self, point: Scalar) -> Fraction:
        point = Fraction(point)
        if not point and self._coeffs and self.min_exp < 0:
            raise ZeroDivisionError("negative powers of v at v = 0")
        return sum((coeff * point**exp for exp, coeff in self._coeffs.items()), Fraction(0))

    def evaluate_mod(self, point: int, prime: int) -> int:
        """Value at v = point in GF(prime)."""
        inverse = pow(point, -1, prime)
        total = 0
        for exp, coeff in self._coeffs.items():
            base = pow(point, exp, prime) if exp >= 0 else pow(inverse, -exp, prime)
            total += coeff.numerator * pow(coeff.denominator, -1, prime) * base
        return total % prime

    def divide_exact(self, other: LaurentPoly) -> LaurentPoly:
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero:
            return self
        if other.is_monomial:
            (exp, coeff), = other._coeffs.items()
            return LaurentPoly._wrap({e - exp: c / coeff for e, c in self._coeffs.items()})
        num_shift, num = _to_dense(self)
        den_shift, den = _to_dense(other)
        quotient, remainder = dup_div(num, den, QQ)
        if remainder:
            raise ArithmeticError(f"{other.text()} does not divide {self.text()}")
        return _from_dense(quotient, num_shift - den_shift)

    def text(self, var: str = "v") -> str:
        if not self._coeffs:
            return "0"
        text = ""
        for exp, coeff in self.terms():
            body = f"{abs(coeff)}*{var}^{exp}"
            if not text:
                text = body if coeff > 0 else f"-{body}"
            else:
                text += f" - {body}" if coeff < 0 else f" + {body}"
        return text

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.text()})"


def _to_dense(poly: LaurentPoly) -> tuple[int, list]:
    """Return (lowest exponent, dense QQ coefficient list, highest degree first)."""
    low, high = poly.min_exp, poly.max_exp
    dense = []
    for exp in range(high, low - 1, -1):
        coeff = poly.coefficient(exp)
        dense.append(QQ(coeff.numerator, coeff.denominator))
    return low, dense


def _from_dense(dense: list, shift: int) -> LaurentPoly:
    degree = len(dense) - 1
    coeffs: dict[int, Fraction] = {}
    for position, value in enumerate(dense):
        if value:
            coeffs[shift + degree - position] = Fraction(int(QQ.numer(value)), int(QQ.denom(value)))
    return LaurentPoly._wrap(coeffs)


def laurent_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Gcd up to units of Q[v, 1/v]: monic, lowest exponent 0."""
    if a.is_zero and b.is_zero:
        return LaurentPoly.zero()
    if a.is_zero or b.is_zero:
        nonzero = b if a.is_zero else a
        return _monic(nonzero.shift(-nonzero.min_exp))
    if a.is_monomial or b.is_monomial:
        return LaurentPoly.one()
    _, fa = _to_dense(a)
    _, fb = _to_dense(b)
    h, _, _ = dup_inner_gcd(fa, fb, QQ)
    return _monic(_from_dense(h, 0))


def _monic(poly: LaurentPoly) -> LaurentPoly:
    lead = poly.leading_coeff
    return poly if lead == 1 else poly * (1 / lead)


class RationalFunction:
    """Element of Q(v) kept as a canonical numerator / denominator pair.

    The denominator has lowest exponent 0 and leading coefficient 1, and
    shares no factor with the numerator; equality is equality of pairs.
    """

    __slots__ = ("numerator", "denominator", "_hash")

    def __init__(self, numerator: LaurentPoly | Scalar, denominator: LaurentPoly | Scalar = 1) -> None:
        num = numerator if isinstance(numerator, LaurentPoly) else LaurentPoly.constant(numerator)
        den = denominator if isinstance(denominator, LaurentPoly) else LaurentPoly.constant(denominator)
        self.numerator, self.denominator = _canonical(num, den)
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, numerator: LaurentPoly, denominator: LaurentPoly) -> RationalFunction:
        value = object.__new__(cls)
        value.numerator = numerator
        value.denominator = denominator
        value._hash = None
        return value

    @classmethod
    def zero(cls) -> RationalFunction:
        return cls._wrap(LaurentPoly.zero(), LaurentPoly.one())

    @classmethod
    def one(cls) -> RationalFunction:
        return cls._wrap(LaurentPoly.one(), LaurentPoly.one())

    @classmethod
    def from_laurent(cls, poly: LaurentPoly) -> RationalFunction:
        return cls._wrap(poly, LaurentPoly.one())

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> RationalFunction:
        return cls._wrap(LaurentPoly.monomial(exp, coeff), LaurentPoly.one())

    @property
    def is_zero(self) -> bool:
        return self.numerator.is_zero

    def __bool__(self) -> bool:
        return not self.numerator.is_zero

    @property
    def is_laurent(self) -> bool:
        return self.denominator.is_one

    def as_laurent(self) -> LaurentPoly:
        if not self.denominator.is_one:
            raise ArithmeticError(f"{self.text()} is not a Laurent polynomial")
        return self.numerator

    @property
    def order(self) -> int | None:
        """Top v-degree of the numerator minus that of the denominator; None for zero."""
        if self.numerator.is_zero:
            return None
        return self.numerator.max_exp - self.denominator.max_exp

    @staticmethod
    def coerce(value: object) -> RationalFunction:
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, LaurentPoly):
            return RationalFunction._wrap(value, LaurentPoly.one())
        if isinstance(value, (int, Fraction)):
            return RationalFunction._wrap(LaurentPoly.constant(value), LaurentPoly.one())
        raise TypeError(f"cannot interpret {value!r} as a rational function")

    def _other(self, other: object) -> RationalFunction | None:
        if isinstance(other, (RationalFunction, LaurentPoly, int, Fraction)):
            return RationalFunction.coerce(other)
        return None

    def __add__(self, other: object) -> RationalFunction:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        if rhs.numerator.is_zero:
            return self
        if self.numerator.is_zero:
            return rhs
        if self.denominator.is_one and rhs.denominator.is_one:
            return RationalFunction._wrap(self.numerator + rhs.numerator, self.denominator)
        if self.denominator == rhs.denominator:
            return RationalFunction(self.numerator + rhs.numerator, self.denominator)
        return RationalFunction(
            self.numerator * rhs.denominator + rhs.numerator * self.denominator,
            self.denominator * rhs.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction._wrap(-self.numerator, self.denominator)

    def __sub__(self, other: object) -> RationalFunction:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> RationalFunction:
        lhs = self._other(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> RationalFunction:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        if self.numerator.is_zero or rhs.numerator.is_zero:
            return RationalFunction.zero()
        if self.denominator.is_one and rhs.denominator.is_one:
            return RationalFunction._wrap(self.numerator * rhs.numerator, self.denominator)
        return RationalFunction(self.numerator * rhs.numerator, self.denominator * rhs.denominator)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.numerator.is_zero:
            raise ZeroDivisionError("the zero rational function has no inverse")
        return RationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other: object) -> RationalFunction:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return self * rhs.inverse()

    def __rtruediv__(self, other: object) -> RationalFunction:
        lhs = self._other(other)
        if lhs is None:
            return NotImplemented
        return lhs * self.inverse()

    def __eq__(self, other: object) -> bool:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return self.numerator == rhs.numerator and self.denominator == rhs.denominator

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.numerator, self.denominator))
        return self._hash

    def bar(self) -> RationalFunction:
        return RationalFunction(self.numerator.bar(), self.denominator.bar())

    def evaluate(self, point: Scalar) -> Fraction:
        return self.numerator.evaluate(point) / self.denominator.evaluate(point)

    def evaluate_mod(self, point: int, prime: int) -> int:
        den = self.denominator.evaluate_mod(point, prime)
        return self.numerator.evaluate_mod(point, prime) * pow(den, -1, prime) % prime

    def text(self) -> str:
        if self.denominator.is_one:
            return self.numerator.text()
        return f"({self.numerator.text()}) / ({self.denominator.text()})"

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"RationalFunction({self.text()})"


def _canonical(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    if num.is_zero:
        return LaurentPoly.zero(), LaurentPoly.one()
    if den.is_monomial:
        (exp, coeff), = den.terms()
        return num.shift(-exp) * (1 / coeff), LaurentPoly.one()
    shift = num.min_exp - den.min_exp
    top = num.shift(-num.min_exp)
    bottom = den.shift(-den.min_exp)
    common = laurent_gcd(top, bottom)
    if not common.is_one:
        top = top.divide_exact(common)
        bottom = bottom.divide_exact(common)
    lead = bottom.leading_coeff
    if lead != 1:
        top = top * (1 / lead)
        bottom = bottom * (1 / lead)
    return top.shift(shift), bottom


V = LaurentPoly.monomial(1)


def is_regular_at_v_inv(f: RationalFunction) -> tuple[bool, int | None]:
    """Membership in the local ring A of functions without pole at 1/v = 0.

    Zero has no finite order; it is reported as (True, None) and lies in v^-1 A.
    """
    order = f.order
    if order is None:
        return True, None
    return order <= 0, order


@lru_cache(maxsize=None)
def qint(n: int) -> LaurentPoly:
    """[n] = (v^n - v^-n) / (v - v^-1)."""
    if n < 0:
        return -qint(-n)
    return LaurentPoly({n - 1 - 2 * k: 1 for k in range(n)})


@lru_cache(maxsize=None)
def qfact(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError(f"qfact needs n >= 0, got {n}")
    result = LaurentPoly.one()
    for k in range(2, n + 1):
        result = result * qint(k)
    return result


@lru_cache(maxsize=None)
def qbinom(n: int, k: int) -> LaurentPoly:
    """[n][n-1]...[n-k+1] / [k]! for any integer n; the division is exact."""
    if k < 0:
        raise ValueError(f"qbinom needs k >= 0, got {k}")
    falling = LaurentPoly.one()
    for offset in range(k):
        falling = falling * qint(n - offset)
    return falling.divide_exact(qfact(k))


def binom_or_zero(n: int, k: int) -> LaurentPoly:
    return LaurentPoly.zero() if k < 0 else qbinom(n, k)


@lru_cache(maxsize=None)
def q_integer(n: int) -> LaurentPoly:
    """[n]_q = (1 - q^n) / (1 - q), as a Laurent polynomial in q."""
    if n < 0:
        return -q_integer(-n).shift(n)
    return LaurentPoly({e: 1 for e in range(n)})


@lru_cache(maxsize=None)
def to_q_analogue(n: int, k: int) -> LaurentPoly:
    """The q-binomial [n, k]_q, a Laurent polynomial in q."""
    if k < 0:
        raise ValueError(f"to_q_analogue needs k >= 0, got {k}")
    falling = LaurentPoly.one()
    factorial = LaurentPoly.one()
    for offset in range(k):
        falling = falling * q_integer(n - offset)
        factorial = factorial * q_integer(offset + 1)
    return falling.divide_exact(factorial)


def q_to_v(poly: LaurentPoly) -> LaurentPoly:
    return poly.scale_exponents(2)


def q_binom_or_zero(n: int, k: int) -> LaurentPoly:
    return LaurentPoly.zero() if k < 0 else to_q_analogue(n, k)


def _sign(exp: int) -> int:
    return -1 if exp % 2 else 1


def _triple_binom(a: int, b: int, c: int) -> tuple[LaurentPoly, LaurentPoly]:
    lhs = LaurentPoly.zero()
    for s in range(c + 1):
        lhs = lhs + _sign(s) * qbinom(b + s, s) * qbinom(a + s, c) * qbinom(b + c + 1, c - s)
    return lhs, qbinom(a - b - 1, c)


def _q_triple(a: int, b: int, c: int) -> tuple[LaurentPoly, LaurentPoly]:
    lhs = LaurentPoly.zero()
    for s in range(c + 1):
        twist = LaurentPoly.monomial((s * s + s) // 2 - c * s, _sign(s))
        lhs = lhs + twist * to_q_analogue(b + s, s) * to_q_analogue(a + s, c) * to_q_analogue(b + c + 1, c - s)
    return lhs, to_q_analogue(a - b - 1, c).shift(b * c + c)


def _steep_sum(r: int, n: int) -> tuple[LaurentPoly, LaurentPoly]:
    lhs = LaurentPoly.zero()
    for k in range(r + 1):
        lhs = lhs + LaurentPoly.monomial(-k * r, _sign(k - r)) * qbinom(n - k + r, n) * qbinom(r + n + 1, k)
    return lhs, LaurentPoly.monomial(-r * (n + r + 1))


def _serre_core(l: int, n: int, t: int) -> tuple[LaurentPoly, LaurentPoly]:
    lhs = qint(l + 1 + n) * qint(l + 1 - t) + qint(t) * qint(n)
    return lhs, qint(l + 1) * qint(l + 1 + n - t)


def _pascal(big_n: int, k: int) -> tuple[LaurentPoly, LaurentPoly]:
    rhs = binom_or_zero(big_n - 1, k).shift(k) + binom_or_zero(big_n - 1, k - 1).shift(k - big_n)
    return qbinom(big_n, k), rhs


def _alternating_zero(r: int, n: int) -> tuple[LaurentPoly, LaurentPoly]:
    lhs = LaurentPoly.zero()
    for k in range(r + 1):
        lhs = lhs + LaurentPoly.monomial(-k * r + k, _sign(k - r)) * qbinom(n - k + r, n) * qbinom(r + n, k)
    return lhs, LaurentPoly.zero()


def _subset(big_n: int, big_m: int, k: int) -> tuple[LaurentPoly, LaurentPoly]:
    return qbinom(big_n - k, big_m - k) * qbinom(big_n, k), qbinom(big_n, big_m) * qbinom(big_m, k)


def _alternating_binom(r: int) -> tuple[LaurentPoly, LaurentPoly]:
    lhs = LaurentPoly.zero()
    for k in range(r + 1):
        lhs = lhs + LaurentPoly.monomial(-k * (r - 1), _sign(k - r)) * qbinom(r, k)
    return lhs, LaurentPoly.zero()


def _q_conversion(n: int, k: int) -> tuple[LaurentPoly, LaurentPoly]:
    return qbinom(n, k), q_to_v(to_q_analogue(n, k)).shift(k * (k - n))


@dataclass(frozen=True)
class Identity:
    name: str
    arity: int
    sides: Callable[..., tuple[LaurentPoly, LaurentPoly]]
    admissible: Callable[..., bool]
    grid: Callable[[int], Iterable[tuple[int, ...]]]


IDENTITIES: Mapping[str, Identity] = {
    identity.name: identity
    for identity in (
        Identity(
            "triple_binom",
            3,
            _triple_binom,
            lambda a, b, c: min(a, b, c) >= 0,
            lambda g: ((a, b, c) for a in range(g + 1) for b in range(g + 1) for c in range(g + 1)),
        ),
        Identity(
            "q_triple",
            3,
            _q_triple,
            lambda a, b, c: min(a, b, c) >= 0,
            lambda g: ((a, b, c) for a in range(g + 1) for b in range(g + 1) for c in range(g + 1)),
        ),
        Identity(
            "steep_sum",
            2,
            _steep_sum,
            lambda r, n: r >= 0 and n >= 1,
            lambda g: ((r, n) for r in range(g + 1) for n in range(1, g + 1)),
        ),
        Identity(
            "serre_core",
            3,
            _serre_core,
            lambda l, n, t: min(l, n, t) >= 0 and t <= l + 1,
            lambda g: ((l, n, t) for l in range(g) for n in range(g) for t in range(l + 1)),
        ),
        Identity(
            "pascal",
            2,
            _pascal,
            lambda big_n, k: big_n >= 0 and k >= 0,
            lambda g: ((big_n, k) for big_n in range(g + 5) for k in range(g + 5)),
        ),
        Identity(
            "alternating_zero",
            2,
            _alternating_zero,
            lambda r, n: r >= 1 and n >= 0,
            lambda g: ((r, n) for r in range(1, g + 1) for n in range(g + 1)),
        ),
        Identity(
            "subset",
            3,
            _subset,
            lambda big_n, big_m, k: 0 <= k <= big_m <= big_n,
            lambda g: ((big_n, big_m, k) for big_n in range(g + 1) for big_m in range(big_n + 1) for k in range(big_m + 1)),
        ),
        Identity(
            "alternating_binom",
            1,
            _alternating_binom,
            lambda r: r >= 1,
            lambda g: ((r,) for r in range(1, g + 1)),
        ),
        Identity(
            "q_conversion",
            2,
            _q_conversion,
            lambda n, k: k >= 0,
            lambda g: ((n, k) for n in range(-g, g + 1) for k in range(g + 1)),
        ),
    )
}


def _lookup(name: str) -> Identity:
    try:
        return IDENTITIES[name]
    except KeyError:
        raise ValueError(f"unknown identity {name!r}; expected one of {', '.join(IDENTITY_NAMES)}") from None


def identity_sides(name: str, params: Sequence[int]) -> tuple[RationalFunction, RationalFunction]:
    identity = _lookup(name)
    params = tuple(int(p) for p in params)
    if len(params) != identity.arity or not identity.admissible(*params):
        raise ValueError(f"parameters {params} are outside the range of {name}")
    lhs, rhs = identity.sides(*params)
    return RationalFunction.from_laurent(lhs), RationalFunction.from_laurent(rhs)


def check_identity(name: str, params: Sequence[int], points: Sequence[Scalar] = ()) -> bool:
    """Exact check of a named identity, plus agreement at each specialization point."""
    lhs, rhs = identity_sides(name, params)
    if lhs != rhs:
        return False
    return all(lhs.evaluate(point) == rhs.evaluate(point) for point in points)


def identity_grid(name: str, size: int) -> list[tuple[int, ...]]:
    return list(_lookup(name).grid(size))
