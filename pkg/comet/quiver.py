"""Index sets, degrees and truncation parameters of the comet quiver Q(omega, r)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, NamedTuple, Sequence

from comet.conf import setting

WORD_TOKEN = re.compile(r"\(\s*i\s*,\s*(\d+)\s*\)(?:\^(\d+))?|j_?(\d*)(?:\^(\d+))?")


class Generator(NamedTuple):
    """Real(k) is the vertex j_k; Imag(l) is the pair (i, l)."""

    imaginary: bool
    label: int

    @classmethod
    def real(cls, color: int) -> Generator:
        return cls(False, color)

    @classmethod
    def imag(cls, size: int) -> Generator:
        return cls(True, size)

    def degree(self, r: int) -> DegreeVector:
        if self.imaginary:
            return DegreeVector(self.label, (0,) * r)
        return DegreeVector(0, tuple(1 if k == self.label else 0 for k in range(1, r + 1)))

    def text(self, r: int) -> str:
        if self.imaginary:
            return f"(i,{self.label})"
        return "j" if r == 1 else f"j{self.label}"


Word = tuple[Generator, ...]


@dataclass(frozen=True, order=True)
class DegreeVector:
    """(n; m_1, ..., m_r) stands for the degree -n i - sum m_k j_k."""

    n: int
    m: tuple[int, ...]

    @classmethod
    def zero(cls, r: int) -> DegreeVector:
        return cls(0, (0,) * r)

    @classmethod
    def of(cls, n: int, *m: int) -> DegreeVector:
        return cls(n, tuple(m))

    @classmethod
    def parse(cls, text: str, r: int) -> DegreeVector:
        head, _, tail = text.strip().partition(":")
        try:
            n = int(head)
            m = tuple(int(part) for part in tail.split(",") if part.strip())
        except ValueError:
            raise ValueError(f"bad degree {text!r}; expected 'n:m1,...,mr'") from None
        if not m:
            m = (0,) * r
        if len(m) != r:
            raise ValueError(f"degree {text!r} needs {r} color counts")
        return cls(n, m)

    @property
    def r(self) -> int:
        return len(self.m)

    def __add__(self, other: DegreeVector) -> DegreeVector:
        return DegreeVector(self.n + other.n, tuple(a + b for a, b in zip(self.m, other.m)))

    def __sub__(self, other: DegreeVector) -> DegreeVector:
        return DegreeVector(self.n - other.n, tuple(a - b for a, b in zip(self.m, other.m)))

    def is_nonnegative(self) -> bool:
        return self.n >= 0 and all(x >= 0 for x in self.m)

    def with_color(self, color: int, count: int) -> DegreeVector:
        m = list(self.m)
        m[color - 1] = count
        return DegreeVector(self.n, tuple(m))

    def flat(self) -> tuple[int, ...]:
        return (self.n, *self.m)

    def text(self) -> str:
        return f"{self.n}:{','.join(str(x) for x in self.m)}"

    def __str__(self) -> str:
        return self.text()


def color_vector(color: int, r: int, count: int = 1) -> DegreeVector:
    return DegreeVector.zero(r).with_color(color, count)


def degree_pairing(a: DegreeVector, b: DegreeVector, omega: int) -> int:
    """Symmetric form on root vectors: (i,i) = 2 - 2 omega, (i,j_k) = -1, (j_s,j_t) = 2 delta."""
    value = a.n * b.n * (2 - 2 * omega)
    for ma, mb in zip(a.m, b.m):
        value += 2 * ma * mb - a.n * mb - b.n * ma
    return value


def word_degree(word: Sequence[Generator], r: int) -> DegreeVector:
    n = 0
    m = [0] * r
    for letter in word:
        if letter.imaginary:
            n += letter.label
        else:
            m[letter.label - 1] += 1
    return DegreeVector(n, tuple(m))


def format_word(word: Sequence[Generator], r: int) -> str:
    """Space separated tokens, runs collapsed as token^count; the empty word is '1'."""
    if not word:
        return "1"
    tokens: list[str] = []
    position = 0
    while position < len(word):
        letter = word[position]
        run = 1
        while position + run < len(word) and word[position + run] == letter:
            run += 1
        token = letter.text(r)
        tokens.append(token if run == 1 else f"{token}^{run}")
        position += run
    return " ".join(tokens)


def parse_word(text: str, r: int) -> Word:
    text = text.strip()
    if text in ("", "1"):
        return ()
    letters: list[Generator] = []
    position = 0
    for match in WORD_TOKEN.finditer(text):
        gap = text[position:match.start()]
        if gap.strip(" ,"):
            raise ValueError(f"cannot parse {gap.strip()!r} in word {text!r}")
        position = match.end()
        size, imag_power, color, real_power = match.groups()
        if size is not None:
            letter = Generator.imag(int(size))
            power = int(imag_power or 1)
        else:
            letter = Generator.real(int(color or 1))
            power = int(real_power or 1)
        if letter.label < 1 or (not letter.imaginary and letter.label > r):
            raise ValueError(f"{letter.text(max(r, 2))} is not an index of Q(omega, {r})")
        letters.extend([letter] * power)
    if text[position:].strip(" ,"):
        raise ValueError(f"cannot parse {text[position:].strip()!r} in word {text!r}")
    return tuple(letters)


@dataclass(frozen=True)
class QuiverParams:
    omega: int = 2
    r: int = 1
    max_i: int = 4
    max_j: int = 4
    max_loop: int = 4

    def __post_init__(self) -> None:
        if self.omega < 2:
            raise ValueError(f"omega must be at least 2 (non-isotropic), got {self.omega}")
        if self.r < 0 or self.max_i < 0 or self.max_j < 0:
            raise ValueError("r, max_i and max_j must be nonnegative")
        if self.max_loop < min(self.max_i, 1):
            raise ValueError(f"max_loop must be at least 1, got {self.max_loop}")
        if self.max_loop > self.max_i:
            raise ValueError(f"max_loop {self.max_loop} exceeds max_i {self.max_i}")

    @classmethod
    def from_settings(cls, **overrides: int | None) -> QuiverParams:
        values = {
            "omega": setting("COMET_OMEGA", 2),
            "r": setting("COMET_R", 1),
            "max_i": setting("COMET_MAX_I", 4),
            "max_j": setting("COMET_MAX_J", 4),
        }
        values["max_loop"] = setting("COMET_MAX_LOOP", values["max_i"])
        values.update({key: value for key, value in overrides.items() if value is not None})
        if overrides.get("max_loop") is None:
            values["max_loop"] = min(values["max_loop"], values["max_i"])
        return cls(**values)

    def generators(self) -> list[Generator]:
        return [Generator.imag(l) for l in range(1, self.max_loop + 1)] + [Generator.real(k) for k in range(1, self.r + 1)]

    def real_generators(self) -> list[Generator]:
        return [Generator.real(k) for k in range(1, self.r + 1)]

    def in_range(self, d: DegreeVector) -> bool:
        return len(d.m) == self.r and 0 <= d.n <= self.max_i and all(0 <= x <= self.max_j for x in d.m)

    def degrees(self, upto: DegreeVector | None = None) -> Iterator[DegreeVector]:
        """In-range degrees in lexicographic order, optionally inside the box `upto`."""
        top_n = self.max_i if upto is None else min(self.max_i, upto.n)
        tops = [self.max_j if upto is None else min(self.max_j, upto.m[k]) for k in range(self.r)]
        for n in range(top_n + 1):
            for m in product(*(range(top + 1) for top in tops)):
                yield DegreeVector(n, tuple(m))

    def word_count(self, d: DegreeVector) -> int:
        return free_word_count(d, self.max_loop)


@lru_cache(maxsize=None)
def free_word_count(d: DegreeVector, max_loop: int) -> int:
    """Number of words of degree d in the free algebra on F_(i,l), l <= max_loop, and F_j."""
    if not d.is_nonnegative():
        return 0
    if d.n == 0 and not any(d.m):
        return 1
    total = 0
    for size in range(1, min(d.n, max_loop) + 1):
        total += free_word_count(DegreeVector(d.n - size, d.m), max_loop)
    for color, count in enumerate(d.m, start=1):
        if count:
            total += free_word_count(d.with_color(color, count - 1), max_loop)
    return total


def word_key(word: Sequence[Generator]) -> tuple[tuple[int, int], ...]:
    """Imaginary letters sort before real ones; then by size or color."""
    return tuple((0 if letter.imaginary else 1, letter.label) for letter in word)


@lru_cache(maxsize=None)
def words_of_degree(d: DegreeVector, letters: tuple[Generator, ...]) -> tuple[Word, ...]:
    """All words over `letters` of degree d, sorted by word_key."""
    if not d.is_nonnegative():
        return ()
    if d.n == 0 and not any(d.m):
        return ((),)
    found: list[Word] = []
    for letter in letters:
        rest = d - letter.degree(d.r)
        if rest.is_nonnegative():
            found.extend((letter, *tail) for tail in words_of_degree(rest, letters))
    return tuple(sorted(found, key=word_key))
