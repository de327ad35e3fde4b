"""B(infinity) for Q(omega, r) as steep sequences.

An operator word (iota_1, ..., iota_n) stands for f~_iota_1 ... f~_iota_n . 1,
so the leftmost entry is applied last. A steep sequence is the canonical word

    j^p0 | (i,c_1) j^p_1 | ... | (i,c_s) j^p_s

with every block bounded by its imaginary size: p_m,k <= c_m. Real-real
commutation is structural (blocks store one multiplicity per color); the
crystal Serre rule f~_(i,c) f~_j^(c+1+n) = f~_j f~_(i,c) f~_j^(c+n) pushes
excess real entries to the left.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from comet.conf import setting
from comet.exceptions import AmbiguousPredecessor, TruncationError
from comet.quiver import DegreeVector, Generator, Word, format_word, parse_word, word_degree, words_of_degree

logger = logging.getLogger(__name__)

BLOCK_HEAD = re.compile(r"^\(\s*i\s*,\s*(\d+)\s*\)")


@dataclass(frozen=True)
class Block:
    size: int
    mults: tuple[int, ...]

    def is_bounded(self) -> bool:
        return all(p <= self.size for p in self.mults)


@dataclass(frozen=True)
class SteepSequence:
    p0: tuple[int, ...]
    body: tuple[Block, ...] = ()

    @classmethod
    def empty(cls, r: int) -> SteepSequence:
        return cls((0,) * r)

    @property
    def r(self) -> int:
        return len(self.p0)

    def degree(self) -> DegreeVector:
        m = list(self.p0)
        for block in self.body:
            m = [a + b for a, b in zip(m, block.mults)]
        return DegreeVector(sum(block.size for block in self.body), tuple(m))

    def text(self) -> str:
        return format_steep(self)

    def __str__(self) -> str:
        return self.text()


def _reals(mults: Sequence[int]) -> Word:
    return tuple(letter for color, count in enumerate(mults, start=1) for letter in (Generator.real(color),) * count)


def to_word(b: SteepSequence) -> Word:
    word = list(_reals(b.p0))
    for block in b.body:
        word.append(Generator.imag(block.size))
        word.extend(_reals(block.mults))
    return tuple(word)


def _blocks(w: Sequence[Generator], r: int) -> tuple[list[int], list[tuple[int, list[int]]]]:
    """Split a word into the leading real counts and (size, counts) per imaginary entry."""
    p0 = [0] * r
    body: list[tuple[int, list[int]]] = []
    current = p0
    for letter in w:
        if letter.imaginary:
            body.append((letter.label, [0] * r))
            current = body[-1][1]
        else:
            if not 1 <= letter.label <= r:
                raise ValueError(f"j{letter.label} is not a vertex of Q(omega, {r})")
            current[letter.label - 1] += 1
    return p0, body


def degree_of(w: Sequence[Generator] | SteepSequence, r: int | None = None) -> DegreeVector:
    if isinstance(w, SteepSequence):
        return w.degree()
    if r is None:
        raise ValueError("an operator word needs r to fix the degree length")
    return word_degree(w, r)


def is_steep(w: Sequence[Generator], r: int) -> bool:
    _, body = _blocks(w, r)
    return all(all(p <= size for p in counts) for size, counts in body)


def normalize(w: Sequence[Generator], r: int) -> SteepSequence:
    """Single right-to-left pass; each block keeps at most c_m per color and hands the rest leftward."""
    p0, body = _blocks(w, r)
    carry = [0] * r
    blocks: list[Block] = []
    for size, counts in reversed(body):
        kept = []
        for color in range(r):
            total = counts[color] + carry[color]
            kept.append(min(total, size))
            carry[color] = total - kept[-1]
        blocks.append(Block(size, tuple(kept)))
    blocks.reverse()
    return SteepSequence(tuple(a + b for a, b in zip(p0, carry)), tuple(blocks))


def apply_f(iota: Generator, b: SteepSequence) -> SteepSequence:
    return normalize((iota,) + to_word(b), b.r)


def apply_e_bruteforce(iota: Generator, b: SteepSequence) -> SteepSequence | None:
    """The unique steep b' with f~_iota b' = b, found by search over the lower degree."""
    lower = b.degree() - iota.degree(b.r)
    if not lower.is_nonnegative():
        return None
    found = [candidate for candidate in enumerate_steep(lower) if apply_f(iota, candidate) == b]
    if len(found) > 1:
        raise AmbiguousPredecessor(f"{len(found)} steep predecessors of {format_steep(b)} under {iota.text(b.r)}")
    return found[0] if found else None


def apply_e(iota: Generator, b: SteepSequence) -> SteepSequence | None:
    if iota.imaginary:
        return apply_e_bruteforce(iota, b)
    k = iota.label - 1
    if b.p0[k] == 0:
        return None
    p0 = list(b.p0)
    p0[k] -= 1
    return SteepSequence(tuple(p0), b.body)


def epsilon_real(color: int, b: SteepSequence) -> int:
    return b.p0[color - 1]


def _compositions(n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first, *rest)


def _placements(total: int, caps: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """(p0, p_1, ..., p_s) summing to total with p_m <= caps[m-1] and p0 free."""
    if not caps:
        yield (total,)
        return
    for head in range(min(caps[-1], total) + 1):
        for rest in _placements(total - head, caps[:-1]):
            yield (*rest, head)


def _check_bounds(d: DegreeVector) -> None:
    max_i = setting("COMET_CRYSTAL_MAX_I", 8)
    max_j = setting("COMET_CRYSTAL_MAX_J", 8)
    if not d.is_nonnegative():
        raise ValueError(f"degree {d} has a negative entry")
    if d.n > max_i or any(m > max_j for m in d.m):
        raise TruncationError(f"degree {d} exceeds the crystal bounds ({max_i}, {max_j})")


def enumerate_steep(d: DegreeVector) -> list[SteepSequence]:
    """All steep sequences of degree d, ordered by body length, then text."""
    _check_bounds(d)
    found: list[SteepSequence] = []
    for sizes in _compositions(d.n):
        per_color = [list(_placements(total, sizes)) for total in d.m]
        for choice in product(*per_color):
            p0 = tuple(placement[0] for placement in choice)
            body = tuple(
                Block(size, tuple(placement[index] for placement in choice))
                for index, size in enumerate(sizes, start=1)
            )
            found.append(SteepSequence(p0, body))
    found.sort(key=lambda b: (len(b.body), format_steep(b)))
    logger.debug("%d steep sequences in degree %s", len(found), d)
    return found


def enumerate_words(d: DegreeVector) -> tuple[Word, ...]:
    """Every operator word of degree d."""
    letters = tuple([Generator.imag(l) for l in range(1, d.n + 1)] + [Generator.real(k) for k in range(1, d.r + 1)])
    return words_of_degree(d, letters)


def _run(w: Word, start: int, letter: Generator) -> int:
    end = start
    while end < len(w) and w[end] == letter:
        end += 1
    return end - start


def one_step_rewrites(w: Sequence[Generator]) -> set[Word]:
    """Words one relation step away: a swap of adjacent distinct real entries, or one crystal Serre move."""
    w = tuple(w)
    found: set[Word] = set()
    for t in range(len(w) - 1):
        a, b = w[t], w[t + 1]
        if not a.imaginary and not b.imaginary and a != b:
            found.add(w[:t] + (b, a) + w[t + 2:])
    for t, letter in enumerate(w):
        if not letter.imaginary:
            continue
        if t + 1 < len(w) and not w[t + 1].imaginary:
            j = w[t + 1]
            run = _run(w, t + 1, j)
            if run >= letter.label + 1:
                found.add(w[:t] + (j, letter) + (j,) * (run - 1) + w[t + 1 + run:])
        if t >= 1 and not w[t - 1].imaginary:
            j = w[t - 1]
            run = _run(w, t + 1, j)
            if run >= letter.label:
                found.add(w[:t - 1] + (letter,) + (j,) * (run + 1) + w[t + 1 + run:])
    found.discard(w)
    return found


def format_steep(b: SteepSequence) -> str:
    """'j^a | (i,c) j^p | ...'; the leading segment is left out when p0 is zero."""
    segments = []
    if any(b.p0):
        segments.append(format_word(_reals(b.p0), b.r))
    for block in b.body:
        segments.append(format_word((Generator.imag(block.size),) + _reals(block.mults), b.r))
    return " | ".join(segments) if segments else "1"


def parse_steep(text: str, r: int) -> SteepSequence:
    text = text.strip()
    if text in ("", "1"):
        return SteepSequence.empty(r)
    p0 = (0,) * r
    body: list[Block] = []
    for position, segment in enumerate(part.strip() for part in text.split("|")):
        word = parse_word(segment, r)
        if BLOCK_HEAD.match(segment):
            if any(letter.imaginary for letter in word[1:]):
                raise ValueError(f"block {segment!r} holds more than one imaginary entry")
            counts = word_degree(word[1:], r).m
            block = Block(word[0].label, counts)
            if not block.is_bounded():
                raise ValueError(f"block {segment!r} is not steep: multiplicities exceed {block.size}")
            body.append(block)
        elif position == 0:
            if any(letter.imaginary for letter in word):
                raise ValueError(f"leading segment {segment!r} must be real")
            p0 = word_degree(word, r).m
        else:
            raise ValueError(f"segment {segment!r} must start with an imaginary entry")
    return SteepSequence(p0, tuple(body))
