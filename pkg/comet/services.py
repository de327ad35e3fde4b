"""Verification suites and report tables built on pandas."""

from __future__ import annotations

import logging
import random
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import pandas as pd

from comet import charformula, crystal, freealg, qarith
from comet.conf import setting
from comet.exceptions import DirectSumError, LatticeViolation, TruncationError
from comet.quiver import DegreeVector, Generator, QuiverParams, format_word

logger = logging.getLogger(__name__)

RECORD_COLUMNS: Sequence[str] = ("suite", "fact", "params", "pass", "witness")
COMPARE_VALUE_COLUMNS: Sequence[str] = ("series", "recursion", "steep", "quotient", "status")
DIMENSION_SOURCES: Sequence[str] = ("series", "steep", "algebra")
SUITES: Sequence[str] = ("identities", "algebra", "crystal", "omega")
REPORT_FORMATS: Sequence[str] = ("csv", "json")


@dataclass
class CheckRecord:
    suite: str
    fact: str
    params: str
    passed: bool
    witness: str = ""

    def as_row(self) -> dict[str, object]:
        return {
            "suite": self.suite,
            "fact": self.fact,
            "params": self.params,
            "pass": self.passed,
            "witness": self.witness,
        }


def _params_text(params: Iterable[object]) -> str:
    return ",".join(str(p) for p in params)


def degree_columns(r: int) -> list[str]:
    return ["n", *(f"m{k}" for k in range(1, r + 1))]


def records_frame(records: Iterable[CheckRecord]) -> pd.DataFrame:
    frame = pd.DataFrame([record.as_row() for record in records], columns=RECORD_COLUMNS)
    return frame.astype({"pass": "bool"})


def failures(frame: pd.DataFrame) -> pd.DataFrame:
    return frame[~frame["pass"].astype(bool)]


def specialization_points(count: int, seed: int) -> list[Fraction]:
    """`count` distinct rationals drawn from a seeded generator."""
    rng = random.Random(seed)
    points: list[Fraction] = []
    while len(points) < count:
        point = Fraction(rng.randint(2, 97), rng.randint(1, 13))
        if point not in points:
            points.append(point)
    return points


def identity_records(grid: int | None = None, seed: int | None = None) -> Iterator[CheckRecord]:
    grid = grid if grid is not None else setting("COMET_IDENTITY_GRID", 6)
    points = specialization_points(
        setting("COMET_SPECIALIZATIONS", 3),
        seed if seed is not None else setting("COMET_SEED", 0),
    )
    for name in qarith.IDENTITY_NAMES:
        cases = qarith.identity_grid(name, grid)
        for params in cases:
            if qarith.check_identity(name, params, points):
                yield CheckRecord("identities", name, _params_text(params), True)
            else:
                lhs, rhs = qarith.identity_sides(name, params)
                yield CheckRecord("identities", name, _params_text(params), False, (lhs - rhs).text())
        logger.info("Checked %d cases of %s", len(cases), name)


def algebra_records(quotient: freealg.GradedQuotient, facts: Sequence[str] | None = None) -> Iterator[CheckRecord]:
    for fact in facts or freealg.FACT_NAMES:
        cases = freealg.fact_grid(quotient, fact)
        for params in cases:
            try:
                outcome = freealg.check_fact(quotient, fact, params)
            except (TruncationError, DirectSumError, LatticeViolation) as exc:
                logger.warning("%s%s raised %s", fact, params, exc)
                outcome = freealg.FactOutcome(False, note=f"{type(exc).__name__}: {exc}")
            yield CheckRecord("algebra", fact, _params_text(params), outcome.passed, outcome.witness or ("" if outcome.passed else outcome.note))
        logger.info("Checked %d cases of %s", len(cases), fact)


def crystal_degrees(params: QuiverParams) -> list[DegreeVector]:
    max_i = min(params.max_i, setting("COMET_CRYSTAL_MAX_I", 8))
    max_j = min(params.max_j, setting("COMET_CRYSTAL_MAX_J", 8))
    return list(params.degrees(DegreeVector(max_i, (max_j,) * params.r)))


def _entries(params: QuiverParams) -> list[Generator]:
    return [Generator.imag(l) for l in range(1, params.max_i + 1)] + params.real_generators()


def _crystal_checks(params: QuiverParams, d: DegreeVector, quotient: freealg.GradedQuotient | None) -> Iterator[CheckRecord]:
    r = params.r
    label = d.text()
    bounds = set(crystal_degrees(params))
    words = crystal.enumerate_words(d)
    steep = crystal.enumerate_steep(d)

    bad = next(
        (
            w
            for w in words
            if crystal.normalize(w, r).degree() != d
            or not crystal.is_steep(crystal.to_word(crystal.normalize(w, r)), r)
            or crystal.normalize(crystal.to_word(crystal.normalize(w, r)), r) != crystal.normalize(w, r)
        ),
        None,
    )
    yield CheckRecord("crystal", "normalize", label, bad is None, "" if bad is None else format_word(bad, r))

    split = None
    for w in words:
        target = crystal.normalize(w, r)
        other = next((u for u in crystal.one_step_rewrites(w) if crystal.normalize(u, r) != target), None)
        if other is not None:
            split = (w, other)
            break
    witness = "" if split is None else " ~ ".join(format_word(w, r) for w in split)
    yield CheckRecord("crystal", "confluence", label, split is None, witness)

    for iota in _entries(params):
        upper = d + iota.degree(r)
        if upper not in bounds:
            continue
        images = {}
        broken = ""
        for b in steep:
            image = crystal.apply_f(iota, b)
            if image in images:
                broken = broken or f"injectivity: {b} and {images[image]}"
            images[image] = b
            if crystal.apply_e(iota, image) != b:
                broken = broken or f"e(f(b)) != b for {b}"
        yield CheckRecord("crystal", "inverse_laws", f"{label};{iota.text(r)}", not broken, broken)

    for iota in _entries(params):
        lower = d - iota.degree(r)
        if not lower.is_nonnegative():
            continue
        broken = ""
        for b in steep:
            previous = crystal.apply_e(iota, b)
            if previous is not None and crystal.apply_f(iota, previous) != b:
                broken = f"f(e(b)) != b for {b}"
                break
            if not iota.imaginary and previous != crystal.apply_e_bruteforce(iota, b):
                broken = f"fast path differs for {b}"
                break
        yield CheckRecord("crystal", "partial_inverse", f"{label};{iota.text(r)}", not broken, broken)

    expected = charformula.coeff_recursion(r, d)
    yield CheckRecord("crystal", "counts", label, len(steep) == expected, "" if len(steep) == expected else f"{len(steep)} != {expected}")

    if r == 0 and d.n >= 1:
        passed = len(steep) == 2 ** (d.n - 1)
        yield CheckRecord("crystal", "compositions", label, passed, "" if passed else str(len(steep)))

    if quotient is not None and d.n <= 1 and quotient.supports(d):
        yield _exactness(quotient, d)


def _exactness(quotient: freealg.GradedQuotient, d: DegreeVector) -> CheckRecord:
    """Same steep form iff the images of 1 agree modulo v^-1 L, over words in real and (i,1) entries."""
    r = quotient.r
    lattice = quotient.lattice(d)
    words = lattice.operator_words
    for position, w in enumerate(words):
        for u in words[position + 1:]:
            same = crystal.normalize(w, r) == crystal.normalize(u, r)
            equivalent = freealg.lattice_equiv(lattice, quotient.apply_word(w), quotient.apply_word(u))
            if same != equivalent:
                witness = f"{format_word(w, r)} vs {format_word(u, r)}"
                return CheckRecord("crystal", "exactness", d.text(), False, witness)
    return CheckRecord("crystal", "exactness", d.text(), True)


def crystal_records(params: QuiverParams, quotient: freealg.GradedQuotient | None = None) -> Iterator[CheckRecord]:
    degrees = crystal_degrees(params)
    for d in degrees:
        yield from _crystal_checks(params, d, quotient)
    logger.info("Checked the crystal in %d degrees", len(degrees))


def _first_row(frame: pd.DataFrame) -> str:
    return "" if frame.empty else frame.head(1).to_json(orient="records")


def omega_records(params: QuiverParams, omegas: Sequence[int] = (2, 3)) -> Iterator[CheckRecord]:
    """Algebra dimensions per omega against the steep counts, and against each other."""
    columns = degree_columns(params.r)
    steep = dimension_frame(params, "steep")
    tables = {}
    for omega in omegas:
        tables[omega] = dimension_frame(replace(params, omega=omega), "algebra")
        merged = tables[omega].merge(steep, on=columns, suffixes=("_algebra", "_steep"))
        bad = merged[merged["count_algebra"] != merged["count_steep"]]
        yield CheckRecord("omega", "crystal_counts", str(omega), bad.empty, _first_row(bad))
    reference = tables[omegas[0]]
    for omega in omegas[1:]:
        merged = reference.merge(tables[omega], on=columns, how="outer", suffixes=("_a", "_b"))
        bad = merged[merged["count_a"] != merged["count_b"]]
        yield CheckRecord("omega", "dimensions", f"{omegas[0]},{omega}", bad.empty, _first_row(bad))


def verification_frame(
    suite: str,
    params: QuiverParams,
    grid: int | None = None,
    seed: int | None = None,
    quotient: freealg.GradedQuotient | None = None,
) -> pd.DataFrame:
    if suite not in (*SUITES, "all"):
        raise ValueError(f"unknown suite {suite!r}")
    chosen = SUITES if suite == "all" else (suite,)
    records: list[CheckRecord] = []
    if quotient is None and {"algebra", "crystal"} & set(chosen):
        quotient = freealg.build_quotient(params, seed=seed)
    for name in chosen:
        if name == "identities":
            records.extend(identity_records(grid, seed))
        elif name == "algebra":
            records.extend(algebra_records(quotient))
        elif name == "crystal":
            records.extend(crystal_records(params, quotient))
        else:
            records.extend(omega_records(params))
    frame = records_frame(records)
    logger.info("%s: %d checks, %d failures", suite, len(frame), len(failures(frame)))
    return frame


def dimension_frame(params: QuiverParams, source: str = "series", upto: DegreeVector | None = None) -> pd.DataFrame:
    """Table n, m1..mr, count for every degree in the box."""
    if source not in DIMENSION_SOURCES:
        raise ValueError(f"unknown dimension source {source!r}; expected one of {', '.join(DIMENSION_SOURCES)}")
    columns = [*degree_columns(params.r), "count"]
    degrees = list(params.degrees(upto))
    rows = []
    if source == "series":
        series = charformula.char_series(params.r, params.max_i, params.max_j)
        rows = [[*d.flat(), series.coefficient(d)] for d in degrees]
    elif source == "steep":
        rows = [[*d.flat(), len(crystal.enumerate_steep(d))] for d in degrees]
    else:
        quotient = freealg.build_quotient(params)
        rows = [[*d.flat(), quotient.dim(d)] for d in degrees if quotient.supports(d)]
    return pd.DataFrame(rows, columns=columns)


def compare_frame(params: QuiverParams, upto: DegreeVector | None = None, quotient: freealg.GradedQuotient | None = None) -> pd.DataFrame:
    if quotient is None:
        quotient = freealg.build_quotient(params)
    series = charformula.char_series(params.r, params.max_i, params.max_j)
    memo: dict[DegreeVector, int] = {}
    rows = []
    for d in params.degrees(upto):
        report = charformula.compare_counts(d, quotient, series, memo)
        rows.append(
            [
                *d.flat(),
                report.series,
                report.recursion,
                report.steep,
                report.quotient if report.quotient is not None else pd.NA,
                "pass" if report.passed else "fail",
            ]
        )
    frame = pd.DataFrame(rows, columns=[*degree_columns(params.r), *COMPARE_VALUE_COLUMNS])
    return frame.astype({"quotient": "Int64"})


def render_report(frame: pd.DataFrame, fmt: str = "csv") -> str:
    if fmt == "csv":
        return frame.to_csv(index=False)
    if fmt == "json":
        if frame.empty:
            return ""
        return frame.to_json(orient="records", lines=True).rstrip("\n") + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(frame: pd.DataFrame, fmt: str = "csv", out: Path | None = None) -> str:
    """Serialize the frame and write it to `out`, or to stdout when no path is given."""
    text = render_report(frame, fmt)
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    return text
