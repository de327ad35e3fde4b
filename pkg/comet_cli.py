"""Command-line front end for the comet crystal toolkit."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import pandas as pd

from comet import crystal, services
from comet.quiver import DegreeVector, QuiverParams, parse_word

logger = logging.getLogger("comet.cli")


@dataclass(frozen=True)
class RunConfig:
    params: QuiverParams
    command: str
    fmt: str = "csv"
    out: Path | None = None
    upto: DegreeVector | None = None
    grid: int | None = None
    seed: int | None = None


def parse_degree(text: str, r: int) -> DegreeVector:
    """'n:m1,...,mr' or the flat form 'n,m1,...,mr'."""
    if ":" in text:
        return DegreeVector.parse(text, r)
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"bad degree {text!r}") from None
    if len(values) != r + 1:
        raise ValueError(f"degree {text!r} needs n and {r} color counts")
    return DegreeVector(values[0], tuple(values[1:]))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Steep sequences, U^- of the comet quiver and the checks tying them together.")
    parser.add_argument("--omega", type=int, help="Number of loops at the imaginary vertex (>= 2).")
    parser.add_argument("--r", type=int, help="Number of real vertices.")
    parser.add_argument("--max-i", type=int, help="Truncation bound on n.")
    parser.add_argument("--max-j", type=int, help="Truncation bound on each m_k.")
    parser.add_argument("--max-loop", type=int, help="Largest imaginary generator size (i, l).")
    parser.add_argument("--format", choices=services.REPORT_FORMATS, default="csv", help="Report format.")
    parser.add_argument("--out", type=Path, help="Write the report here instead of stdout.")
    parser.add_argument("--grid", type=int, help="Identity grid size.")
    parser.add_argument("--seed", type=int, help="Seed for random specializations.")

    commands = parser.add_subparsers(dest="command", required=True)
    normalize = commands.add_parser("normalize", help="Print the steep form of an operator word.")
    normalize.add_argument("word")
    apply = commands.add_parser("apply", help="Apply f:<entry> or e:<entry> to a steep sequence.")
    apply.add_argument("op")
    apply.add_argument("steep")
    enum = commands.add_parser("enum", help="List the steep sequences of a degree.")
    enum.add_argument("degree")
    dims = commands.add_parser("dims", help="Dimension table.")
    dims.add_argument("--upto")
    dims.add_argument("--source", choices=services.DIMENSION_SOURCES, default="series")
    verify = commands.add_parser("verify", help="Run a verification suite.")
    verify.add_argument("suite", choices=(*services.SUITES, "all"))
    verify.add_argument("--grid", type=int, dest="suite_grid")
    compare = commands.add_parser("compare", help="Series, recursion, steep and quotient counts side by side.")
    compare.add_argument("--upto")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    params = QuiverParams.from_settings(
        omega=args.omega,
        r=args.r,
        max_i=args.max_i,
        max_j=args.max_j,
        max_loop=args.max_loop,
    )
    upto = getattr(args, "upto", None)
    grid = getattr(args, "suite_grid", None)
    return RunConfig(
        params=params,
        command=args.command,
        fmt=args.format,
        out=args.out,
        upto=parse_degree(upto, params.r) if upto else None,
        grid=grid if grid is not None else args.grid,
        seed=args.seed,
    )


def _emit_failures(frame: pd.DataFrame) -> None:
    bad = services.failures(frame)
    if not bad.empty:
        sys.stdout.write(services.render_report(bad, "json"))


def _run_apply(config: RunConfig, op: str, steep: str) -> int:
    r = config.params.r
    kind, _, entry = op.partition(":")
    letters = parse_word(entry, r)
    if kind not in ("f", "e") or len(letters) != 1:
        raise ValueError(f"bad operator {op!r}; expected f:<entry> or e:<entry>")
    start = crystal.parse_steep(steep, r)
    result = crystal.apply_f(letters[0], start) if kind == "f" else crystal.apply_e(letters[0], start)
    print("none" if result is None else crystal.format_steep(result))
    return 0


def _dispatch(config: RunConfig, args: argparse.Namespace) -> int:
    params = config.params
    if config.command == "normalize":
        print(crystal.format_steep(crystal.normalize(parse_word(args.word, params.r), params.r)))
        return 0
    if config.command == "apply":
        return _run_apply(config, args.op, args.steep)
    if config.command == "enum":
        degree = parse_degree(args.degree, params.r)
        frame = pd.DataFrame({"steep": [b.text() for b in crystal.enumerate_steep(degree)]}, columns=["steep"])
        services.emit_report(frame, config.fmt, config.out)
        return 0
    if config.command == "dims":
        services.emit_report(services.dimension_frame(params, args.source, config.upto), config.fmt, config.out)
        return 0
    if config.command == "verify":
        frame = services.verification_frame(args.suite, params, config.grid, config.seed)
        services.emit_report(frame, config.fmt, config.out)
        if services.failures(frame).empty:
            return 0
        if config.out is not None or config.fmt != "json":
            _emit_failures(frame)
        return 1
    frame = services.compare_frame(params, config.upto)
    services.emit_report(frame, config.fmt, config.out)
    failed = frame[frame["status"] != "pass"]
    if failed.empty:
        return 0
    if config.out is not None or config.fmt != "json":
        sys.stdout.write(services.render_report(failed, "json"))
    return 1


def parse_and_dispatch(argv: Sequence[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        config = _config(args)
        return _dispatch(config, args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        logger.error("Cannot write report: %s", exc)
        return 2


def run_cli() -> None:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "cometproject.settings")
    import django

    django.setup()
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    run_cli()
