"""Command line entry point: ``mori-class``."""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import census as census_mod
from . import verify as verify_mod
from .classifier import compare
from .mfsfile import ParseError, parse_file
from .models import ModelError, hodge_feasibility, invariants

EXIT_INPUT_ERROR = 3
OUTPUT_NAMES = {"b2X": "b2", "b3X": "b3", "chiOX": "chi"}


def _load(path: str):
    try:
        return invariants(parse_file(path))
    except OSError as exc:
        raise ParseError(path, 0, 0, exc.strerror or str(exc)) from None


def _record_lines(rec) -> list[str]:
    lines = []
    for key, value in rec.items():
        lines.append(f"{OUTPUT_NAMES.get(key, key)}={value}")
    h = hodge_feasibility(rec)
    if h.checked:
        lines.append(f"hodge_feasible={str(h.feasible).lower()}")
        if h.equality:
            lines.append("hodge_equality=true")
        lines.append(f"primed_excluded={str(h.primed_excluded).lower()}")
    return lines


def cmd_invariants(args) -> int:
    rec = _load(args.file)
    print("\n".join(_record_lines(rec)))
    return 0


def cmd_compare(args) -> int:
    a, b = _load(args.file_a), _load(args.file_b)
    v = compare(a, b)
    if args.json_lines:
        for r in v.reasons:
            print(json.dumps({"rule": r.rule, "left": r.left, "right": r.right, "ok": r.ok}))
        for note in v.notes:
            print(json.dumps({"note": note}))
        print(json.dumps({"verdict": v.outcome.value, "branch": v.branch}))
    else:
        for r in v.reasons:
            print(f"reason {r}")
        for note in v.notes:
            print(f"note {note}")
        print(f"verdict={v.outcome.value} branch={v.branch}")
    return v.exit_code


def _parse_bounds(extra: list[str]) -> dict[str, tuple[int, int]]:
    lows: dict[str, int] = {}
    highs: dict[str, int] = {}
    it = iter(extra)
    for tok in it:
        m = re.fullmatch(r"--(min|max)-([A-Za-z0-9_]+)(?:=(.*))?", tok)
        if not m:
            raise census_mod.CensusError(f"unrecognized argument {tok!r}")
        raw = m.group(3)
        if raw is None:
            raw = next(it, None)
            if raw is None:
                raise census_mod.CensusError(f"{tok} needs a value")
        try:
            val = int(raw)
        except ValueError:
            raise census_mod.CensusError(f"{tok} expects an integer, got {raw!r}") from None
        (lows if m.group(1) == "min" else highs)[m.group(2)] = val
    half = sorted(set(lows) ^ set(highs))
    if half:
        raise census_mod.CensusError(f"both --min-X and --max-X are required for: {', '.join(half)}")
    return {k: (lows[k], highs[k]) for k in lows}


def cmd_census(args, extra: list[str]) -> int:
    bounds = _parse_bounds(extra)
    classes = census_mod.census(args.family, bounds)
    total = sum(c.count for c in classes)
    print(f"family={args.family} classes={len(classes)} records={total}")
    for i, c in enumerate(classes):
        fields = " ".join(f"{OUTPUT_NAMES.get(k, k)}={v}" for k, v in c.representative.items() if k != "name")
        flag = " undetermined_neighbors=true" if c.undetermined else ""
        print(f"class {i} count={c.count}{flag} {fields}")
    return 0


def cmd_verify(args) -> int:
    results = verify_mod.run(args.suite)
    failed = 0
    for name, ok, detail in results:
        failed += not ok
        tail = f" ({detail})" if detail and not ok else ""
        print(f"{'PASS' if ok else 'FAIL'} {name}{tail}")
    print(f"passed={len(results) - failed} failed={failed}")
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mori-class", description="Invariants and diffeomorphism decisions for Mori fiber spaces.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("invariants", help="print the invariant record of a description file")
    s.add_argument("file")
    s = sub.add_parser("compare", help="decide oriented diffeomorphism of two descriptions")
    s.add_argument("file_a")
    s.add_argument("file_b")
    s.add_argument("--json-lines", action="store_true", help="one JSON object per line")
    s = sub.add_parser("census", help="count diffeomorphism classes inside bounds (--min-FIELD N --max-FIELD N)")
    s.add_argument("--family", required=True, choices=census_mod.FAMILIES)
    s = sub.add_parser("verify", help="run the built-in consistency checks")
    s.add_argument("--suite", default="all", choices=(*verify_mod.SUITES, "all"))
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    if extra and args.command != "census":
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        if args.command == "invariants":
            return cmd_invariants(args)
        if args.command == "compare":
            return cmd_compare(args)
        if args.command == "census":
            return cmd_census(args, extra)
        return cmd_verify(args)
    except (ParseError, ModelError, census_mod.CensusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
