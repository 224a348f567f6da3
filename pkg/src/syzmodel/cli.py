"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 failed internal self-check.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .errors import InternalCheckError, ValidationError
from .export import dumps, rows_csv, segments_csv, sigma_off, spine_json
from .instance import Instance, load_instance, parse_point
from .reports import amoeba_report, check_report, mirror_report, monodromy_report, sigma_report, spine_report

COMMANDS = ("check", "sigma", "monodromy", "mirror", "spine", "amoeba", "export")
AMOEBA_COLUMNS = ["s", "log_s", "points", "sup_dist", "spine_cover_dist", "hausdorff"]


def _floats(text: str, n: int | None, what: str) -> tuple[float, ...]:
    try:
        vals = tuple(_number(x) for x in text.split(","))
    except ValueError:
        raise ValidationError(f"--{what}: expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise ValidationError(f"--{what}: expected {n} numbers")
    return vals


def _number(x: str) -> float:
    """Plain floats, or ``e^k`` for powers of e."""
    x = x.strip()
    if x.startswith("e^"):
        return math.exp(float(x[2:]))
    return float(x)


def _loop(text: str, d: int) -> list[tuple]:
    return [parse_point(p.strip(), d, "--loop") for p in text.split(";")]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="syzmodel", description="Combinatorial model of a dual pair of reflexive polytopes.")
    p.add_argument("--version", action="version", version=f"syzmodel {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        c = sub.add_parser(name)
        c.add_argument("--instance", required=True, help="instance JSON file")
        c.add_argument("--seed", type=int, default=None, help="override the instance seed for auto heights")
        c.add_argument("--out", default=None, help="write artifacts to this directory instead of stdout")
        c.add_argument("--format", choices=("json", "csv", "off"), default="json")
        if name in ("amoeba", "export"):
            c.add_argument("--window", default=None, help="x0,y0,x1,y1")
        if name == "amoeba":
            c.add_argument("--s-ladder", default=None, help="increasing s values, e.g. e^2,e^4,e^6,e^8")
            c.add_argument("--grid", default=None, help="n_r,n_phi")
        if name == "monodromy":
            c.add_argument("--loop", default=None, help="explicit loop v0;w0;v1;...;v0 with points as x,y,z")
        if name == "spine":
            c.add_argument("--no-cells", action="store_true", help="omit the per-cell listing")
    return p


def _emit(text: str, out: str | None, filename: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / filename).write_text(text)
    print(d / filename)


def _only_json(args) -> None:
    if args.format != "json":
        raise ValidationError(f"{args.command} reports are JSON only")


def run(args: argparse.Namespace) -> int:
    inst: Instance = load_instance(args.instance, args.seed)
    cmd = args.command
    if cmd == "check":
        _only_json(args)
        _emit(dumps(check_report(inst)), args.out, "check.json")
    elif cmd == "sigma":
        _only_json(args)
        rep = sigma_report(inst)
        _emit(dumps(rep), args.out, "sigma.json")
        if args.out is not None:
            print(rep["summary"])
    elif cmd == "monodromy":
        _only_json(args)
        loop = _loop(args.loop, inst.d) if args.loop else None
        _emit(dumps(monodromy_report(inst, loop)), args.out, "monodromy.json")
    elif cmd == "mirror":
        _only_json(args)
        _emit(dumps(mirror_report(inst)), args.out, "mirror.json")
    elif cmd == "spine":
        _only_json(args)
        _emit(dumps(spine_report(inst, cells=not args.no_cells)), args.out, "spine.json")
    elif cmd == "amoeba":
        if args.format == "off":
            raise ValidationError("amoeba output is json or csv")
        window = _floats(args.window, 4, "window") if args.window else None
        ladder = _floats(args.s_ladder, None, "s-ladder") if args.s_ladder else None
        grid = tuple(int(x) for x in _floats(args.grid, 2, "grid")) if args.grid else None
        rep = amoeba_report(inst, window, ladder, grid)
        if args.format == "csv":
            _emit(rows_csv(rep["rows"], AMOEBA_COLUMNS), args.out, "amoeba.csv")
        else:
            _emit(dumps(rep), args.out, "amoeba.json")
    elif cmd == "export":
        if args.format == "json":
            _emit(spine_json(inst), args.out, "spine.json")
        elif args.format == "csv":
            window = _floats(args.window, 4, "window") if args.window else inst.option("window", (-3, -3, 3, 3))
            _emit(segments_csv(inst, window), args.out, "spine_segments.csv")
        else:
            _emit(sigma_off(inst), args.out, "sigma.off")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (InternalCheckError, AssertionError) as e:
        print(f"internal check failed: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # anything unexpected is a bug, not bad input
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
