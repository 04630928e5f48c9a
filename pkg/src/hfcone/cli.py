"""Command-line front end.

    hfcone validate t34.json
    hfcone surgery --builtin t34 --n 1
    hfcone surgery --builtin unknot --n 4 --all-spinc --format json
    hfcone dinv --builtin unknot --n 2
    hfcone cobordism --builtin t34 --n -1 --s 0

Exit codes: 0 success, 1 invalid complex, 2 computation failure, 3 usage.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .cone import (StabilizationError, build_cone, cobordism_map, surgery_homology,
                   truncation_width, zero_surgery_homology)
from .gradings import format_rational
from .knotcx import ComplexError, ValidationError, builtin, load_complex, validate

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2, 3

log = logging.getLogger("hfcone")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; we reserve 2 for computation errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _auto_or_int(text):
    if text == "auto":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or an integer, got {text!r}")


def _add_input(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("path", nargs="?", help="knot complex file (JSON)")
    src.add_argument("--builtin", metavar="NAME",
                     help="unknot, t34, staircase:1,2,2,1 or borromean:G")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hfcone", description="HF+ of integer surgeries via the mapping cone.")
    parser.add_argument("--version", action="version", version=f"hfcone {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a knot complex file")
    _add_input(p)

    p = sub.add_parser("surgery", help="HF+ of n-surgery per Spin^c class")
    _add_input(p)
    p.add_argument("--n", type=int, required=True)
    which = p.add_mutually_exclusive_group()
    which.add_argument("--spinc", type=int, default=None, metavar="I")
    which.add_argument("--all-spinc", action="store_true")
    p.add_argument("--delta", type=_auto_or_int, default=None, metavar="auto|K")
    p.add_argument("--width", type=_auto_or_int, default=None, metavar="auto|B")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--dump", action="store_true",
                   help="write the truncated cone complexes to stderr as JSON")

    p = sub.add_parser("dinv", help="d-invariants of n-surgery")
    _add_input(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("cobordism", help="map induced by the 2-handle cobordism on B_s")
    _add_input(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--delta", type=_auto_or_int, default=None, metavar="auto|K")
    p.add_argument("--width", type=_auto_or_int, default=None, metavar="auto|B")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _load(args):
    if args.builtin is not None:
        try:
            return builtin(args.builtin), f"builtin:{args.builtin}"
        except (ComplexError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
    try:
        return load_complex(args.path), args.path
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc.strerror or exc}") from exc


def _report(args, source, params, results) -> dict:
    return {"input": source, "command": args.command, "params": params,
            "results": results, "version": __version__}


def _emit(obj):
    print(json.dumps(obj, indent=2, ensure_ascii=False))


def cmd_validate(args) -> int:
    if args.builtin is not None:
        C, source = _load(args)
        failures = validate(C)
    else:
        try:
            C, source = _load(args)
            failures = []
        except ValidationError as exc:
            C, source, failures = None, args.path, exc.failures
    if failures:
        for msg in failures:
            print(f"FAIL {source}: {msg}", file=sys.stderr)
        return EXIT_INVALID
    print(f"ok: {source} ({C.name}, {len(C)} generators)")
    return EXIT_OK


def _classes(args):
    n = args.n
    if n == 0:
        if args.all_spinc:
            raise UsageError("--all-spinc needs n != 0 (there are infinitely many classes)")
        return [args.spinc or 0]
    if args.all_spinc:
        return list(range(abs(n)))
    return [0 if args.spinc is None else args.spinc % abs(n)]


def cmd_surgery(args) -> int:
    C, source = _load(args)
    if args.n == 0 and args.width is not None:
        raise UsageError("--width does not apply to n = 0")
    results = []
    for i in _classes(args):
        if args.n == 0:
            res = zero_surgery_homology(C, i, delta=args.delta)
        else:
            res = surgery_homology(C, args.n, i, delta=args.delta, width=args.width)
        log.info("n=%d i=%d settled at delta=%s", args.n, i, res.meta["delta"])
        results.append(res)
        if args.dump and args.n != 0:
            X = build_cone(C, args.n, res.i, res.meta["delta"], res.meta["width"])
            print(json.dumps({"n": args.n, "i": res.i, "cone": X.dump()}), file=sys.stderr)
    params = {"n": args.n, "spinc": "all" if args.all_spinc else results[0].i,
              "delta": "auto" if args.delta is None else args.delta,
              "width": "auto" if args.width is None else args.width}
    if args.format == "json":
        _emit(_report(args, source, params, [r.to_dict() for r in results]))
        return EXIT_OK
    print(f"{source}: {args.n}-surgery")
    for r in results:
        note = " (relative grading)" if args.n == 0 else ""
        print(f"  i={r.i}: {r.describe()}{note}")
    return EXIT_OK


def cmd_dinv(args) -> int:
    C, source = _load(args)
    if args.n == 0:
        raise UsageError("d-invariants need n != 0")
    results = [surgery_homology(C, args.n, i) for i in range(abs(args.n))]
    table = {r.i: list(r.towers) for r in results}
    if args.format == "json":
        params = {"n": args.n, "spinc": "all", "delta": "auto", "width": "auto"}
        _emit(_report(args, source, params, [r.to_dict() for r in results]))
        return EXIT_OK

    def cell(ds):
        if len(ds) == 1:
            return format_rational(ds[0])
        return "[" + ", ".join(format_rational(d) for d in ds) + "]"

    print(", ".join(f"{i}: {cell(ds)}" for i, ds in table.items()))
    return EXIT_OK


def cmd_cobordism(args) -> int:
    C, source = _load(args)
    if args.n == 0:
        raise UsageError("cobordism maps need n != 0")
    try:
        res = cobordism_map(C, args.n, args.s, delta=args.delta, width=args.width)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        params = {"n": args.n, "spinc": res.i, "s": args.s, "delta": res.delta,
                  "width": truncation_width(C, args.n) if args.width is None else args.width}
        _emit(_report(args, source, params, [res.to_dict()]))
        return EXIT_OK
    print(f"{source}: B_{args.s} -> {args.n}-surgery, class i={res.i}, "
          f"degree {format_rational(res.degree)}, delta={res.delta}")
    for row in res.to_dict()["blocks"]:
        print(f"  degree {row['source_degree']} -> {row['target_degree']}: rank {row['rank']}")
        for line in row["matrix"]:
            print("    " + " ".join(map(str, line)))
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "surgery": cmd_surgery, "dinv": cmd_dinv,
            "cobordism": cmd_cobordism}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hfcone: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        for msg in exc.failures:
            print(f"hfcone: invalid complex: {msg}", file=sys.stderr)
        return EXIT_INVALID
    except ComplexError as exc:
        print(f"hfcone: invalid complex: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except StabilizationError as exc:
        print(f"hfcone: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
