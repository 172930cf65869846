"""Command-line entry point.

Subcommands mirror the command layer one-to-one: scale, limit, mbn, sweep,
rational, target.  Everything numeric goes to stdout as a deterministic
JSON envelope (--pretty only re-indents); sweep writes CSV.  Exit codes:
0 success, 1 usage/parse error, 2 numeric failure, 3 resource limit.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import commands
from .envelope import error_envelope, to_json
from .errors import InputError, SinklabError
from .matrix import PositiveMatrix, parse_matrix, parse_matrix_csv
from .rational import DEFAULT_BIT_BOUND, RationalMatrix, parse_rational


def _add_matrix_source(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help="inline JSON rows, e.g. '[[2,1],[1,2]]'")
    src.add_argument("--file", help="path to a JSON or CSV matrix file")


def _load_matrix(args) -> PositiveMatrix:
    if args.matrix is not None:
        return parse_matrix(args.matrix)
    path = Path(args.file)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.file!r}: {exc}") from None
    if path.suffix.lower() == ".csv":
        return parse_matrix_csv(text)
    return parse_matrix(text)


def _load_rational_matrix(args) -> RationalMatrix:
    import json

    if args.matrix is not None:
        text = args.matrix
        is_csv = False
    else:
        path = Path(args.file)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {args.file!r}: {exc}") from None
        is_csv = path.suffix.lower() == ".csv"
    if is_csv:
        rows = [
            [cell.strip() for cell in line.split(",")]
            for line in text.strip().splitlines()
            if line.strip()
        ]
    else:
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"matrix is not valid JSON: {exc}") from None
        if isinstance(rows, dict):
            rows = rows.get("rows", rows)
    if not isinstance(rows, list):
        raise InputError("rational matrix must be a list of rows")
    return RationalMatrix([[_rational_cell(cell) for cell in row] for row in rows])


def _rational_cell(cell):
    if isinstance(cell, bool) or isinstance(cell, float):
        raise InputError(
            f"rational matrices take integers or 'p/q' strings, not {cell!r}"
        )
    if isinstance(cell, int):
        return cell
    if isinstance(cell, str):
        return parse_rational(cell)
    raise InputError(f"bad rational entry {cell!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sinklab",
        description="Sinkhorn scaling laboratory: iteration, closed-form "
        "limits, classification, and exact-rational probes.",
    )
    parser.add_argument(
        "--pretty", action="store_true", help="indent the JSON envelope"
    )
    # default=SUPPRESS so a subparser never clobbers a --pretty given before
    # the subcommand (subparsers re-apply plain defaults onto the namespace)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--pretty", action="store_true", default=argparse.SUPPRESS,
        help="indent the JSON envelope",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser(
        "scale",
        parents=[common],
        help="alternate row/column scaling to doubly stochastic",
    )
    _add_matrix_source(p)
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--max-iters", type=int, default=100_000)
    p.add_argument("--order", choices=("row_first", "col_first"), default="row_first")
    p.add_argument("--trace", action="store_true", help="record per-pass residuals")

    p = sub.add_parser("limit", parents=[common], help="classification-aware Sinkhorn limit")
    _add_matrix_source(p)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("mbn", parents=[common], help="closed-form limit of a two-block MBN matrix")
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)

    p = sub.add_parser("sweep", parents=[common], help="CSV of canonical limit coordinates over a K range")
    p.add_argument("--label", required=True)
    p.add_argument("--k-min", type=float, required=True)
    p.add_argument("--k-max", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--out", help="write CSV here instead of stdout")

    p = sub.add_parser("rational", parents=[common], help="exact-rational probes and traces")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--probe", choices=("A2",), help="rationality probe")
    mode.add_argument(
        "--cube-root", action="store_true", help="convergents to cbrt(2)-1 from A6(2)"
    )
    mode.add_argument("--trace", action="store_true", help="exact trace of --matrix/--file")
    p.add_argument("--K", type=int, help="integer parameter for --probe")
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--bit-bound", type=int, default=DEFAULT_BIT_BOUND)
    p.add_argument("--matrix")
    p.add_argument("--file")

    p = sub.add_parser("target", parents=[common], help="(r,c)-stochastic scaling")
    _add_matrix_source(p)
    p.add_argument("--row-sums", required=True, help="comma-separated positive targets")
    p.add_argument("--col-sums", required=True, help="comma-separated positive targets")
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--max-iters", type=int, default=100_000)

    return parser


def _parse_sums(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad target sums {text!r}: {exc}") from None


def _dispatch(args):
    if args.subcommand == "scale":
        return commands.run_scale(
            _load_matrix(args),
            tol=args.tol,
            max_iters=args.max_iters,
            order=args.order,
            trace=args.trace,
        )
    if args.subcommand == "limit":
        return commands.run_limit(_load_matrix(args), tol=args.tol)
    if args.subcommand == "mbn":
        return commands.run_mbn(args.M, args.B, args.N, args.k, args.ell)
    if args.subcommand == "sweep":
        return commands.run_sweep(args.label, args.k_min, args.k_max, args.points)
    if args.subcommand == "rational":
        if args.probe is not None:
            if args.K is None:
                raise InputError("--probe A2 needs --K")
            return commands.run_rational_probe(
                args.K, steps=args.steps, bit_bound=args.bit_bound
            )
        if args.cube_root:
            return commands.run_rational_cube_root(args.steps, bit_bound=args.bit_bound)
        if args.matrix is None and args.file is None:
            raise InputError("--trace needs --matrix or --file")
        return commands.run_rational_trace(
            _load_rational_matrix(args), args.steps, bit_bound=args.bit_bound
        )
    if args.subcommand == "target":
        return commands.run_target(
            _load_matrix(args),
            _parse_sums(args.row_sums),
            _parse_sums(args.col_sums),
            tol=args.tol,
            max_iters=args.max_iters,
        )
    raise InputError(f"unknown subcommand {args.subcommand!r}")


def _error_details(exc):
    partial = getattr(exc, "partial", None)
    if partial is not None:
        return {"iterations": partial.iterations, "residual": partial.residual}
    report = getattr(exc, "report", None)
    if report is not None:
        return {
            "steps_run": report.steps_run,
            "final_deviation": report.final_deviation,
        }
    return None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed a usage message
        return 1 if exc.code not in (0, None) else 0

    try:
        output = _dispatch(args)
    except SinklabError as exc:
        env = error_envelope(
            getattr(args, "subcommand", "?"),
            None,
            type(exc).__name__,
            str(exc),
            details=_error_details(exc),
        )
        sys.stdout.write(to_json(env, pretty=args.pretty))
        return exc.exit_code

    if isinstance(output, str):
        if getattr(args, "out", None):
            Path(args.out).write_text(output)
        else:
            sys.stdout.write(output)
    else:
        sys.stdout.write(to_json(output, pretty=args.pretty))
    return 0


if __name__ == "__main__":
    sys.exit(main())
