"""Command-line front end.

Exit status: 0 when every record passed, 1 on a verification failure or a
numerical error, 2 on a usage error.

The default precision (256 bits) can be overridden with the environment
variable ``ZETAINT_PRECISION``; ``--precision`` still wins.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from zetaint import __version__
from zetaint.errors import DomainError, ZetaIntError
from zetaint.evaluators import (
    ConjectureSpec,
    quad_2d_eval,
    reduce_1d_eval,
    series_eval,
    series_eval_conjecture,
)
from zetaint.exact import MonomialSpec, ZetaLinearForm, monomial_closed_form
from zetaint.harness import (
    DEFAULT_GRID,
    GridSpec,
    VerificationRecord,
    _compare,
    _exact_bound,
    gamma_limit_record,
    gamma_limit_study,
    rhs_value,
    verify_conjecture,
    verify_theorem1,
)
from zetaint.precision import PrecisionContext, eval_form
from zetaint.report import REPORT_SCHEMA, emit_report, format_number, write_report

log = logging.getLogger("zetaint")

PRECISION_ENV = "ZETAINT_PRECISION"
DEFAULT_PRECISION = 256
DEFAULT_TOL = "1e-30"
DEFAULT_QUAD_TOL = "1e-9"
DEFAULT_OFFSETS = "1e-1,1e-2,1e-3,1e-4,1e-5,1e-6"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _positive_decimal(text: str) -> str:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return text


def _decimal(text: str) -> str:
    try:
        float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}") from None
    return text


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return value


def _positive_int(text: str) -> int:
    value = _nonneg_int(text)
    if value == 0:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _precision(text: str) -> int:
    value = _nonneg_int(text)
    if value < 64:
        raise argparse.ArgumentTypeError(f"precision must be >= 64 bits, got {value}")
    return value


def _point(text: str) -> tuple[str, str]:
    re, _, im = text.partition(":")
    return _decimal(re), _decimal(im or "0")


def _offsets(text: str) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("need at least one offset")
    return [_positive_decimal(t) for t in items]


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return _precision(raw)
    except argparse.ArgumentTypeError as exc:
        print(f"zetaint: error: {PRECISION_ENV}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_precision, default=None,
                        help=f"working precision in bits (default {DEFAULT_PRECISION}, "
                             f"or ${PRECISION_ENV})")
    common.add_argument("--guard-bits", type=_nonneg_int, default=32)
    common.add_argument("--tol", type=_positive_decimal, default=DEFAULT_TOL,
                        help="requested tolerance for high-precision comparisons")
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "text"),
                        default="text")
    common.add_argument("--output", dest="output_path", default=None,
                        help="write the report here instead of stdout")
    common.add_argument("--jobs", type=_positive_int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="zetaint",
        description="Evaluate and verify the log-weighted double integrals over the unit square.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate one integral")
    p.add_argument("--r", type=_nonneg_int)
    p.add_argument("--s", type=_nonneg_int)
    p.add_argument("--n", type=_nonneg_int)
    p.add_argument("--z", type=_decimal, help="real part of the exponent z")
    p.add_argument("--z-imag", type=_decimal, default="0")
    p.add_argument("--methods", default=None,
                   help="comma list from series,reduce1d,quad2d")
    p.add_argument("--quad-tol", type=_positive_decimal, default=DEFAULT_QUAD_TOL)

    p = sub.add_parser("verify-theorem1", parents=[common], help="sweep the monomial box")
    p.add_argument("--r-max", type=_nonneg_int, default=3)
    p.add_argument("--s-max", type=_nonneg_int, default=3)
    p.add_argument("--n-max", type=_nonneg_int, default=3)
    p.add_argument("--part", choices=("a", "b", "all"), default="all")
    p.add_argument("--quad-tol", type=_positive_decimal, default=DEFAULT_QUAD_TOL)
    p.add_argument("--quad-stride", type=_nonneg_int, default=4,
                   help="run quad2d on every k-th spec (0 disables)")

    p = sub.add_parser("verify-conjecture", parents=[common], help="sweep the z grid")
    p.add_argument("--grid", choices=("default", "real", "complex", "none"), default="default")
    p.add_argument("--point", type=_point, action="append", default=[],
                   metavar="RE[:IM]", help="extra grid point (repeatable)")
    p.add_argument("--reduce-tol", type=_positive_decimal, default="1e-12")
    p.add_argument("--with-quad", action="store_true", help="also compare against quad2d")
    p.add_argument("--quad-tol", type=_positive_decimal, default=DEFAULT_QUAD_TOL)

    p = sub.add_parser("gamma-limit", parents=[common], help="z -> -1 limit study")
    p.add_argument("--offsets", type=_offsets, default=_offsets(DEFAULT_OFFSETS))
    p.add_argument("--limit-tol", type=_positive_decimal, default="1e-9",
                   help="allowed distance between the extrapolation and γ")

    sub.add_parser("report-schema", help="print the JSON schema of reports")
    return parser


def _context(args: argparse.Namespace) -> PrecisionContext:
    bits = args.precision if args.precision is not None else _default_precision()
    return PrecisionContext(bits, args.guard_bits)


def _config(args: argparse.Namespace, ctx: PrecisionContext, **extra) -> dict:
    # --jobs and --output are deliberately absent: they must not change report bytes
    cfg = {
        "command": args.command,
        "precision_bits": ctx.working_bits,
        "guard_bits": ctx.guard_bits,
        "tol": args.tol,
        "digits": ctx.digits,
    }
    cfg.update(extra)
    return cfg


def _emit(text: str, args: argparse.Namespace) -> None:
    if args.output_path:
        write_report(text, args.output_path)
    else:
        sys.stdout.write(text)


def _finish(records: list, args: argparse.Namespace, ctx: PrecisionContext, cfg: dict) -> int:
    _emit(emit_report(records, args.output_format, config=cfg, digits=ctx.digits), args)
    return EXIT_OK if records and all(r.passed for r in records) else EXIT_FAIL


def _cmd_eval(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    monomial = [v is not None for v in (args.r, args.s, args.n)]
    if args.z is not None and any(monomial):
        parser.error("eval: give either --r/--s/--n or --z, not both")
    if args.z is None and not all(monomial):
        parser.error("eval: need all of --r, --s, --n (or --z)")
    ctx = _context(args)
    mp = ctx.mp
    tol = ctx.convert(args.tol)
    quad_tol = float(args.quad_tol)
    if args.z is None:
        spec = MonomialSpec(args.r, args.s, args.n)
        methods = (args.methods or "series").split(",")
    else:
        try:
            spec = ConjectureSpec(ctx.complex(args.z, args.z_imag))
        except DomainError as exc:
            parser.error(f"eval: {exc}")
        methods = (args.methods or "series,reduce1d").split(",")
    for m in methods:
        if m not in ("series", "reduce1d", "quad2d"):
            parser.error(f"eval: unknown method {m!r}")
        if m == "reduce1d" and isinstance(spec, MonomialSpec):
            parser.error("eval: reduce1d only applies to --z")

    rec = VerificationRecord(spec=spec, tolerance=tol)
    if isinstance(spec, MonomialSpec):
        closed = monomial_closed_form(spec)
        rec.closed_form = str(closed)
        ref = eval_form(closed, ctx) if isinstance(closed, ZetaLinearForm) \
            else mp.mpc(ctx.convert(closed))
        ref_name = "closed_form"
    else:
        rec.closed_form = "Γ(z+2)[ζ(z+2) - 1/(z+1)]"
        ref = rhs_value(spec.z, ctx)
        ref_name = "rhs"
    rec.closed_form_value = ref
    ref_bound = _exact_bound(ref, ctx)
    for m in methods:
        if m == "series":
            res = series_eval(spec, ctx, tol) if isinstance(spec, MonomialSpec) \
                else series_eval_conjecture(spec.z, ctx, tol)
            req = tol
        elif m == "reduce1d":
            res = reduce_1d_eval(spec.z, ctx, min(float(args.tol), 1e-15))
            req = ctx.convert("1e-12")
        else:
            res = quad_2d_eval(spec, ctx, quad_tol)
            req = ctx.convert(args.quad_tol)
        rec.method_values.append(res)
        rec.comparisons.append(
            _compare(m, res.value, res.error_bound, ref_name, ref, ref_bound, req))

    if args.output_format != "text":
        cfg = _config(args, ctx, methods=",".join(methods))
        return _finish([rec], args, ctx, cfg)
    d = min(ctx.digits, 40)
    lines = [f"spec: {spec.label()}"]
    if isinstance(spec, MonomialSpec):
        lines.append(f"exact: {rec.closed_form}")
        lines.append(f"exact value: {format_number(ref, d)}")
    else:
        lines.append(f"RHS  Γ(z+2)[ζ(z+2) - 1/(z+1)]: {format_number(ref, d)}")
    for res, comp in zip(rec.method_values, rec.comparisons):
        kind = "rigorous" if res.rigorous else "heuristic"
        side = "LHS " if isinstance(spec, ConjectureSpec) else ""
        lines.append(
            f"{side}{res.method}: {format_number(res.value, d)}  "
            f"± {format_number(res.error_bound, 3)} ({kind}, effort {res.effort})  "
            f"delta {format_number(comp.delta, 3)} {'ok' if comp.passed else 'MISMATCH'}"
        )
    _emit("\n".join(lines) + "\n", args)
    return EXIT_OK if rec.passed else EXIT_FAIL


def _cmd_verify_theorem1(args: argparse.Namespace) -> int:
    ctx = _context(args)
    box = (args.r_max, args.s_max, args.n_max)
    part = None if args.part == "all" else args.part
    records = verify_theorem1(box, ctx, ctx.convert(args.tol), part=part,
                              quad_tol=float(args.quad_tol), quad_stride=args.quad_stride,
                              jobs=args.jobs)
    cfg = _config(args, ctx, box=list(box), part=args.part, quad_tol=args.quad_tol,
                  quad_stride=args.quad_stride)
    return _finish(records, args, ctx, cfg)


def _cmd_verify_conjecture(args: argparse.Namespace) -> int:
    ctx = _context(args)
    real = DEFAULT_GRID.real_points if args.grid in ("default", "real") else ()
    cplx = DEFAULT_GRID.complex_points if args.grid in ("default", "complex") else ()
    cplx = tuple(cplx) + tuple(args.point)
    grid = GridSpec(real_points=real, complex_points=cplx)
    try:
        grid.points(ctx)
    except DomainError as exc:
        print(f"zetaint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records = verify_conjecture(grid, ctx, ctx.convert(args.tol),
                                reduce_tol=ctx.convert(args.reduce_tol),
                                with_quad=args.with_quad, quad_tol=float(args.quad_tol),
                                jobs=args.jobs)
    cfg = _config(args, ctx, grid=args.grid, points=[list(p) for p in args.point],
                  reduce_tol=args.reduce_tol, with_quad=args.with_quad)
    return _finish(records, args, ctx, cfg)


def _cmd_gamma_limit(args: argparse.Namespace) -> int:
    ctx = _context(args)
    study = gamma_limit_study(args.offsets, ctx, ctx.convert(args.tol))
    rec = gamma_limit_record(study, ctx, args.limit_tol)
    cfg = _config(args, ctx, offsets=list(args.offsets), limit_tol=args.limit_tol)
    return _finish([rec], args, ctx, cfg)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "report-schema":
        sys.stdout.write(json.dumps(REPORT_SCHEMA, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    if args.command == "verify-conjecture" and args.grid == "none" and not args.point:
        parser.error("verify-conjecture: --grid none needs at least one --point")
    if args.command == "gamma-limit":
        try:
            offs = [float(o) for o in args.offsets]
        except ValueError:
            parser.error("gamma-limit: bad offsets")
        if any(not 0 < o < 1 for o in offs) or any(b >= a for a, b in zip(offs, offs[1:])):
            parser.error("gamma-limit: offsets must lie in (0, 1) and strictly decrease")
    try:
        if args.command == "eval":
            return _cmd_eval(args, parser)
        if args.command == "verify-theorem1":
            return _cmd_verify_theorem1(args)
        if args.command == "verify-conjecture":
            return _cmd_verify_conjecture(args)
        return _cmd_gamma_limit(args)
    except ZetaIntError as exc:
        print(f"zetaint: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
