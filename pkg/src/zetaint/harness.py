"""Desk-scale verification sweeps over the monomial box and the z grids.

Every comparison carries its own tolerance: the requested ``tol`` plus the
error bounds both sides reported, so honest numerical error never fails a
record. Evaluator exceptions are captured into failed records; a sweep
never aborts halfway.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, NamedTuple, Sequence

from zetaint.errors import DomainError, ZetaIntError
from zetaint.evaluators import (
    ConjectureSpec,
    EvaluationResult,
    IntegralSpec,
    quad_2d_eval,
    reduce_1d_eval,
    series_eval,
    series_eval_conjecture,
    spec_sort_key,
)
from zetaint.exact import (
    MonomialSpec,
    ZetaLinearForm,
    corollary_form,
    divisibility_check,
    monomial_closed_form,
)
from zetaint.precision import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    eval_form,
    euler_gamma,
    gamma,
    zeta_minus_pole,
)

__all__ = [
    "Comparison",
    "VerificationRecord",
    "GridSpec",
    "DEFAULT_GRID",
    "GammaLimit",
    "rhs_value",
    "verify_theorem1",
    "verify_conjecture",
    "quad2d_gate",
    "gamma_limit_study",
    "gamma_limit_record",
    "rethreshold",
]

log = logging.getLogger(__name__)

# a value computed at working precision is trusted to this many ulps
_ULPS = 16


@dataclass(frozen=True)
class Comparison:
    method_a: str
    method_b: str
    value_a: Any
    value_b: Any
    delta: Any
    allowance: Any  # sum of the two sides' error bounds
    requested_tol: Any

    @property
    def tolerance(self) -> Any:
        return self.allowance + self.requested_tol

    @property
    def passed(self) -> bool:
        return _finite(self.delta) and self.delta <= self.tolerance


def _finite(x: Any) -> bool:
    if hasattr(x, "_mpc_"):
        return _finite(x.real) and _finite(x.imag)
    if hasattr(x, "_mpf_"):
        return not (x != x or abs(x) == float("inf"))
    return math.isfinite(x)


@dataclass
class VerificationRecord:
    spec: IntegralSpec
    closed_form: str | None = None
    closed_form_value: Any = None
    method_values: list[EvaluationResult] = field(default_factory=list)
    comparisons: list[Comparison] = field(default_factory=list)
    tolerance: Any = 0
    checks: dict[str, bool] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def max_delta(self) -> Any:
        if not self.comparisons:
            return 0
        return max(c.delta for c in self.comparisons)

    @property
    def passed(self) -> bool:
        if self.error is not None or not self.comparisons:
            return False
        if not all(_finite(r.value) and _finite(r.error_bound) for r in self.method_values):
            return False
        return all(c.passed for c in self.comparisons) and all(self.checks.values())


def rethreshold(records: Iterable[VerificationRecord], tol: Any) -> list[VerificationRecord]:
    """Re-judge stored deltas against a new requested tolerance.

    Only comparisons that used the record-level tolerance are rescaled;
    fixed-tolerance comparisons (e.g. against quad2d) keep theirs.
    """
    out = []
    for rec in records:
        comps = [
            replace(c, requested_tol=tol) if c.requested_tol == rec.tolerance else c
            for c in rec.comparisons
        ]
        out.append(replace(rec, comparisons=comps, tolerance=tol))
    return out


@dataclass(frozen=True)
class GridSpec:
    real_points: tuple = ()
    complex_points: tuple = ()  # pairs of decimal strings (re, im)
    monomial_box: tuple[int, int, int] = (0, 0, 0)

    def points(self, ctx: PrecisionContext) -> list:
        pts = [ctx.complex(x) for x in self.real_points]
        pts += [ctx.complex(re, im) for re, im in self.complex_points]
        for z in pts:
            if z.real <= -2:
                raise DomainError(f"grid point {z} violates Re(z) > -2")
        return pts


DEFAULT_GRID = GridSpec(
    real_points=("-1.9", "-1.5", "-1", "-0.5", "0", "0.5", "1", "2", "3.7", "5"),
    complex_points=(("-0.5", "1"), ("1", "2"), ("0.25", "-3"), ("2", "4")),
    monomial_box=(5, 5, 4),
)


def rhs_value(z: Any, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Any:
    """Γ(z+2)[ζ(z+2) - 1/(z+1)], evaluated as Γ(z+2) · (ζ - pole)(z+2).

    Defined at z = -1 as well, where it returns γ.
    """
    if isinstance(z, ConjectureSpec):
        z = z.z
    z = ctx.mp.mpc(ctx.convert(z))
    if z.real <= -2:
        raise DomainError(f"need Re(z) > -2, got {z}")
    w = z + 2
    return ctx.round(gamma(w, ctx) * zeta_minus_pole(w, ctx))


def _compare(a_name, a_val, a_bound, b_name, b_val, b_bound, tol) -> Comparison:
    return Comparison(a_name, b_name, a_val, b_val, abs(a_val - b_val), a_bound + b_bound, tol)


def _exact_bound(value: Any, ctx: PrecisionContext) -> Any:
    return abs(value) * ctx.eps * _ULPS + ctx.eps


def _run(fn: Callable, tasks: Sequence, jobs: int) -> list:
    log.debug("%s: %d tasks, %d worker(s)", fn.__name__, len(tasks), max(1, jobs))
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=1))


# ---------------------------------------------------------------------------
# monomial integrals


def _check_monomial(task: tuple) -> VerificationRecord:
    spec, ctx, tol, with_quad, quad_tol = task
    rec = VerificationRecord(spec=spec, tolerance=tol)
    try:
        closed = monomial_closed_form(spec)
        rec.closed_form = str(closed)
        if isinstance(closed, ZetaLinearForm):
            cval = eval_form(closed, ctx)
        else:
            cval = ctx.mp.mpc(ctx.convert(closed))
            _, swapped = spec.canonical()
            if swapped:
                rec.notes.append("r < s: closed form taken with exponents swapped")
            div = divisibility_check(spec)
            rec.checks["denominator_divides_lcm_power"] = div.holds
            rec.notes.append(f"denominator {div.denominator} | lcm(1..r)^(n+2) = {div.bound}: {div.holds}")
        rec.closed_form_value = cval
        cbound = _exact_bound(cval, ctx)

        ser = series_eval(spec, ctx, tol)
        rec.method_values.append(ser)
        rec.comparisons.append(
            _compare("series", ser.value, ser.error_bound, "closed_form", cval, cbound, tol))
        sign = -1 if spec.n % 2 else 1
        rec.checks["sign_is_(-1)^n"] = sign * ser.value.real > 0

        if with_quad:
            q = quad_2d_eval(spec, ctx, quad_tol)
            rec.method_values.append(q)
            rec.comparisons.append(
                _compare("quad2d", q.value, q.error_bound, "closed_form", cval, cbound, quad_tol))
            rec.comparisons.append(
                _compare("quad2d", q.value, q.error_bound, "series", ser.value, ser.error_bound,
                         quad_tol))
    except (ZetaIntError, ArithmeticError, ValueError) as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
        rec.notes.append(rec.error)
    return rec


def verify_theorem1(
    box: tuple[int, int, int],
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    tol: Any = 1e-30,
    *,
    part: str | None = None,
    quad_tol: float = 1e-9,
    quad_stride: int = 4,
    jobs: int = 1,
) -> list[VerificationRecord]:
    """Check every (r, s, n) with r <= r_max, s <= s_max, n <= n_max.

    ``part`` restricts the sweep: ``"a"`` keeps r > s, ``"b"`` keeps r == s.
    quad2d runs on every ``quad_stride``-th spec in sorted order (0 disables).
    """
    r_max, s_max, n_max = box
    if min(box) < 0:
        raise DomainError(f"box bounds must be >= 0, got {box}")
    if part not in (None, "a", "b"):
        raise ValueError(f"part must be None, 'a' or 'b', got {part!r}")
    specs = [
        MonomialSpec(r, s, n)
        for r in range(r_max + 1)
        for s in range(s_max + 1)
        for n in range(n_max + 1)
        if part is None or (part == "a" and r > s) or (part == "b" and r == s)
    ]
    specs.sort(key=spec_sort_key)
    mp_tol = ctx.convert(tol)
    tasks = [
        (spec, ctx, mp_tol, bool(quad_stride) and i % quad_stride == 0, quad_tol)
        for i, spec in enumerate(specs)
    ]
    records = _run(_check_monomial, tasks, jobs)
    return sorted(records, key=lambda r: spec_sort_key(r.spec))


# ---------------------------------------------------------------------------
# conjecture


def _is_nonneg_integer(z: Any) -> int | None:
    if z.imag != 0 or z.real < 0:
        return None
    x = z.real
    if x == int(x):
        return int(x)
    return None


def _check_conjecture(task: tuple) -> VerificationRecord:
    z, ctx, tol, reduce_tol, with_quad, quad_tol = task
    spec = ConjectureSpec(z)
    rec = VerificationRecord(spec=spec, tolerance=tol)
    try:
        rhs = rhs_value(z, ctx)
        rbound = _exact_bound(rhs, ctx)
        rec.closed_form = "Γ(z+2)[ζ(z+2) - 1/(z+1)]"
        rec.closed_form_value = rhs

        ser = series_eval_conjecture(z, ctx, tol)
        red = reduce_1d_eval(z, ctx, reduce_tol / 1000)
        rec.method_values += [ser, red]
        rec.comparisons += [
            _compare("series", ser.value, ser.error_bound, "rhs", rhs, rbound, tol),
            _compare("reduce1d", red.value, red.error_bound, "rhs", rhs, rbound, reduce_tol),
            _compare("reduce1d", red.value, red.error_bound, "series", ser.value,
                     ser.error_bound, reduce_tol),
        ]
        n = _is_nonneg_integer(z)
        if n is not None:
            form = corollary_form(n)
            exact = eval_form(form, ctx)
            ebound = _exact_bound(exact, ctx)
            rec.notes.append(f"integer z = {n}: corollary form {form}")
            rec.comparisons += [
                _compare("rhs", rhs, rbound, "corollary", exact, ebound, tol),
                _compare("series", ser.value, ser.error_bound, "corollary", exact, ebound, tol),
            ]
        if z.imag == 0:
            # -ln(xy) > 0 on the open square, so the integral is real and positive
            rec.checks["real_and_positive"] = (
                abs(ser.value.imag) <= ser.error_bound and ser.value.real > 0
            )
        if with_quad:
            q = quad_2d_eval(spec, ctx, quad_tol)
            rec.method_values.append(q)
            rec.comparisons.append(
                _compare("quad2d", q.value, q.error_bound, "series", ser.value, ser.error_bound,
                         quad_tol))
    except (ZetaIntError, ArithmeticError, ValueError) as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
        rec.notes.append(rec.error)
    return rec


def verify_conjecture(
    grid: GridSpec = DEFAULT_GRID,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    tol: Any = 1e-18,
    *,
    reduce_tol: Any = 1e-12,
    with_quad: bool = False,
    quad_tol: float = 1e-9,
    jobs: int = 1,
) -> list[VerificationRecord]:
    """Series and reduced-1D left sides against the Γ·ζ right side per z."""
    points = grid.points(ctx)
    tasks = [
        (z, ctx, ctx.convert(tol), ctx.convert(reduce_tol), with_quad, quad_tol)
        for z in points
    ]
    records = _run(_check_conjecture, tasks, jobs)
    return sorted(records, key=lambda r: spec_sort_key(r.spec))


QUAD_GATE_POINTS = (("0", "0"), ("1", "0"), ("2.5", "0"), ("-0.5", "0"), ("-1.5", "0"), ("1", "1"))


def quad2d_gate(ctx: PrecisionContext = DEFAULT_CONTEXT, tol: float = 1e-9,
                jobs: int = 1) -> list[VerificationRecord]:
    """Validate the series term formula against the literal 2-D integral."""
    grid = GridSpec(complex_points=QUAD_GATE_POINTS)
    return verify_conjecture(grid, ctx, tol, reduce_tol=tol, with_quad=True, quad_tol=tol,
                             jobs=jobs)


# ---------------------------------------------------------------------------
# z -> -1


class GammaLimit(NamedTuple):
    offsets: list
    estimates: list
    extrapolated: Any
    reference: Any
    reference_delta: Any


def _neville_at_zero(xs: Sequence, ys: Sequence) -> Any:
    # polynomial extrapolation to x = 0 (Richardson for arbitrary step ratios)
    p = list(ys)
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i])
    return p[0]


def gamma_limit_study(
    offsets: Sequence, ctx: PrecisionContext = DEFAULT_CONTEXT, tol: Any = 1e-30
) -> GammaLimit:
    """Approach z = -1 from the right and extrapolate the left side to ε = 0."""
    if len(offsets) == 0:
        raise ValueError("gamma_limit_study needs at least one offset")
    eps = [ctx.convert(e) for e in offsets]
    for e in eps:
        if not 0 < e < 1:
            raise ValueError(f"offsets must lie in (0, 1), got {e}")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("offsets must be strictly decreasing")
    mp = ctx.mp
    estimates = []
    for e in eps:
        res = series_eval_conjecture(mp.mpc(-1 + e), ctx, tol)
        estimates.append(res.value.real)
    extrapolated = _neville_at_zero(eps, estimates)
    ref = euler_gamma(ctx)
    return GammaLimit(eps, estimates, extrapolated, ref, abs(extrapolated - ref))


def gamma_limit_record(study: GammaLimit, ctx: PrecisionContext, tol: Any) -> VerificationRecord:
    """Wrap a limit study as a record comparing the extrapolation with γ."""
    mp = ctx.mp
    rec = VerificationRecord(spec=ConjectureSpec(mp.mpc(-1)), tolerance=ctx.convert(tol))
    rec.closed_form = "euler_gamma"
    rec.closed_form_value = mp.mpc(study.reference)
    rec.comparisons.append(Comparison(
        "richardson", "euler_gamma", mp.mpc(study.extrapolated), mp.mpc(study.reference),
        study.reference_delta, mp.mpf(0), ctx.convert(tol)))
    for e, v in zip(study.offsets, study.estimates):
        rec.extra[f"estimate(eps={mp.nstr(e, 6)})"] = v
    rec.extra["extrapolated"] = study.extrapolated
    rec.extra["euler_gamma"] = study.reference
    return rec
