"""Three independent numerical routes to the double integrals.

``series``
    Expand 1/(1 - xy) = Σ_k (xy)^k and integrate each term in closed form.
    The first K terms are summed directly; the remainder of the series is
    summed by Euler–Maclaurin with a proved remainder bound, so the
    reported error bound is rigorous (up to a rounding allowance).
``reduce1d``
    Substituting u = xy collapses the weight-(1 - x) integral to
    ∫_0^1 (-ln u)^z (-ln u - (1 - u)) / (1 - u) du, integrated by tanh-sinh.
``quad2d``
    The literal double integral by a tensor-product tanh-sinh rule in
    float64. Slow and low precision; it shares nothing with the other two.

Both quadrature error bounds are the change between the last two
refinement levels, a heuristic and flagged as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Union

import numpy as np

from zetaint import quadrature
from zetaint.errors import ConvergenceError, DomainError
from zetaint.exact import MonomialSpec
from zetaint.precision import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    exprel,
    gamma,
    regularized_tail,
)

__all__ = [
    "ConjectureSpec",
    "IntegralSpec",
    "EvaluationResult",
    "METHODS",
    "series_eval",
    "series_eval_conjecture",
    "reduce_1d_eval",
    "quad_2d_eval",
    "evaluate",
    "SERIES_TERM_CAP",
    "QUAD_LEVEL_CAP",
]

SERIES_TERM_CAP = 10**7
QUAD_LEVEL_CAP = 12
QUAD2D_MIN_TOL = 1e-12
METHODS = ("series", "reduce1d", "quad2d")


@dataclass(frozen=True)
class ConjectureSpec:
    """Weight (1 - x) with the log raised to a complex power z."""

    z: Any

    def __post_init__(self) -> None:
        if not hasattr(self.z, "_mpc_"):
            raise TypeError("ConjectureSpec.z must be an mpmath complex; use ctx.complex()")
        if self.z.real <= -2:
            raise DomainError(f"need Re(z) > -2, got {self.z}")

    @property
    def sort_key(self) -> tuple:
        return (1, float(self.z.real), float(self.z.imag), self.label())

    def label(self, digits: int = 20) -> str:
        from zetaint.report import format_number

        return f"conjecture(z={format_number(self.z, digits)})"


IntegralSpec = Union[MonomialSpec, ConjectureSpec]


def spec_sort_key(spec: IntegralSpec) -> tuple:
    if isinstance(spec, MonomialSpec):
        return (0, spec.r, spec.s, spec.n, "")
    return spec.sort_key


@dataclass
class EvaluationResult:
    value: Any
    error_bound: Any
    method: str
    effort: int
    precision_bits: int
    rigorous: bool = False
    details: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")


def _rounding_allowance(magnitude: Any, ops: int, mp: Any) -> Any:
    # crude but safe: every operation may add one ulp of the running magnitude
    return magnitude * (ops + 1) * mp.ldexp(1, 1 - mp.prec)


def _tail_target(tol: Any, scale: Any, ctx: PrecisionContext) -> Any:
    mp = ctx.mp
    floor = mp.ldexp(1, -ctx.total_bits)
    return max(mp.mpf(tol) / (4 * max(abs(scale), 1)), floor)


def _power_tail(w: Any, start: int, target: Any, mp: Any) -> tuple[Any, Any] | None:
    """(Σ_{k>=start} k^-w - start^(1-w)/(w-1), bound) or None if start too small."""
    t = regularized_tail(w, start, target, mp)
    if t is None:
        return None
    return t.value, t.bound


def _pole_gap(w: Any, a: int, b: int, mp: Any) -> Any:
    # (a^(1-w) - b^(1-w)) / (w - 1), equal to ln(b/a) at w = 1
    if w == 1:
        return mp.log(mp.mpf(b) / a)
    return (mp.power(a, 1 - w) - mp.power(b, 1 - w)) / (w - 1)


def _monomial_term(k: int, spec: MonomialSpec, binom_fact: list, mp: Any) -> Any:
    # ∫∫ ln^n(xy) x^(k+r) y^(k+s): expand (ln x + ln y)^n binomially and use
    # ∫_0^1 x^a ln^j x dx = (-1)^j j! / (a+1)^(j+1)
    n = spec.n
    a = mp.mpf(k + spec.r + 1)
    b = mp.mpf(k + spec.s + 1)
    total = mp.mpf(0)
    for j in range(n + 1):
        total += binom_fact[j] / (mp.power(a, j + 1) * mp.power(b, n - j + 1))
    return -total if n % 2 else total


def _monomial_tail(spec: MonomialSpec, cutoff: int, target: Any, mp: Any):
    """Σ_{k>=cutoff} of the series terms, with a rigorous bound.

    Summing the binomial expansion over j gives each term as
    C[(k+lo+1)^-w - (k+hi+1)^-w] (or C (k+r+1)^-w when r == s), a
    combination of single powers whose tails go through Euler–Maclaurin.
    Every term is completely monotone in k, which the remainder bound uses.
    """
    n = spec.n
    sign = -1 if n % 2 else 1
    lo, hi = sorted((spec.r, spec.s))
    if lo == hi:
        c = mp.mpf(sign * math.factorial(n + 1))
        w = n + 2
        a = cutoff + lo + 1
        t = _power_tail(mp.mpf(w), a, target / abs(c), mp)
        if t is None:
            return None
        value = c * (t[0] + mp.power(a, 1 - w) / (w - 1))
        return value, abs(c) * t[1]
    c = mp.mpf(sign * math.factorial(n)) / (hi - lo)
    w = mp.mpf(n + 1)
    a, b = cutoff + lo + 1, cutoff + hi + 1
    ta = _power_tail(w, a, target / (2 * abs(c)), mp)
    tb = _power_tail(w, b, target / (2 * abs(c)), mp)
    if ta is None or tb is None:
        return None
    value = c * (ta[0] - tb[0] + _pole_gap(w, a, b, mp))
    return value, abs(c) * (ta[1] + tb[1])


def series_eval(
    spec: MonomialSpec, ctx: PrecisionContext = DEFAULT_CONTEXT, tol: Any = 1e-30
) -> EvaluationResult:
    """Series value of ∫∫ ln^n(xy)/(1-xy) x^r y^s with a rigorous bound."""
    if not isinstance(spec, MonomialSpec):
        raise TypeError("series_eval takes a MonomialSpec; see series_eval_conjecture")
    if not tol > 0:
        raise ValueError("tol must be positive")
    mp = ctx.mp
    n = spec.n
    binom_fact = [mp.mpf(math.comb(n, j) * math.factorial(j) * math.factorial(n - j))
                  for j in range(n + 1)]
    scale = mp.mpf(math.factorial(n + 1))
    target = _tail_target(tol, scale, ctx)

    head = mp.mpf(0)
    head_abs = mp.mpf(0)
    k = 0
    cutoff = 16
    while True:
        while k < cutoff:
            term = _monomial_term(k, spec, binom_fact, mp)
            head += term
            head_abs += abs(term)
            k += 1
        tail = _monomial_tail(spec, cutoff, target, mp)
        if tail is not None:
            break
        cutoff *= 2
        if cutoff > SERIES_TERM_CAP:
            raise ConvergenceError(f"series for {spec.label()} exceeded {SERIES_TERM_CAP} terms")
    value = head + tail[0]
    bound = tail[1] + _rounding_allowance(head_abs + abs(tail[0]), 4 * (n + 2), mp)
    return EvaluationResult(
        value=ctx.round(mp.mpc(value)),
        error_bound=bound + abs(value) * ctx.eps,
        method="series",
        effort=cutoff,
        precision_bits=ctx.working_bits,
        rigorous=True,
        details={"tail_bound": tail[1]},
    )


def _as_z(z: Any, ctx: PrecisionContext) -> Any:
    if isinstance(z, ConjectureSpec):
        z = z.z
    z = ctx.mp.mpc(ctx.convert(z))
    if z.real <= -2:
        raise DomainError(f"need Re(z) > -2, got {z}")
    return z


def _maybe_real(z: Any, mp: Any) -> Any:
    return mp.mpf(z.real) if z.imag == 0 else z


def series_eval_conjecture(
    z: Any, ctx: PrecisionContext = DEFAULT_CONTEXT, tol: Any = 1e-30
) -> EvaluationResult:
    """Series value of ∫∫ (-ln xy)^z (1-x)/(1-xy) for Re(z) > -2.

    Term k is ∫_0^∞ t^z e^{-(k+1)t} (t - 1 + e^{-t}) dt, i.e.
    Γ(z+2) [(k+1)^-(z+2) - ((k+1)^-(z+1) - (k+2)^-(z+1)) / (z+1)].
    The bracket is evaluated as (k+1)^-(z+1) · L · exprel(-(z+1) L) with
    L = ln((k+2)/(k+1)), which is smooth through z = -1. The terms after
    index K telescope into Γ(z+2) T(z+2, K+1), the regularised power tail.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    mp = ctx.mp
    z = _as_z(z, ctx)
    w = _maybe_real(z + 2, mp)
    wm1 = w - 1
    gw = gamma(z + 2, ctx)
    scale = abs(gw)
    target = _tail_target(tol, scale, ctx)

    head = mp.mpf(0)
    head_abs = mp.mpf(0)
    k = 0
    cutoff = 8 + int(abs(z.imag))
    while True:
        while k < cutoff:
            m = mp.mpf(k + 1)
            lg = mp.log1p(1 / m)
            p = mp.power(m, -w)
            term = p - p * m * lg * exprel(-wm1 * lg, mp)
            head += term
            head_abs += abs(p)
            k += 1
        tail = _power_tail(w, cutoff + 1, target / scale, mp)
        if tail is not None:
            break
        cutoff *= 2
        if cutoff > SERIES_TERM_CAP:
            raise ConvergenceError(f"conjecture series at z={z} exceeded {SERIES_TERM_CAP} terms")
    value = gw * (head + tail[0])
    # the two halves of each term cancel to O(1/k), costing log2(k) bits
    ops = 12 * cutoff
    bound = scale * (tail[1] + _rounding_allowance(head_abs + abs(tail[0]), ops, mp))
    return EvaluationResult(
        value=ctx.round(mp.mpc(value)),
        error_bound=bound + abs(value) * ctx.eps,
        method="series",
        effort=cutoff,
        precision_bits=ctx.working_bits,
        rigorous=True,
        details={"tail_bound": scale * tail[1]},
    )


# ---------------------------------------------------------------------------
# quadrature


def _reduced_factor(nlx: Any, comp: Any, mp: Any) -> Any:
    """(-ln u - (1 - u)) / (1 - u), Taylor-expanded when 1 - u is small."""
    if mp.mag(comp) > -16:
        return (nlx - comp) / comp
    # -ln u = Σ v^k/k  =>  factor = Σ_{k>=2} v^(k-1)/k
    total = mp.mpf(0)
    power = mp.mpf(1)
    tiny = mp.ldexp(1, -mp.prec - 2)
    k = 2
    while True:
        power *= comp
        term = power / k
        total += term
        if term < tiny * total:
            return total
        k += 1


def reduce_1d_eval(
    z: Any, ctx: PrecisionContext = DEFAULT_CONTEXT, tol: Any = 1e-20
) -> EvaluationResult:
    """Tanh-sinh value of ∫_0^1 (-ln u)^z (-ln u - (1-u)) / (1-u) du."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    mp = ctx.mp
    z = _as_z(z, ctx)
    zz = _maybe_real(z, mp)
    bits = ctx.total_bits
    sums: list = []
    nodes_used = 0

    def level_sum(level: int) -> Any:
        nonlocal nodes_used
        nodes = quadrature.mp_nodes(level, bits)
        acc = sums[-1] if sums else mp.mpf(0)
        for nlx, comp, wt in zip(nodes.neg_log, nodes.comp, nodes.weight):
            acc += wt * mp.power(nlx, zz) * _reduced_factor(nlx, comp, mp)
        nodes_used += len(nodes.x)
        sums.append(acc)
        return acc

    try:
        est, diff, level = quadrature.refine(level_sum, float(tol), max_level=QUAD_LEVEL_CAP)
    except RuntimeError as exc:
        raise ConvergenceError(f"reduce1d at z={z}: {exc}") from None
    value = mp.mpc(est)
    return EvaluationResult(
        value=ctx.round(value),
        error_bound=mp.mpf(diff) + abs(value) * ctx.eps,
        method="reduce1d",
        effort=nodes_used,
        precision_bits=ctx.working_bits,
        rigorous=False,
        details={"level": level},
    )


def _integrand_2d(spec: IntegralSpec, xi, ci, li, xj, cj, lj):
    """Integrand on the outer product of node sets i (x) and j (y).

    ln x, 1 - x come straight from the node tables; 1 - xy is formed as
    (1 - x) + x (1 - y) so it never cancels near the corner (1, 1).
    """
    x, cx, lx = xi[:, None], ci[:, None], li[:, None]
    y, cy, ly = xj[None, :], cj[None, :], lj[None, :]
    one_minus_xy = cx + x * cy
    nl = lx + ly  # -ln(xy) > 0
    if isinstance(spec, MonomialSpec):
        out = (-nl) ** spec.n / one_minus_xy
        if spec.r:
            out = out * x**spec.r
        if spec.s:
            out = out * y**spec.s
        return out
    return np.exp(spec.z_np * np.log(nl)) * cx / one_minus_xy


def _block_sum(spec, a, wa, b, wb, chunk: int = 512) -> complex:
    total = 0j
    xa, ca, la = a
    xb, cb, lb = b
    for i in range(0, len(xa), chunk):
        sl = slice(i, i + chunk)
        vals = _integrand_2d(spec, xa[sl], ca[sl], la[sl], xb, cb, lb)
        total += complex(wa[sl] @ vals @ wb)
    return total


def quad_2d_eval(
    spec: IntegralSpec, ctx: PrecisionContext = DEFAULT_CONTEXT, tol: float = 1e-9,
    *, max_level: int = QUAD_LEVEL_CAP,
) -> EvaluationResult:
    """Tensor-product tanh-sinh over the open unit square, in float64.

    Nodes never touch the boundary, so neither the corner where xy = 1 nor
    the edges where xy = 0 are sampled.
    """
    tol = float(tol)
    if tol < QUAD2D_MIN_TOL:
        raise ValueError(f"quad_2d_eval supports tol >= {QUAD2D_MIN_TOL}, got {tol}")
    if isinstance(spec, ConjectureSpec):
        integrand_spec = _ConjView(complex(spec.z))
    elif isinstance(spec, MonomialSpec):
        integrand_spec = spec
    else:
        raise TypeError(f"unsupported spec {spec!r}")

    old = [np.empty(0)] * 4
    raw = [0j]
    evaluations = 0

    def level_sum(level: int) -> complex:
        nonlocal old, evaluations
        x, c, nl, w = quadrature.np_nodes(level)
        new = (x, c, nl)
        prev = tuple(old[:3])
        total = raw[-1]
        total += _block_sum(integrand_spec, new, w, new, w)
        if len(old[0]):
            total += _block_sum(integrand_spec, new, w, prev, old[3])
            total += _block_sum(integrand_spec, prev, old[3], new, w)
        n_old, n_new = len(old[0]), len(x)
        evaluations += n_new * n_new + 2 * n_new * n_old
        old = [np.concatenate((o, v)) for o, v in zip(old, (x, c, nl, w))]
        raw.append(total)
        return total

    def scaled(level: int) -> complex:
        # the 2-D rule carries h^2; refine() multiplies by one h
        return level_sum(level) * 2.0**-level

    try:
        est, diff, level = quadrature.refine(scaled, tol, max_level=max_level)
    except RuntimeError as exc:
        raise ConvergenceError(f"quad2d for {spec}: {exc}") from None
    mp = ctx.mp
    value = mp.mpc(est.real, est.imag)
    # float64 accumulation floor
    floor = 64 * 2.0**-52 * abs(est)
    return EvaluationResult(
        value=value,
        error_bound=mp.mpf(diff + floor),
        method="quad2d",
        effort=evaluations,
        precision_bits=53,
        rigorous=False,
        details={"level": level},
    )


class _ConjView:
    """Adapter giving the 2-D integrand the complex exponent as a Python complex."""

    __slots__ = ("z_np",)

    def __init__(self, z_np: complex):
        self.z_np = z_np


def evaluate(spec: IntegralSpec, method: str, ctx: PrecisionContext = DEFAULT_CONTEXT,
             tol: Any = None) -> EvaluationResult:
    """Dispatch a spec to one of the three methods."""
    if method == "series":
        if isinstance(spec, MonomialSpec):
            return series_eval(spec, ctx, tol or 1e-30)
        return series_eval_conjecture(spec.z, ctx, tol or 1e-30)
    if method == "reduce1d":
        if not isinstance(spec, ConjectureSpec):
            raise DomainError("reduce1d applies to the (1 - x) weight only")
        return reduce_1d_eval(spec.z, ctx, tol or 1e-20)
    if method == "quad2d":
        return quad_2d_eval(spec, ctx, tol or 1e-9)
    raise ValueError(f"unknown method {method!r}")
