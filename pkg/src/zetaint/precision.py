"""Arbitrary-precision kernels: Bernoulli numbers, Γ, ζ and γ.

Numbers are mpmath values living in a private :class:`mpmath.MPContext`
owned by a :class:`PrecisionContext`. The global ``mpmath.mp`` precision is
never read or modified, so kernels can run side by side at different
precisions.

ζ(s) is computed by Euler–Maclaurin summation::

    ζ(s) = Σ_{k<N} k^-s + N^(1-s)/(s-1) + T(s, N)

where the regularised tail

    T(s, N) = N^-s/2 + Σ_{j=1}^{M} B_2j/(2j)! (s)_(2j-1) N^(-s-2j+1) + R

has no pole at s = 1. The remainder obeys

    |R| <= |B_(2M+2)|/(2M+2)! |(s)_(2M+1)| N^(-σ-2M-1) (1 + |s+2M+1|/(σ+2M+1))

with σ = Re(s) > 0, which follows from |B̃_2m(x)| <= |B_2m| after one
extra integration by parts.
"""

from __future__ import annotations

import copyreg
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, NamedTuple

import mpmath
from mpmath.libmp import mpf_pos, round_nearest

from zetaint.errors import ConvergenceError, DomainError, PoleError
from zetaint.exact import ZetaLinearForm

__all__ = [
    "PrecisionContext",
    "DEFAULT_CONTEXT",
    "POLE_GUARD",
    "bernoulli",
    "exprel",
    "gamma",
    "zeta",
    "zeta_minus_pole",
    "euler_gamma",
    "eval_form",
    "regularized_tail",
    "TailSum",
]

POLE_GUARD = 2.0**-8
_MAX_N = 10**7


def _rebuild_mpf(bits: int, raw: tuple) -> Any:
    return _mp_context(bits).make_mpf(raw)


def _rebuild_mpc(bits: int, raw: tuple) -> Any:
    return _mp_context(bits).make_mpc(raw)


@lru_cache(maxsize=None)
def _mp_context(bits: int) -> mpmath.MPContext:
    mp = mpmath.MPContext()
    mp.prec = bits
    # each context has its own mpf/mpc classes, which the default pickler
    # cannot locate; values cross process boundaries in the harness
    copyreg.pickle(mp.mpf, lambda x: (_rebuild_mpf, (bits, x._mpf_)))
    copyreg.pickle(mp.mpc, lambda x: (_rebuild_mpc, (bits, x._mpc_)))
    return mp


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision plus guard bits carried inside every kernel."""

    working_bits: int = 256
    guard_bits: int = 32

    def __post_init__(self) -> None:
        if self.working_bits < 64:
            raise ValueError(f"working_bits must be >= 64, got {self.working_bits}")
        if self.guard_bits < 0:
            raise ValueError(f"guard_bits must be >= 0, got {self.guard_bits}")

    @property
    def total_bits(self) -> int:
        return self.working_bits + self.guard_bits

    @property
    def mp(self) -> mpmath.MPContext:
        return _mp_context(self.total_bits)

    @property
    def eps(self) -> Any:
        """Unit roundoff of the working precision, 2^-working_bits."""
        return self.mp.ldexp(1, -self.working_bits)

    @property
    def digits(self) -> int:
        """Decimal digits that the working precision supports."""
        return int(self.working_bits * math.log10(2))

    def convert(self, x: Any) -> Any:
        """Bring ``x`` (number, decimal string, Fraction) into this context."""
        mp = self.mp
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / x.denominator
        if hasattr(x, "_mpf_"):
            return mp.make_mpf(x._mpf_)
        if hasattr(x, "_mpc_"):
            return mp.make_mpc(x._mpc_)
        if isinstance(x, complex):
            return mp.mpc(x)
        return mp.mpf(x)

    def complex(self, re: Any, im: Any = 0) -> Any:
        """Complex number from two parts, each parsed at full precision."""
        return self.mp.mpc(self.convert(re), self.convert(im))

    def round(self, x: Any) -> Any:
        """Round a value once to ``working_bits``."""
        p = self.working_bits
        if hasattr(x, "_mpc_"):
            re, im = x._mpc_
            return self.mp.make_mpc(
                (mpf_pos(re, p, round_nearest), mpf_pos(im, p, round_nearest))
            )
        x = self.convert(x)
        return self.mp.make_mpf(mpf_pos(x._mpf_, p, round_nearest))


DEFAULT_CONTEXT = PrecisionContext()


# --------------------------------------------------------------------------
# Bernoulli numbers

_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1)]


def _extend_bernoulli(k: int) -> None:
    # Σ_{j=0}^{m} C(m+1, j) B_j = 0  (convention B_1 = -1/2)
    with _bern_lock:
        for m in range(len(_bern), k + 1):
            if m > 1 and m % 2 == 1:
                _bern.append(Fraction(0))
                continue
            acc = Fraction(0)
            binom = 1  # C(m+1, j)
            for j in range(m):
                acc += binom * _bern[j]
                binom = binom * (m + 1 - j) // (j + 1)
            _bern.append(-acc / (m + 1))


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number B_k (B_1 = -1/2)."""
    if isinstance(k, bool) or not isinstance(k, int):
        raise TypeError("k must be an int")
    if k < 0:
        raise DomainError(f"bernoulli index must be >= 0, got {k}")
    if k > 1 and k % 2 == 1:
        raise DomainError(f"B_{k} is zero for odd k > 1; do not request it")
    if k >= len(_bern):
        _extend_bernoulli(k)
    return _bern[k]


_coef_lock = threading.Lock()
_coef_cache: dict[int, list] = {}


def _em_coefficients(count: int, bits: int) -> list:
    """B_2j / (2j)! for j = 1..count, rounded at ``bits``.

    The per-precision list only ever grows; readers see a complete prefix.
    """
    table = _coef_cache.get(bits)
    if table is not None and len(table) >= count:
        return table
    with _coef_lock:
        table = list(_coef_cache.get(bits, ()))
        mp = _mp_context(bits)
        j = len(table)
        fact = math.factorial(2 * j)
        while j < count:
            j += 1
            fact *= (2 * j - 1) * (2 * j)
            b = bernoulli(2 * j)
            table.append(mp.mpf(b.numerator) / (b.denominator * fact))
        _coef_cache[bits] = table
    return table


# --------------------------------------------------------------------------
# elementary helpers


def exprel(x: Any, mp: mpmath.MPContext) -> Any:
    """(e^x - 1)/x, continuous through x = 0 and free of cancellation."""
    if mp.mag(x) < -1:  # |x| < 1/2: power series
        term = mp.mpf(1)
        total = mp.mpf(1)
        k = 1
        tiny = mp.ldexp(1, -mp.prec - 4)
        while True:
            term = term * x / (k + 1)
            total += term
            if abs(term) < tiny:
                return total
            k += 1
    return mp.expm1(x) / x


def _is_real(x: Any) -> bool:
    return not hasattr(x, "_mpc_") or x.imag == 0


class TailSum(NamedTuple):
    value: Any
    bound: Any
    terms: int


def regularized_tail(w: Any, start: int, target: Any, mp: mpmath.MPContext) -> TailSum | None:
    """Σ_{k>=start} k^-w - start^(1-w)/(w-1) by Euler–Maclaurin.

    Valid for Re(w) > 0, including w = 1. Returns ``None`` when the
    asymptotic terms start growing before ``target`` is met; the caller
    should move ``start`` further out.
    """
    sigma = mp.re(w)
    if sigma <= 0:
        raise DomainError("regularized_tail needs Re(w) > 0")
    n = mp.mpf(start)
    n_w = mp.power(n, -w)
    inv_n2 = 1 / (n * n)
    total = n_w / 2
    poch = w  # (w)_(2j-1)
    power = n_w / n  # N^(-w-2j+1)
    mag_power = mp.power(n, -sigma - 1)
    prev_bound = None
    max_terms = 2 * mp.prec
    coeffs = _em_coefficients(min(max_terms, 64), mp.prec)
    for j in range(1, max_terms + 1):
        if j > len(coeffs):
            coeffs = _em_coefficients(2 * len(coeffs), mp.prec)
        # bound for stopping after j-1 corrections uses index j
        next_poch = poch * (w + 2 * j - 1)  # (w)_(2j)
        bound = (
            abs(coeffs[j - 1] * poch) * mag_power
            * (1 + abs(w + 2 * j - 1) / (sigma + 2 * j - 1))
        )
        if bound < target:
            return TailSum(total, bound, j - 1)
        if prev_bound is not None and bound > prev_bound:
            return None
        prev_bound = bound
        total += coeffs[j - 1] * poch * power
        poch = next_poch * (w + 2 * j)  # (w)_(2j+1)
        power *= inv_n2
        mag_power *= inv_n2
    return None


def _power_head(s: Any, upto: int, mp: mpmath.MPContext) -> Any:
    # Σ_{k=1}^{upto-1} k^-s
    total = mp.mpf(0)
    neg = -s
    for k in range(1, upto):
        total += mp.power(k, neg)
    return total


def _zeta_parts(s: Any, ctx: PrecisionContext) -> tuple[Any, int, TailSum]:
    """Head sum, cutoff N and regularised tail for ζ(s)."""
    mp = ctx.mp
    target = mp.ldexp(1, -(ctx.working_bits + 8))
    n = max(16, ctx.working_bits // 6 + int(abs(mp.im(s))))
    while n <= _MAX_N:
        tail = regularized_tail(s, n, target, mp)
        if tail is not None:
            return _power_head(s, n, mp), n, tail
        n *= 2
    raise ConvergenceError(f"zeta({s}): cutoff exceeded {_MAX_N}")


def _check_zeta_domain(s: Any, ctx: PrecisionContext) -> Any:
    s = ctx.convert(s)
    if ctx.mp.re(s) <= 0:
        raise DomainError(f"zeta is only implemented for Re(s) > 0, got {s}")
    return s


def zeta(s: Any, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Any:
    """Riemann zeta for Re(s) > 0, away from the pole.

    Raises :class:`PoleError` for |s - 1| <= 2^-8; use
    :func:`zeta_minus_pole` near s = 1.
    """
    s = _check_zeta_domain(s, ctx)
    mp = ctx.mp
    if abs(s - 1) <= POLE_GUARD:
        raise PoleError(f"|s - 1| <= 2^-8 (s = {s}); use zeta_minus_pole")
    head, n, tail = _zeta_parts(s, ctx)
    value = head + mp.power(n, 1 - s) / (s - 1) + tail.value
    return ctx.round(mp.mpc(value))


def zeta_minus_pole(s: Any, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Any:
    """ζ(s) - 1/(s-1), analytic at s = 1 where it equals γ.

    The pole is removed inside the Euler–Maclaurin formula:
    (N^(1-s) - 1)/(s-1) = -ln N · exprel(-(s-1) ln N).
    """
    s = _check_zeta_domain(s, ctx)
    mp = ctx.mp
    head, n, tail = _zeta_parts(s, ctx)
    log_n = mp.log(n)
    bridge = -log_n * exprel(-(s - 1) * log_n, mp)
    return ctx.round(mp.mpc(head + bridge + tail.value))


def euler_gamma(ctx: PrecisionContext = DEFAULT_CONTEXT) -> Any:
    """Euler's constant, computed as ζ(s) - 1/(s-1) at s = 1."""
    return zeta_minus_pole(1, ctx).real


def gamma(z: Any, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Any:
    """Γ(z) for complex z off the non-positive integers."""
    z = ctx.convert(z)
    mp = ctx.mp
    if _is_real(z):
        x = mp.re(z)
        if x <= 0 and x == mp.floor(x):
            raise PoleError(f"Gamma has a pole at {x}")
    return ctx.round(mp.mpc(mp.gamma(z)))


def eval_form(form: ZetaLinearForm, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Any:
    """Numeric value of ``constant + zeta_coeff * ζ(zeta_arg)``."""
    mp = ctx.mp
    value = ctx.convert(form.constant)
    if form.zeta_coeff:
        head, n, tail = _zeta_parts(mp.mpf(form.zeta_arg), ctx)
        z = head + mp.power(n, 1 - form.zeta_arg) / (form.zeta_arg - 1) + tail.value
        value += ctx.convert(form.zeta_coeff) * z
    return ctx.round(mp.mpc(value))
