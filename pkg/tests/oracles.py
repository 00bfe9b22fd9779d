"""Independent reference computations used only by the tests.

None of these import zetaint; each uses a different algorithm from the
code path it checks.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import factorial, gcd

import mpmath


def lcm_brute(n: int) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), range(1, n + 1), 1)


def bernoulli_akiyama_tanigawa(n: int) -> Fraction:
    """B_n via the Akiyama–Tanigawa triangle (gives B_1 = +1/2)."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def zeta_eta_borwein(s, prec: int, n: int = 200):
    """ζ(s) from the alternating eta series with Borwein's acceleration.

    ζ(s) = -1/(d_n (1 - 2^(1-s))) Σ_{k<n} (-1)^k (d_k - d_n)/(k+1)^s,
    d_k = n Σ_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!).
    """
    ctx = mpmath.MPContext()
    ctx.prec = prec
    s = ctx.mpc(s)
    d = []
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction(factorial(n + i - 1) * 4**i, factorial(n - i) * factorial(2 * i))
        d.append(n * acc)
    dn = d[n]
    total = ctx.mpc(0)
    for k in range(n):
        c = d[k] - dn
        term = (ctx.mpf(c.numerator) / c.denominator) / ctx.power(k + 1, s)
        total += -term if k % 2 else term
    return -total / ((ctx.mpf(dn.numerator) / dn.denominator) * (1 - ctx.power(2, 1 - s)))


def zeta_dirichlet_with_bound(s, terms: int, prec: int = 200):
    """Partial Dirichlet sum and an integral bound on the omitted tail (Re s > 1)."""
    ctx = mpmath.MPContext()
    ctx.prec = prec
    s = ctx.mpc(s)
    sigma = s.real
    partial = sum((ctx.power(k, -s) for k in range(1, terms + 1)), ctx.mpc(0))
    # Σ_{k>N} k^-σ <= ∫_N^∞ x^-σ dx
    bound = ctx.power(terms, 1 - sigma) / (sigma - 1)
    return partial, bound


def _neville_at_zero(xs, ys):
    p = list(ys)
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i])
    return p[0]


def euler_gamma_harmonic(prec: int = 160, m0: int = 16, levels: int = 14):
    """γ = lim (H_m - ln m), by brute-force harmonic sums at m = m0 2^j and
    Richardson (polynomial) extrapolation in 1/m."""
    ctx = mpmath.MPContext()
    ctx.prec = prec
    h = ctx.mpf(0)
    k = 0
    xs, ys = [], []
    for j in range(levels):
        m = m0 * 2**j
        while k < m:
            k += 1
            h += ctx.mpf(1) / k
        xs.append(ctx.mpf(1) / m)
        ys.append(h - ctx.log(m))
    return _neville_at_zero(xs, ys)


def monomial_quad_mpmath(r: int, s: int, n: int, dps: int = 20):
    """The double integral via mpmath's own 2-D quadrature."""
    ctx = mpmath.MPContext()
    ctx.dps = dps

    def f(x, y):
        return ctx.log(x * y) ** n / (1 - x * y) * x**r * y**s

    return ctx.quad(f, [0, 1], [0, 1])


def conjecture_lhs_mpmath(z, dps: int = 30):
    """∫_0^∞ t^z (t - 1 + e^-t)/(e^t - 1) dt via mpmath.quad.

    This is the u = e^-t form of ∫_0^1 (-ln u)^z (-ln u - 1 + u)/(1 - u) du.
    The numerator is taken from its Taylor series for small t, where the
    direct form cancels.
    """
    ctx = mpmath.MPContext()
    ctx.dps = dps
    z = ctx.mpc(z)
    small = ctx.mpf("1e-3")

    def f(t):
        if t < small:
            num = sum((-1) ** k * t**k / factorial(k) for k in range(2, 14))
        else:
            num = t - 1 + ctx.exp(-t)
        return ctx.power(t, z) * num / ctx.expm1(t)

    return ctx.quad(f, [0, 1, ctx.inf])


def conjecture_rhs_mpmath(z, dps: int = 30):
    """Γ(z+2)(ζ(z+2) - 1/(z+1)) using mpmath's own zeta and gamma."""
    ctx = mpmath.MPContext()
    ctx.dps = dps
    z = ctx.mpc(z)
    return ctx.gamma(z + 2) * (ctx.zeta(z + 2) - 1 / (z + 1))
