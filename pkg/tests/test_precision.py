import pickle
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import mpmath
import pytest

from oracles import (
    bernoulli_akiyama_tanigawa,
    euler_gamma_harmonic,
    zeta_dirichlet_with_bound,
    zeta_eta_borwein,
)
from zetaint.errors import DomainError, PoleError
from zetaint.exact import ZetaLinearForm
from zetaint.precision import (
    PrecisionContext,
    bernoulli,
    eval_form,
    euler_gamma,
    exprel,
    gamma,
    zeta,
    zeta_minus_pole,
)


def close(a, b, tol):
    return abs(a - b) <= tol


# -- context ---------------------------------------------------------------


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(63)
    with pytest.raises(ValueError):
        PrecisionContext(128, -1)
    assert PrecisionContext().total_bits == 288


def test_convert_parses_decimal_once(ctx):
    x = ctx.convert("-1.9")
    assert x == ctx.mp.mpf(-19) / 10
    assert x != ctx.convert(-1.9)  # the float literal is a different number


def test_context_does_not_touch_global_mpmath(ctx):
    before = mpmath.mp.prec
    zeta(3, ctx)
    PrecisionContext(512).mp.mpf(1)
    assert mpmath.mp.prec == before


def test_values_pickle_across_contexts(ctx):
    z = ctx.complex("0.25", "-3")
    back = pickle.loads(pickle.dumps(z))
    assert back == z and back.real == z.real
    assert type(back) is type(z)


def test_round_is_single_rounding(ctx):
    x = ctx.mp.mpf(1) / 3
    r = ctx.round(x)
    assert r == PrecisionContext(256, 0).mp.mpf(1) / 3
    assert abs(r - x) <= ctx.eps


# -- Bernoulli -------------------------------------------------------------


@pytest.mark.parametrize("k, expected", [(0, Fraction(1)), (2, Fraction(1, 6)), (4, Fraction(-1, 30))])
def test_bernoulli_examples(k, expected):
    assert bernoulli(k) == expected


def test_bernoulli_rejects_odd():
    with pytest.raises(DomainError):
        bernoulli(3)
    with pytest.raises(DomainError):
        bernoulli(-2)


def test_bernoulli_matches_independent_triangle():
    for k in range(0, 61, 2):
        assert bernoulli(k) == bernoulli_akiyama_tanigawa(k)


def test_bernoulli_satisfies_defining_recurrence():
    from math import comb

    def b(j):
        return Fraction(0) if j > 1 and j % 2 else bernoulli(j)

    for m in range(1, 50):
        assert sum(comb(m + 1, j) * b(j) for j in range(m + 1)) == 0


# -- Gamma -----------------------------------------------------------------


def test_gamma_examples(ctx):
    assert gamma(1, ctx) == 1
    assert gamma(5, ctx) == 24
    half = gamma("0.5", ctx)
    assert close(half * half, ctx.mp.pi, 4 * ctx.eps)
    assert close(half.real, ctx.mp.mpf("1.7724538509055160272981674833411451827975"), 1e-39)


@pytest.mark.parametrize("z", [0, -1, -7])
def test_gamma_poles(ctx, z):
    with pytest.raises(PoleError):
        gamma(z, ctx)


def test_gamma_recurrence_random_strip(ctx):
    rng = random.Random(1234)
    mp = ctx.mp
    tol = mp.ldexp(1, -ctx.working_bits + 4)
    for _ in range(40):
        z = ctx.complex(repr(rng.uniform(0.1, 10)), repr(rng.uniform(-10, 10)))
        g1 = gamma(z + 1, ctx)
        assert abs(g1 - z * gamma(z, ctx)) / abs(g1) < tol


# -- zeta ------------------------------------------------------------------


def test_zeta_examples(ctx):
    mp = ctx.mp
    assert close(zeta(2, ctx), mp.pi**2 / 6, 2 * ctx.eps)
    assert close(zeta(4, ctx), mp.pi**4 / 90, 2 * ctx.eps)
    z3 = zeta(3, ctx)
    partial, bound = zeta_dirichlet_with_bound(3, 20000)
    assert abs(z3 - partial) <= bound
    assert close(z3.real, mp.mpf("1.2020569031595942853997381615114499907649"), 1e-39)
    zh = zeta("0.5", ctx)
    assert close(zh, zeta_eta_borwein("0.5", 300), 2**-250)
    assert close(zh.real, mp.mpf("-1.4603545088095868128894991525152980125"), 1e-36)


def test_zeta_pole_guard_and_domain(ctx):
    with pytest.raises(PoleError):
        zeta(1, ctx)
    with pytest.raises(PoleError):
        zeta(ctx.complex("1.001", "0.001"), ctx)
    with pytest.raises(DomainError):
        zeta(0, ctx)
    with pytest.raises(DomainError):
        zeta_minus_pole("-0.5", ctx)
    zeta(ctx.complex("1.01"), ctx)  # just outside the guard


@pytest.mark.parametrize("sigma, t", [(2, 0), (2.5, 3), (4, -7), (2, 10)])
def test_zeta_within_dirichlet_tail_bound(ctx, sigma, t):
    s = ctx.complex(repr(sigma), repr(t))
    partial, bound = zeta_dirichlet_with_bound(s, 3000, prec=ctx.total_bits)
    assert abs(zeta(s, ctx) - partial) <= bound


def test_zeta_minus_pole_examples(ctx):
    mp = ctx.mp
    assert close(zeta_minus_pole(1, ctx).real, mp.mpf("0.5772156649015328606065120900824024310422"), 1e-39)
    assert close(zeta_minus_pole(2, ctx), zeta(2, ctx) - 1, 4 * ctx.eps)
    assert close(zeta_minus_pole(3, ctx), zeta(3, ctx) - mp.mpf("0.5"), 4 * ctx.eps)


def test_zeta_minus_pole_consistency(ctx):
    rng = random.Random(7)
    tol = ctx.mp.ldexp(1, -ctx.working_bits + 8)
    for _ in range(30):
        s = ctx.complex(repr(rng.uniform(0.1, 6)), repr(rng.uniform(-6, 6)))
        if abs(s - 1) < 0.25:
            continue
        assert abs(zeta_minus_pole(s, ctx) + 1 / (s - 1) - zeta(s, ctx)) < tol


def test_zeta_minus_pole_smooth_through_one(ctx):
    mp = ctx.mp
    g = zeta_minus_pole(1, ctx)
    for eps in ("1e-30", "-1e-30", "1e-60"):
        assert close(zeta_minus_pole(ctx.complex(1) + ctx.convert(eps), ctx), g, 1e-28)
    # slope at s = 1 is -γ_1 (first Stieltjes constant)
    h = mp.mpf("1e-20")
    slope = (zeta_minus_pole(1 + h, ctx) - zeta_minus_pole(1 - h, ctx)) / (2 * h)
    assert close(slope.real, -mp.stieltjes(1), 1e-30)


@pytest.mark.parametrize("seed", [11])
def test_eta_acceleration_agrees_with_euler_maclaurin(ctx, seed):
    rng = random.Random(seed)
    tol = ctx.mp.ldexp(1, -ctx.working_bits + 8)
    for _ in range(16):
        s = ctx.complex(repr(rng.uniform(0.1, 6)), repr(rng.uniform(-6, 6)))
        ref = zeta_eta_borwein(s, ctx.total_bits + 32, n=260)
        assert abs(zeta(s, ctx) - ref) <= tol * max(1, abs(ref))


# -- gamma constant / forms ------------------------------------------------


def test_euler_gamma_digits_and_oracle(ctx):
    g = euler_gamma(ctx)
    assert ctx.mp.nstr(g, 18, strip_zeros=False) == "0.577215664901532861"
    assert str(g).startswith("0.577215664901532860")
    assert abs(g - euler_gamma_harmonic()) < 1e-40
    assert g == zeta_minus_pole(1, ctx).real


def test_euler_gamma_precision_monotone():
    lo = euler_gamma(PrecisionContext(64))
    hi = euler_gamma(PrecisionContext(320))
    assert abs(lo - hi) < 2**-62


@pytest.mark.parametrize(
    "form, expected",
    [
        (ZetaLinearForm(0, 1, 2), "1.6449340668"),
        (ZetaLinearForm(-1, 1, 2), "0.6449340668"),
        (ZetaLinearForm(Fraction(9, 4), -2, 3), "-0.1541138063"),
    ],
)
def test_eval_form_examples(ctx, form, expected):
    v = eval_form(form, ctx)
    assert abs(v - ctx.convert(expected)) < 1e-10
    assert v.imag == 0


def test_exprel_small_and_large(ctx):
    mp = ctx.mp
    assert exprel(mp.mpf(0), mp) == 1
    for x in ("1e-40", "-0.3", "0.49", "2", "-5"):
        v = ctx.convert(x)
        assert close(exprel(v, mp), mp.expm1(v) / v, ctx.eps)


def test_kernels_thread_safe(ctx):
    points = [ctx.complex(str(1.5 + k / 7), str(k / 3)) for k in range(12)]
    serial = [zeta(s, ctx) for s in points]
    with ThreadPoolExecutor(4) as pool:
        threaded = list(pool.map(lambda s: zeta(s, ctx), points))
    assert serial == threaded
