"""Exact closed forms for the monomial-weight double integrals.

Everything here is integer/rational arithmetic; nothing is ever rounded.
Rationals are plain :class:`fractions.Fraction` values, which are always
stored in lowest terms with a positive denominator.

For ``r > s`` the integral

    I(r, s, n) = ∫∫ ln^n(xy) / (1 - xy) · x^r y^s  dx dy   over (0, 1)^2

is the rational number  n! (-1)^n / (r - s) · Σ_{k=s+1}^{r} k^{-(n+1)}.
For ``r == s`` it is  (n+1)! (-1)^n (ζ(n+2) - Σ_{k=1}^{r} k^{-(n+2)}),
which is represented exactly as a :class:`ZetaLinearForm`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from zetaint.errors import DomainError

__all__ = [
    "Rational",
    "ZetaLinearForm",
    "MonomialSpec",
    "Divisibility",
    "lcm_upto",
    "theorem1a_value",
    "divisibility_check",
    "theorem1b_form",
    "corollary_form",
    "corollary_from_theorem1",
    "monomial_closed_form",
]

Rational = Fraction


def _check_nonneg_int(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")
    if value < 0:
        raise DomainError(f"{name} must be non-negative, got {value}")


@dataclass(frozen=True, order=True)
class MonomialSpec:
    """Exponents of the weight ``x^r y^s`` and the log power ``n``."""

    r: int
    s: int
    n: int

    def __post_init__(self) -> None:
        _check_nonneg_int("r", self.r)
        _check_nonneg_int("s", self.s)
        _check_nonneg_int("n", self.n)

    def canonical(self) -> tuple[MonomialSpec, bool]:
        """Return the spec with ``r >= s`` and whether a swap was needed.

        The integral is symmetric in (x, y), so swapping the exponents does
        not change its value.
        """
        if self.r >= self.s:
            return self, False
        return MonomialSpec(self.s, self.r, self.n), True

    def label(self) -> str:
        return f"monomial(r={self.r},s={self.s},n={self.n})"


@dataclass(frozen=True)
class ZetaLinearForm:
    """The exact number ``constant + zeta_coeff * ζ(zeta_arg)``."""

    constant: Fraction
    zeta_coeff: Fraction
    zeta_arg: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "constant", Fraction(self.constant))
        object.__setattr__(self, "zeta_coeff", Fraction(self.zeta_coeff))
        if isinstance(self.zeta_arg, bool) or not isinstance(self.zeta_arg, int):
            raise TypeError("zeta_arg must be an int")
        if self.zeta_arg < 2:
            raise DomainError(f"zeta_arg must be >= 2, got {self.zeta_arg}")

    @property
    def is_rational(self) -> bool:
        return self.zeta_coeff == 0

    def _coerce(self, other: object) -> ZetaLinearForm | None:
        if isinstance(other, ZetaLinearForm):
            return other
        if isinstance(other, (int, Fraction)):
            return ZetaLinearForm(Fraction(other), Fraction(0), self.zeta_arg)
        return None

    def __add__(self, other: object) -> ZetaLinearForm:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.zeta_arg != self.zeta_arg:
            # a purely rational operand carries no real zeta argument
            if o.is_rational:
                o = ZetaLinearForm(o.constant, 0, self.zeta_arg)
            elif self.is_rational:
                return o + self
            else:
                raise ValueError(
                    f"cannot add forms in ζ({self.zeta_arg}) and ζ({o.zeta_arg})"
                )
        return ZetaLinearForm(
            self.constant + o.constant, self.zeta_coeff + o.zeta_coeff, self.zeta_arg
        )

    __radd__ = __add__

    def __neg__(self) -> ZetaLinearForm:
        return ZetaLinearForm(-self.constant, -self.zeta_coeff, self.zeta_arg)

    def __sub__(self, other: object) -> ZetaLinearForm:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> ZetaLinearForm:
        return (-self) + other

    def __mul__(self, other: object) -> ZetaLinearForm:
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        c = Fraction(other)
        return ZetaLinearForm(self.constant * c, self.zeta_coeff * c, self.zeta_arg)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.constant)
        coeff = self.zeta_coeff
        if coeff == 1:
            head = f"ζ({self.zeta_arg})"
        elif coeff == -1:
            head = f"-ζ({self.zeta_arg})"
        else:
            head = f"{coeff}·ζ({self.zeta_arg})"
        if self.constant == 0:
            return head
        sign = "-" if self.constant < 0 else "+"
        return f"{head} {sign} {abs(self.constant)}"


class Divisibility(NamedTuple):
    holds: bool
    denominator: int
    bound: int


@lru_cache(maxsize=None)
def lcm_upto(n: int) -> int:
    """Least common multiple of 1, 2, ..., n."""
    _check_nonneg_int("n", n)
    if n == 0:
        raise DomainError("lcm_upto is defined for n >= 1")
    if n == 1:
        return 1
    return math.lcm(lcm_upto(n - 1), n)


def _power_sum(lo: int, hi: int, p: int) -> Fraction:
    # Σ_{k=lo}^{hi} k^-p; empty when hi < lo
    return sum((Fraction(1, k**p) for k in range(lo, hi + 1)), Fraction(0))


def theorem1a_value(spec: MonomialSpec) -> Fraction:
    """Exact value of the integral for unequal exponents.

    ``r < s`` is handled by swapping the exponents. Raises
    :class:`DomainError` when ``r == s``; use :func:`theorem1b_form` there.
    """
    if spec.r == spec.s:
        raise DomainError("r == s has a zeta-valued integral; use theorem1b_form")
    c, _ = spec.canonical()
    n = c.n
    scale = Fraction(math.factorial(n) * (-1) ** n, c.r - c.s)
    return scale * _power_sum(c.s + 1, c.r, n + 1)


def divisibility_check(spec: MonomialSpec) -> Divisibility:
    """Check that the reduced denominator divides ``lcm(1..r)^(n+2)``."""
    value = theorem1a_value(spec)
    c, _ = spec.canonical()
    bound = lcm_upto(c.r) ** (c.n + 2)
    den = value.denominator
    return Divisibility(bound % den == 0, den, bound)


def theorem1b_form(r: int, n: int) -> ZetaLinearForm:
    """Exact form of the integral for equal exponents ``r == s``."""
    _check_nonneg_int("r", r)
    _check_nonneg_int("n", n)
    c = math.factorial(n + 1) * (-1) ** n
    return ZetaLinearForm(-c * _power_sum(1, r, n + 2), Fraction(c), n + 2)


def corollary_form(n: int) -> ZetaLinearForm:
    """``Γ(n+2)[ζ(n+2) - 1/(n+1)]`` written as ``(n+1)! ζ(n+2) - n!``."""
    _check_nonneg_int("n", n)
    g = math.factorial(n + 1)
    return ZetaLinearForm(-Fraction(g, n + 1), Fraction(g), n + 2)


def corollary_from_theorem1(n: int) -> ZetaLinearForm:
    """The weight ``(1 - x)`` integral assembled from the two monomial cases.

    (-ln xy)^n (1 - x) = (-1)^n [ln^n(xy) · x^0 y^0 - ln^n(xy) · x^1 y^0].
    """
    _check_nonneg_int("n", n)
    sign = (-1) ** n
    return (theorem1b_form(0, n) - theorem1a_value(MonomialSpec(1, 0, n))) * sign


def monomial_closed_form(spec: MonomialSpec) -> Fraction | ZetaLinearForm:
    """Closed form for any monomial spec: a rational or a zeta form."""
    if spec.r == spec.s:
        return theorem1b_form(spec.r, spec.n)
    return theorem1a_value(spec)
