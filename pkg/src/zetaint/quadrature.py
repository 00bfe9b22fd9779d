"""Tanh-sinh (double exponential) rules on the open interval (0, 1).

The map x = 1/(1 + exp(-π sinh t)) sends the real line onto (0, 1). Both
x and its complement 1 - x = 1/(1 + exp(π sinh t)) are produced directly,
so nodes crowd the endpoints without ever reaching them and without the
cancellation of computing 1 - x. The weight is dx/dt = π cosh t · x(1-x).

Level ``l`` uses step h = 2^-l. Level 0 holds every integer multiple of h;
higher levels add only the odd multiples, so a refinement reuses all of
the previous function values.

Two backends share the construction: mpmath (any precision, 1-D) and numpy
float64 (vectorised, used for the tensor-product 2-D rule).
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Any, Callable, NamedTuple

import numpy as np

from zetaint.precision import _mp_context

__all__ = ["MPNodes", "mp_nodes", "np_nodes", "mp_t_max", "NP_T_MAX"]

# float64 nodes stop once min(x, 1-x) would drop below ~1e-150, so that
# products of two nodes and singular factors stay inside double range
NP_T_MAX = math.asinh(150 * math.log(10) / math.pi)


def mp_t_max(bits: int) -> float:
    """Truncation point where min(x, 1-x) falls below 2^(-8*bits)."""
    return math.asinh(8 * bits * math.log(2) / math.pi)


class MPNodes(NamedTuple):
    x: tuple
    comp: tuple  # 1 - x
    neg_log: tuple  # -ln x
    weight: tuple  # dx/dt, without the step factor h


def _level_indices(level: int, t_max: float) -> range:
    kmax = int(t_max * 2**level)
    if level == 0:
        return range(-kmax, kmax + 1)
    return range(-kmax | 1, kmax + 1, 2)


@lru_cache(maxsize=128)
def mp_nodes(level: int, bits: int) -> MPNodes:
    """Nodes new at ``level``, computed at ``bits`` of precision.

    Cached per (level, bits); entries are immutable tuples.
    """
    mp = _mp_context(bits)
    h = mp.ldexp(1, -level)
    pi = mp.pi
    xs, cs, ls, ws = [], [], [], []
    for k in _level_indices(level, mp_t_max(bits)):
        t = k * h
        a = pi * mp.sinh(t)
        e_neg = mp.exp(-a)
        e_pos = 1 / e_neg
        x = 1 / (1 + e_neg)
        c = 1 / (1 + e_pos)
        xs.append(x)
        cs.append(c)
        ls.append(mp.log1p(e_neg))
        ws.append(pi * mp.cosh(t) * x * c)
    return MPNodes(tuple(xs), tuple(cs), tuple(ls), tuple(ws))


@lru_cache(maxsize=32)
def np_nodes(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """float64 nodes new at ``level``: (x, 1-x, -ln x, weight/h)."""
    idx = _level_indices(level, NP_T_MAX)
    t = np.asarray(idx, dtype=np.float64) * 2.0**-level
    a = np.pi * np.sinh(t)
    x = 1.0 / (1.0 + np.exp(-a))
    c = 1.0 / (1.0 + np.exp(a))
    nl = np.log1p(np.exp(-a))
    w = np.pi * np.cosh(t) * x * c
    for arr in (x, c, nl, w):
        arr.flags.writeable = False
    return x, c, nl, w


def refine(
    level_sum: Callable[[int], Any],
    tol: float,
    *,
    min_level: int = 3,
    max_level: int = 12,
) -> tuple[Any, float, int]:
    """Drive level refinement until two successive estimates differ < tol.

    ``level_sum(l)`` returns the running raw sum (weights without h) over
    all nodes up to level ``l``. Returns (estimate, |last change|, level).
    Raises ``RuntimeError`` at the level cap; callers translate it.
    """
    prev = None
    for level in range(max_level + 1):
        est = level_sum(level) * 2.0**-level
        if prev is not None and level >= min_level:
            diff = abs(est - prev)
            if diff < tol:
                return est, float(diff), level
        prev = est
    raise RuntimeError(f"tanh-sinh did not converge by level {max_level}")
