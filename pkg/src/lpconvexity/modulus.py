"""Sharp modulus of uniform convexity, by two independent routes.

Route one evaluates the sharp formulas directly: the closed form
delta = 1 - (1 - (eps/2)^p)^(1/p) from the quadratic exponent upward, and
below it the unique root of

    (1 - delta + eps/2)^p + |1 - delta - eps/2|^p = 2

whose left side is strictly decreasing in delta.  Route two runs the
extremal-function pipeline: 2^p (1 - delta)^p equals the supremum of the
cone value at (1, 1, t) over t in [eps^p, 2^p], attained at the left
endpoint because that value is decreasing in t.  Agreement between the two
routes certifies numerically that the modulus is sharp.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .bellman import b3_unit
from .domain import REGIME_BELOW_TWO, DomainError, Exponent

__all__ = [
    "METHOD_CLOSED_FORM",
    "METHOD_IMPLICIT_ROOT",
    "METHOD_BELLMAN_PIPELINE",
    "ModulusPoint",
    "ModulusCurve",
    "delta_closed",
    "delta_bellman",
    "modulus_curve",
]

METHOD_CLOSED_FORM = "CLOSED_FORM"
METHOD_IMPLICIT_ROOT = "IMPLICIT_ROOT"
METHOD_BELLMAN_PIPELINE = "BELLMAN_PIPELINE"

_EPS_TOL = 1e-12
_ROOT_WIDTH = 1e-13
_ROOT_MAX_ITER = 200


class ModulusPoint(NamedTuple):
    """One point of the modulus curve with the method that produced it."""

    eps: float
    delta: float
    method: str


class ModulusCurve(NamedTuple):
    """Paired evaluations of both routes over a grid, with their worst gap."""

    points: list[tuple[ModulusPoint, ModulusPoint]]
    max_discrepancy: float


def _check_eps(eps: float) -> float:
    if not 0.0 < eps <= 2.0 + _EPS_TOL:
        raise DomainError(f"eps must lie in (0, 2], got {eps!r}")
    return min(eps, 2.0)


def _implicit_side(delta: float, half_eps: float, p: float) -> float:
    return (1.0 - delta + half_eps) ** p + abs(1.0 - delta - half_eps) ** p


def delta_closed(eps: float, e: Exponent) -> ModulusPoint:
    """Sharp modulus by the direct formulas.

    Closed form at and above the quadratic exponent; below it, bisection on
    the implicit equation, whose left side decreases strictly in delta from
    at least 2 (at delta = 0, by convexity of u^p) to at most 2 (at
    delta = 1, with equality only for eps = 2).
    """
    e.require_eval_range()
    eps = _check_eps(eps)
    p = e.p
    if e.regime != REGIME_BELOW_TWO:
        inner = max(0.0, 1.0 - (eps / 2.0) ** p)
        return ModulusPoint(eps, 1.0 - inner ** (1.0 / p), METHOD_CLOSED_FORM)
    if eps == 2.0:
        # The implicit left side touches 2 tangentially at delta = 1, so
        # bisection loses half the digits there; the root is exact.
        return ModulusPoint(eps, 1.0, METHOD_IMPLICIT_ROOT)
    half = eps / 2.0
    lo, hi = 0.0, 1.0
    f_lo = _implicit_side(lo, half, p) - 2.0
    f_hi = _implicit_side(hi, half, p) - 2.0
    if f_lo < -1e-12 or f_hi > 1e-12:
        raise RuntimeError(f"implicit-equation bracket failed for p={p}, eps={eps}: [{f_lo}, {f_hi}]")
    for _ in range(_ROOT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if _implicit_side(mid, half, p) - 2.0 > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _ROOT_WIDTH:
            break
    return ModulusPoint(eps, 0.5 * (lo + hi), METHOD_IMPLICIT_ROOT)


def delta_bellman(eps: float, e: Exponent, debug_grid: int = 0) -> ModulusPoint:
    """Sharp modulus through the extremal-function pipeline.

    The supremum over t in [eps^p, 2^p] of the cone value at (1, 1, t) is
    evaluated at the left endpoint; with debug_grid > 0 a grid search
    asserts, within its resolution, that the left endpoint is the argmax.
    """
    e.require_eval_range()
    eps = _check_eps(eps)
    p = e.p
    t0 = eps**p
    top = 2.0**p
    if debug_grid > 0:
        ts = np.linspace(t0, top, debug_grid)
        vals = np.array([b3_unit(float(t), e) for t in ts])
        if vals[0] + 1e-12 * max(1.0, top) < vals.max():
            raise RuntimeError(f"profile is not maximized at the left endpoint for p={p}, eps={eps}")
    delta = 1.0 - (b3_unit(t0, e) / top) ** (1.0 / p)
    return ModulusPoint(eps, delta, METHOD_BELLMAN_PIPELINE)


def modulus_curve(e: Exponent, eps_grid) -> ModulusCurve:
    """Both routes over a sorted grid in (0, 2], with the worst discrepancy."""
    grid = [float(x) for x in eps_grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("eps grid must be sorted increasingly")
    points = []
    worst = 0.0
    for eps in grid:
        closed = delta_closed(eps, e)
        pipeline = delta_bellman(eps, e)
        points.append((closed, pipeline))
        worst = max(worst, abs(closed.delta - pipeline.delta))
    return ModulusCurve(points, worst)
