"""Exact chord structure of the concave envelope away from the linear regime.

For p > 2 the only chord known in closed form is the symmetry-axis segment,
on which the envelope is affine.  For p < 2 the domain is tiled by chords
perpendicular to the axis; the envelope is constant on each of them and its
value is the boundary value at the chord's endpoints, which reduces axis
evaluation to a monotone root-solve on one of two boundary branches:

    branch 1 (2t in [1/2, 1]):             (1 + s^p) / D(s) = 2t
    branch 3 (2t in [1/(2^(p-1)+1), 1/2]): (s^p + (1-s)^p) / D(s) = 2t, s in [1/2, 1]

with D(s) = s^p + (1-s)^p + 1.  Both branches give the value 1/2 at the seam
2t = 1/2 (the straight chord between the corners (1/2, 0) and (0, 1/2)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .boundary import BoundaryParam, boundary_value
from .domain import (
    REGIME_BELOW_TWO,
    REGIME_TWO,
    DomainError,
    Exponent,
    SectionPoint,
    in_cone,
    lift_to_cone,
)

__all__ = ["Chord", "axis_range", "solve_branch_param", "b_on_axis", "chord_through"]

_BISECT_TOL = 1e-13
_BISECT_MAX_ITER = 200
_RANGE_TOL = 1e-9
_AXIS_ATOL = 1e-12


@dataclass(frozen=True)
class Chord:
    """A maximal segment of linearity with endpoints on the boundary.

    The segment meets the symmetry axis at (axis_t, axis_t); below p = 2 its
    direction is (1, -1)/sqrt(2), above p = 2 it is the axis itself.
    """

    endpoints: tuple[BoundaryParam, BoundaryParam]
    axis_t: float
    value_at_axis: float


def axis_range(e: Exponent) -> tuple[float, float]:
    """The axis coordinates covered by the domain: [1/(2+2^p), 1/2]."""
    return 1.0 / (2.0 + 2.0**e.p), 0.5


def _branch_sum(branch: int, s: float, p: float) -> float:
    """Coordinate sum of the boundary point of the branch: gamma_1 + gamma_2."""
    sp = s**p
    cp = (1.0 - s) ** p
    den = sp + cp + 1.0
    if branch == 1:
        return (1.0 + sp) / den
    return (sp + cp) / den


@lru_cache(maxsize=64)
def _check_branch_monotone(p: float, branch: int, lo: float, hi: float) -> None:
    vals = [_branch_sum(branch, s, p) for s in np.linspace(lo, hi, 64)]
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise RuntimeError(f"branch {branch} coordinate sum is not increasing for p={p}; bisection bracket invalid")


def solve_branch_param(t: float, branch: int, e: Exponent) -> float:
    """Parameter s of the boundary branch whose point has coordinate sum 2t.

    Bisection against the strictly increasing coordinate sum, to an interval
    of width 1e-13 (200-iteration cap).  Branch 1 searches s in [0, 1] for
    2t in [1/2, 1]; branch 3 searches s in [1/2, 1] for 2t below 1/2.
    """
    if e.regime != REGIME_BELOW_TWO:
        raise DomainError(f"branch solving applies below the quadratic exponent, got p={e.p}")
    if branch not in (1, 3):
        raise DomainError(f"branch must be 1 or 3, got {branch!r}")
    p = e.p
    target = 2.0 * t
    if branch == 1:
        lo, hi = 0.0, 1.0
        tmin, tmax = 0.5, 1.0
    else:
        lo, hi = 0.5, 1.0
        tmin, tmax = 1.0 / (2.0 ** (p - 1.0) + 1.0), 0.5
    if target < tmin - _RANGE_TOL or target > tmax + _RANGE_TOL:
        raise DomainError(f"coordinate sum {target!r} outside branch {branch} range [{tmin}, {tmax}]")
    _check_branch_monotone(p, branch, lo, hi)
    target = min(max(target, tmin), tmax)
    flo = _branch_sum(branch, lo, p)
    fhi = _branch_sum(branch, hi, p)
    # Endpoint sums are recomputed through a different expression than the
    # range bounds, so allow a few ulps of slack; the branch-3 sum is flat
    # at its left end and bisection against a 1-ulp offset would wander.
    if target <= flo + 4e-16 * max(1.0, abs(flo)):
        return lo
    if target >= fhi - 4e-16 * max(1.0, abs(fhi)):
        return hi
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if _branch_sum(branch, mid, p) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _BISECT_TOL:
            break
    return 0.5 * (lo + hi)


def b_on_axis(t: float, e: Exponent) -> float:
    """Envelope value at the axis point (t, t).

    Affine (2 + 2^p) t - 1 from the quadratic exponent upward; below it, the
    boundary value carried by the perpendicular chord through (t, t).
    """
    e.require_eval_range()
    t_min, t_max = axis_range(e)
    if t < t_min - _RANGE_TOL or t > t_max + _RANGE_TOL:
        raise DomainError(f"axis coordinate {t!r} outside [{t_min}, {t_max}]")
    t = min(max(t, t_min), t_max)
    p = e.p
    if e.regime != REGIME_BELOW_TWO:
        return (2.0 + 2.0**p) * t - 1.0
    if 2.0 * t >= 0.5:
        s = solve_branch_param(t, 1, e)
        return (1.0 + s) ** p / (s**p + (1.0 - s) ** p + 1.0)
    s = solve_branch_param(t, 3, e)
    return (2.0 * s - 1.0) ** p / (s**p + (1.0 - s) ** p + 1.0)


def chord_through(y: SectionPoint, e: Exponent) -> Chord:
    """The linearity chord through an interior section point.

    Below p = 2 the chord is the intersection of the domain with the line of
    constant coordinate sum through y.  Above p = 2 only the axis chord is
    known exactly; off-axis queries are unsupported and should fall back to
    the numeric envelope.
    """
    e.require_eval_range()
    if e.regime == REGIME_TWO:
        raise DomainError("linear regime: the envelope is affine, there is no chord structure")
    if not in_cone(lift_to_cone(y, 1.0), e):
        raise DomainError(f"point {tuple(y)} lies outside the section domain")
    t = 0.5 * (y.y1 + y.y2)
    if e.regime != REGIME_BELOW_TWO:
        if abs(y.y1 - y.y2) > _AXIS_ATOL:
            raise DomainError(
                "exact foliation off the symmetry axis is not available above the "
                "quadratic exponent; use the numeric envelope"
            )
        return Chord((BoundaryParam(3, 0.5), BoundaryParam(1, 1.0)), t, b_on_axis(t, e))
    if 2.0 * t >= 0.5:
        s = solve_branch_param(t, 1, e)
        ends = (BoundaryParam(1, s), BoundaryParam(2, 1.0 - s))
    else:
        s = solve_branch_param(t, 3, e)
        ends = (BoundaryParam(3, s), BoundaryParam(3, 1.0 - s))
    return Chord(ends, t, boundary_value(ends[0], e))
