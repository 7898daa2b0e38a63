"""Unified evaluation of the extremal function on the cone and its section.

Dispatch:

  * quadratic exponent: the exact affine formula 3*y1 + 3*y2 - 1 everywhere;
  * below it: exact chord values through the axis root-solve, everywhere;
  * above it: the exact affine axis formula on the symmetry axis, boundary
    values on the boundary, and the cached numeric hull envelope elsewhere.

Values on the cone follow by homogeneity of order one.
"""

from __future__ import annotations

import threading
from typing import NamedTuple

from .boundary import cone_boundary_value
from .domain import (
    REGIME_BELOW_TWO,
    REGIME_TWO,
    ConePoint,
    DomainError,
    Exponent,
    SectionPoint,
    project_to_section,
    tight_case,
    violated_inequality,
)
from .envelope import HullSurface, build_envelope, eval_envelope, sample_boundary
from .foliation import b_on_axis

__all__ = [
    "MODE_EXACT_LINEAR",
    "MODE_FOLIATION",
    "MODE_ENVELOPE_NUMERIC",
    "MODE_BOUNDARY",
    "DEFAULT_SURFACE_N",
    "BellmanValue",
    "envelope_surface",
    "eval_B",
    "eval_B3",
    "b3_unit",
]

MODE_EXACT_LINEAR = "EXACT_LINEAR"
MODE_FOLIATION = "FOLIATION"
MODE_ENVELOPE_NUMERIC = "ENVELOPE_NUMERIC"
MODE_BOUNDARY = "BOUNDARY"

# Default boundary samples per arc for the cached numeric surface.
DEFAULT_SURFACE_N = 2048

_AXIS_ATOL = 1e-12
_NEGATIVE_CLAMP = 1e-9

_surface_cache: dict[tuple[float, int], HullSurface] = {}
_surface_lock = threading.Lock()


class BellmanValue(NamedTuple):
    """An extremal value together with the evaluation route that produced it."""

    value: float
    mode: str


def envelope_surface(e: Exponent, n: int = DEFAULT_SURFACE_N) -> HullSurface:
    """The hull surface for (p, n), built once and cached immutably."""
    key = (e.p, int(n))
    surf = _surface_cache.get(key)
    if surf is None:
        with _surface_lock:
            surf = _surface_cache.get(key)
            if surf is None:
                surf = build_envelope(sample_boundary(e, int(n)))
                _surface_cache[key] = surf
    return surf


def _clamp(value: float) -> float:
    if value < 0.0:
        if value < -_NEGATIVE_CLAMP:
            raise RuntimeError(f"evaluator produced a significantly negative value {value!r}")
        return 0.0
    return value


def eval_B(y: SectionPoint, e: Exponent, surface_n: int = DEFAULT_SURFACE_N) -> BellmanValue:
    """Extremal value at a section point, with the evaluation mode."""
    e.require_eval_range()
    x = ConePoint(y.y1, y.y2, 1.0 - y.y1 - y.y2)
    reason = violated_inequality(x, e)
    if reason is not None:
        raise DomainError(f"point {tuple(y)} outside the section domain: {reason}")
    if e.regime == REGIME_TWO:
        return BellmanValue(3.0 * y.y1 + 3.0 * y.y2 - 1.0, MODE_EXACT_LINEAR)
    t = 0.5 * (y.y1 + y.y2)
    if e.regime == REGIME_BELOW_TWO:
        if tight_case(x, e):
            return BellmanValue(_clamp(cone_boundary_value(x, e)), MODE_BOUNDARY)
        return BellmanValue(_clamp(b_on_axis(t, e)), MODE_FOLIATION)
    # Above the quadratic exponent the axis formula takes precedence even at
    # the axis endpoints on the boundary.
    if abs(y.y1 - y.y2) <= _AXIS_ATOL:
        return BellmanValue(_clamp((2.0 + 2.0**e.p) * t - 1.0), MODE_FOLIATION)
    if tight_case(x, e):
        return BellmanValue(_clamp(cone_boundary_value(x, e)), MODE_BOUNDARY)
    return BellmanValue(_clamp(eval_envelope(envelope_surface(e, surface_n), y)), MODE_ENVELOPE_NUMERIC)


def eval_B3(x: ConePoint, e: Exponent, surface_n: int = DEFAULT_SURFACE_N) -> BellmanValue:
    """Extremal value on the cone, reduced to the section by homogeneity."""
    e.require_eval_range()
    if x.x1 == 0.0 and x.x2 == 0.0 and x.x3 == 0.0:
        return BellmanValue(0.0, MODE_BOUNDARY)
    reason = violated_inequality(x, e)
    if reason is not None:
        raise DomainError(f"point {tuple(x)} outside the cone: {reason}")
    y, scale = project_to_section(x)
    section = eval_B(y, e, surface_n)
    return BellmanValue(scale * section.value, section.mode)


def b3_unit(t: float, e: Exponent) -> float:
    """The cone value at (1, 1, t), strictly decreasing on [0, 2^p].

    Affine 2^p - t from the quadratic exponent upward; below it, homogeneity
    reduces the value to the axis point 1/(t+2) of the section.
    """
    e.require_eval_range()
    hi = 2.0**e.p
    tol = _NEGATIVE_CLAMP * max(1.0, hi)
    if t < -tol or t > hi + tol:
        raise DomainError(f"third coordinate {t!r} outside [0, 2^p] = [0, {hi}]")
    t = min(max(t, 0.0), hi)
    # Endpoints are tight cone-boundary cases with exact values; the root
    # solve below p = 2 is tangential there and would lose half the digits.
    if t == 0.0:
        return hi
    if t == hi:
        return 0.0
    if e.regime != REGIME_BELOW_TWO:
        return hi - t
    return (t + 2.0) * b_on_axis(1.0 / (t + 2.0), e)
