"""Exponent handling and the cone/section geometry of the extremal problem.

The natural domain of the three-point extremal function is the cone of
triples (x1, x2, x3) whose p-th roots satisfy the triangle inequality.
Everything downstream works either on that cone or on its planar section
x1 + x2 + x3 = 1, connected by homogeneity of order one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "DomainError",
    "PreconditionError",
    "Exponent",
    "ConePoint",
    "SectionPoint",
    "REGIME_BELOW_TWO",
    "REGIME_TWO",
    "REGIME_ABOVE_TWO",
    "P_MIN_EVAL",
    "P_MIN_VERIFY",
    "P_MAX",
    "TRIANGLE_RTOL",
    "in_cone",
    "violated_inequality",
    "tight_case",
    "project_to_section",
    "lift_to_cone",
]


class DomainError(ValueError):
    """Input lies outside the mathematical domain of the operation."""


class PreconditionError(ValueError):
    """Input is in-domain but violates a documented precondition."""


REGIME_BELOW_TWO = "BELOW_TWO"
REGIME_TWO = "TWO"
REGIME_ABOVE_TWO = "ABOVE_TWO"

# Evaluation of the extremal function needs p safely above 1 so that the
# rational powers s**p stay well conditioned; the inequality verifiers work
# down to p = 1 inclusive.
P_MIN_EVAL = 1.01
P_MIN_VERIFY = 1.0
P_MAX = 64.0

# Triangle-inequality tolerance, relative to the largest of the three roots.
TRIANGLE_RTOL = 1e-12


@dataclass(frozen=True)
class Exponent:
    """The exponent p with its conjugate q = p/(p-1) and regime tag."""

    p: float
    q: float = 0.0
    regime: str = ""

    def __post_init__(self) -> None:
        p = float(self.p)
        if not math.isfinite(p) or p < P_MIN_VERIFY or p > P_MAX:
            raise DomainError(f"exponent p={p!r} outside supported range [{P_MIN_VERIFY}, {P_MAX}]")
        q = math.inf if p == 1.0 else p / (p - 1.0)
        if abs(p - 2.0) <= 1e-12:
            regime = REGIME_TWO
        elif p < 2.0:
            regime = REGIME_BELOW_TWO
        else:
            regime = REGIME_ABOVE_TWO
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "regime", regime)

    def require_eval_range(self) -> None:
        """Raise unless p is inside the range supported for extremal evaluation."""
        if self.p < P_MIN_EVAL:
            raise DomainError(
                f"p={self.p} below {P_MIN_EVAL}: extremal evaluation is restricted "
                f"to [{P_MIN_EVAL}, {P_MAX}] (verifiers accept p >= 1)"
            )


class ConePoint(NamedTuple):
    """A triple of p-th powers of norms."""

    x1: float
    x2: float
    x3: float


class SectionPoint(NamedTuple):
    """A point of the planar section; the third coordinate is 1 - y1 - y2."""

    y1: float
    y2: float

    @property
    def y3(self) -> float:
        return 1.0 - self.y1 - self.y2


def _roots(x: ConePoint, p: float) -> tuple[float, float, float]:
    return (x.x1 ** (1.0 / p), x.x2 ** (1.0 / p), x.x3 ** (1.0 / p))


def violated_inequality(x: ConePoint, e: Exponent) -> str | None:
    """Name the violated triangle inequality on the p-th roots, or None.

    Total: negative coordinates are reported as violations, never raised.
    """
    if x.x1 < 0.0 or x.x2 < 0.0 or x.x3 < 0.0:
        return "negative coordinate"
    r1, r2, r3 = _roots(x, e.p)
    tol = TRIANGLE_RTOL * max(r1, r2, r3, 1e-300)
    if r1 > r2 + r3 + tol:
        return "x1^(1/p) > x2^(1/p) + x3^(1/p)"
    if r2 > r1 + r3 + tol:
        return "x2^(1/p) > x1^(1/p) + x3^(1/p)"
    if r3 > r1 + r2 + tol:
        return "x3^(1/p) > x1^(1/p) + x2^(1/p)"
    return None


def in_cone(x: ConePoint, e: Exponent) -> bool:
    """True iff the p-th roots of x satisfy all three triangle inequalities."""
    return violated_inequality(x, e) is None


def tight_case(x: ConePoint, e: Exponent) -> int:
    """Which triangle inequality is an equality (1, 2 or 3), or 0 if none.

    Case i means the i-th root equals the sum of the other two, up to the
    relative tolerance.  When several are tight simultaneously (degenerate
    corner) the smallest case index is returned.
    """
    if x.x1 < 0.0 or x.x2 < 0.0 or x.x3 < 0.0:
        return 0
    r1, r2, r3 = _roots(x, e.p)
    tol = TRIANGLE_RTOL * max(r1, r2, r3, 1e-300)
    if abs(r1 - (r2 + r3)) <= tol:
        return 1
    if abs(r2 - (r1 + r3)) <= tol:
        return 2
    if abs(r3 - (r1 + r2)) <= tol:
        return 3
    return 0


def project_to_section(x: ConePoint) -> tuple[SectionPoint, float]:
    """Normalize a cone point onto the section plane; returns (point, scale)."""
    scale = x.x1 + x.x2 + x.x3
    if scale <= 0.0:
        raise DomainError("the zero point has no section representative")
    return SectionPoint(x.x1 / scale, x.x2 / scale), scale


def lift_to_cone(y: SectionPoint, scale: float) -> ConePoint:
    """Inverse of the projection: rescale a section point back to the cone."""
    if scale <= 0.0:
        raise DomainError(f"scale must be positive, got {scale!r}")
    return ConePoint(scale * y.y1, scale * y.y2, scale * (1.0 - y.y1 - y.y2))
