"""Minimal concave majorant of boundary data via the 3-D convex hull.

The subgraph of the minimal concave majorant of a continuous function on the
boundary of a strictly convex planar compact equals the convex hull of the
boundary subgraph.  Lifting boundary samples to (y1, y2, value) and keeping
the upper facets of their hull therefore yields an inscribed piecewise-linear
approximation that underestimates the true majorant and converges under
refinement.

Evaluation uses the pointwise minimum over upper facet planes, which on the
projected hull coincides with barycentric interpolation on the containing
facet (a concave piecewise-linear surface is the lower envelope of its facet
planes).  An O(n^2) chord scan provides an independent second route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .boundary import BoundaryParam, arc_curve
from .domain import DomainError, Exponent, PreconditionError, SectionPoint

__all__ = [
    "BoundarySample",
    "HullSurface",
    "InsufficientSamplingError",
    "sample_boundary",
    "build_envelope",
    "eval_envelope",
    "eval_envelope_many",
    "chord_oracle_eval",
    "surface_to_dict",
]

# Lifted samples closer than this (relative) to a common plane are treated as
# the degenerate linear case.
_COPLANAR_RTOL = 1e-9

# Queries at most this far outside the projected hull are snapped onto it;
# discretization shrinks the domain slightly, so legitimate points of the
# continuous domain can fall marginally outside.
_SNAP_OUTSIDE = 1e-4

_EVAL_CHUNK = 512


class InsufficientSamplingError(RuntimeError):
    """The chord scan found no sample pair passing near the query point."""


@dataclass(frozen=True, eq=False)
class BoundarySample:
    """One boundary sample: section point, carried value, arc provenance."""

    point: SectionPoint
    value: float
    tag: BoundaryParam | None = None


@dataclass(frozen=True, eq=False)
class HullSurface:
    """Upper surface of the hull of lifted boundary samples.

    `facets` holds vertex index triples except in the coplanar case, where a
    single polygon facet (all hull vertices, counter-clockwise) is stored.
    `planes` holds one row (a, b, c) per facet with z = a*y1 + b*y2 + c.
    `hull2_eqs` are the qhull half-plane equations of the projected hull.
    """

    vertices: np.ndarray
    facets: tuple[tuple[int, ...], ...]
    planes: np.ndarray
    hull2_eqs: np.ndarray
    diameter: float
    coplanar: bool


def _smoothstep(v: np.ndarray) -> np.ndarray:
    return v * v * (3.0 - 2.0 * v)


def _arc3_warp(v: np.ndarray) -> np.ndarray:
    # Clusters parameters near 0, 1/2 and 1: the carried value has a kink at
    # s = 1/2 and the torsion changes sign there.
    lo = v <= 0.5
    out = np.empty_like(v)
    out[lo] = 0.5 * _smoothstep(2.0 * v[lo])
    out[~lo] = 1.0 - 0.5 * _smoothstep(2.0 * (1.0 - v[~lo]))
    return out


def sample_boundary(e: Exponent, n: int) -> list[BoundarySample]:
    """n warped samples per arc, corners kept once: 3n - 3 in total.

    Grids are images of {j/(n-1)} under fixed warps, so doubling the
    denominator (n -> 2n - 1) refines the sample set monotonically.
    """
    if n < 4:
        raise PreconditionError(f"need at least 4 samples per arc, got {n}")
    v = np.arange(n, dtype=float) / (n - 1)
    samples: list[BoundarySample] = []
    for arc, s in ((1, _smoothstep(v)), (2, _smoothstep(v)[1:]), (3, _arc3_warp(v)[1:-1])):
        g1, g2, f = arc_curve(arc, s, e.p)
        for si, a, b, val in zip(s, g1, g2, f):
            samples.append(BoundarySample(SectionPoint(float(a), float(b)), float(val), BoundaryParam(arc, float(si))))
    return samples


def _lift(samples: list[BoundarySample]) -> np.ndarray:
    return np.array([[s.point.y1, s.point.y2, s.value] for s in samples], dtype=float)


def build_envelope(samples: list[BoundarySample]) -> HullSurface:
    """Upper surface of the convex hull of the lifted samples.

    Coplanar input (the linear regime) yields a single polygon facet; the
    generic path keeps hull facets whose outward normal points upward and
    discards vertical ones arising from corner degeneracies.
    """
    if len(samples) < 3:
        raise PreconditionError(f"need at least 3 samples, got {len(samples)}")
    pts = _lift(samples)
    try:
        hull2 = ConvexHull(pts[:, :2])
    except QhullError as exc:
        raise DomainError(f"sample projections are degenerate: {exc}") from None
    spread = pts[:, :2].max(axis=0) - pts[:, :2].min(axis=0)
    diameter = float(np.hypot(spread[0], spread[1]))

    centered = pts - pts.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv[-1] <= _COPLANAR_RTOL * max(sv[0], 1.0):
        # Degenerate linear case: fit the common plane and keep the hull
        # polygon of the projections as the single facet.
        _, _, vt = np.linalg.svd(centered)
        normal = vt[-1]
        if abs(normal[2]) < 1e-12:
            raise DomainError("coplanar samples lie in a vertical plane; not a graph")
        a, b = -normal[0] / normal[2], -normal[1] / normal[2]
        centroid = pts.mean(axis=0)
        c = centroid[2] - a * centroid[0] - b * centroid[1]
        facets = (tuple(int(i) for i in hull2.vertices),)
        planes = np.array([[a, b, c]])
        return HullSurface(pts, facets, planes, hull2.equations.copy(), diameter, True)

    hull3 = ConvexHull(pts)
    up = hull3.equations[:, 2] > 1e-12
    simplices = hull3.simplices[up]
    eqs = hull3.equations[up]
    # qhull equation (n1, n2, n3, off) with n.x + off <= 0 inside and n3 > 0
    # gives the facet plane z = -(n1*y1 + n2*y2 + off)/n3.
    planes = np.column_stack([-eqs[:, 0] / eqs[:, 2], -eqs[:, 1] / eqs[:, 2], -eqs[:, 3] / eqs[:, 2]])
    facets = tuple(tuple(int(i) for i in tri) for tri in simplices)
    return HullSurface(pts, facets, planes, hull2.equations.copy(), diameter, False)


def _snap_inside(surface: HullSurface, ys: np.ndarray) -> np.ndarray:
    """Clip query points onto the projected hull; error if too far outside."""
    eqs = surface.hull2_eqs
    tol = _SNAP_OUTSIDE * max(1.0, surface.diameter)
    out = ys.copy()
    for _ in range(3):
        viol = out @ eqs[:, :2].T + eqs[:, 2]
        worst = viol.max(axis=1)
        if np.all(worst <= 1e-14):
            break
        if np.any(worst > tol):
            k = int(np.argmax(worst))
            raise DomainError(
                f"point {tuple(out[k])} lies outside the projected hull of the samples "
                f"(violation {worst[k]:.3e})"
            )
        # qhull normals are unit length, so the violation is the distance.
        np.clip(viol, 0.0, None, out=viol)
        out -= viol @ eqs[:, :2]
    return out


def eval_envelope_many(surface: HullSurface, ys: np.ndarray) -> np.ndarray:
    """Envelope values at an (m, 2) array of section points."""
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    planes = surface.planes
    out = np.empty(len(ys))
    for lo in range(0, len(ys), _EVAL_CHUNK):
        chunk = _snap_inside(surface, ys[lo : lo + _EVAL_CHUNK])
        vals = chunk @ planes[:, :2].T + planes[:, 2]
        out[lo : lo + _EVAL_CHUNK] = vals.min(axis=1)
    return out


def eval_envelope(surface: HullSurface, y: SectionPoint) -> float:
    """Envelope value at one section point inside the projected hull."""
    return float(eval_envelope_many(surface, np.array([[y.y1, y.y2]]))[0])


def chord_oracle_eval(samples: list[BoundarySample], y: SectionPoint) -> float:
    """Best linear interpolation over sample pairs whose chord passes near y.

    Independent of the hull construction: scans all O(n^2) sample pairs,
    keeps those whose segment passes within 1e-3 of the domain diameter of
    the query, and maximizes the interpolated value.  For generic exponents
    the optimal decomposition uses chords, not triangles, so refinement
    drives this toward the hull envelope.
    """
    pts = _lift(samples)
    P, V = pts[:, :2], pts[:, 2]
    spread = P.max(axis=0) - P.min(axis=0)
    snap = 1e-3 * float(np.hypot(spread[0], spread[1]))
    q = np.array([y.y1, y.y2])
    best = -np.inf
    for i in range(len(P) - 1):
        w = P[i + 1 :] - P[i]
        L2 = np.einsum("ij,ij->i", w, w)
        L2[L2 == 0.0] = np.inf
        t = np.clip(((q - P[i]) @ w.T) / L2, 0.0, 1.0)
        d = np.hypot(*(P[i] + t[:, None] * w - q).T)
        near = d <= snap
        if np.any(near):
            vals = V[i] + t[near] * (V[i + 1 :][near] - V[i])
            m = float(vals.max())
            if m > best:
                best = m
    if not np.isfinite(best):
        raise InsufficientSamplingError(
            f"insufficient sampling: no chord passes within {snap:.3e} of {tuple(q)}"
        )
    return best


def surface_to_dict(surface: HullSurface) -> dict:
    """JSON-ready description: vertices, facets, per-facet plane coefficients."""
    return {
        "vertices": [[float(c) for c in row] for row in surface.vertices],
        "facets": [list(f) for f in surface.facets],
        "planes": [[float(c) for c in row] for row in surface.planes],
        "coplanar": surface.coplanar,
    }
