"""Brute-force validation: step-function pairs, inequality suites, and a
randomized lower-bound search for the cone extremal value.

Everything here works directly from the definition.  Pairs of finitely
atomic step functions over a shared partition realize prescribed norm data;
the inequality verifiers evaluate both sides verbatim; the lower-bound
search samples three-atom scalar configurations whose mixture weights are
solved exactly from the three norm constraints, so every reported value is
realized by an explicit admissible pair (shortfall in total weight is
padded with a zero atom, excess is absorbed by rescaling atom values, and
neither changes the objective).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bellman import eval_B
from .domain import (
    ConePoint,
    DomainError,
    Exponent,
    PreconditionError,
    SectionPoint,
    violated_inequality,
)

__all__ = [
    "StepFunction",
    "FunctionPair",
    "norms",
    "sum_norm",
    "concatenate",
    "random_pair",
    "verify_hanner",
    "verify_clarkson",
    "hanner_suite",
    "clarkson_suite",
    "verify_concavity",
    "verify_majorant",
    "lower_bound_B3",
]

_WEIGHT_TOL = 1e-12
_VALUE_CLIP = 10.0

_CHUNK = 4096
_TOPK = 16
_REFINE_ROUNDS = 48
_FEAS_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class StepFunction:
    """A finitely atomic function: positive weights summing to one, real values."""

    weights: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if w.ndim != 1 or v.shape != w.shape or w.size == 0:
            raise PreconditionError("weights and values must be equal-length 1-D sequences")
        if np.any(w <= 0.0):
            raise PreconditionError("all weights must be positive")
        if abs(w.sum() - 1.0) > _WEIGHT_TOL:
            raise PreconditionError(f"weights must sum to 1, got {w.sum()!r}")
        if not np.all(np.isfinite(v)):
            raise PreconditionError("values must be finite")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True, eq=False)
class FunctionPair:
    """Two step functions over one shared atom partition."""

    phi: StepFunction
    psi: StepFunction

    def __post_init__(self) -> None:
        if not np.array_equal(self.phi.weights, self.psi.weights):
            raise PreconditionError("pair members must share one weight sequence")

    @classmethod
    def from_arrays(cls, weights, phi_values, psi_values) -> "FunctionPair":
        w = np.asarray(weights, dtype=float)
        return cls(StepFunction(w, phi_values), StepFunction(w, psi_values))


def norms(pair: FunctionPair, e: Exponent) -> ConePoint:
    """The norm data (|phi|_p^p, |psi|_p^p, |phi - psi|_p^p) of the pair."""
    w = pair.phi.weights
    f, g = pair.phi.values, pair.psi.values
    p = e.p
    return ConePoint(
        float(w @ np.abs(f) ** p),
        float(w @ np.abs(g) ** p),
        float(w @ np.abs(f - g) ** p),
    )


def sum_norm(pair: FunctionPair, e: Exponent) -> float:
    """|phi + psi|_p^p, the quantity the extremal function maximizes."""
    w = pair.phi.weights
    return float(w @ np.abs(pair.phi.values + pair.psi.values) ** e.p)


def concatenate(a: FunctionPair, b: FunctionPair, alpha: float) -> FunctionPair:
    """Glue two pairs with mass split (alpha, 1 - alpha).

    Norm data of the result is the convex combination of the inputs' norm
    data, the mechanism behind concavity of the extremal function.
    """
    if not 0.0 < alpha < 1.0:
        raise PreconditionError(f"alpha must lie in (0, 1), got {alpha!r}")
    w = np.concatenate([alpha * a.phi.weights, (1.0 - alpha) * b.phi.weights])
    f = np.concatenate([a.phi.values, b.phi.values])
    g = np.concatenate([a.psi.values, b.psi.values])
    return FunctionPair.from_arrays(w, f, g)


def random_pair(rng: np.random.Generator, n_atoms: int = 8) -> FunctionPair:
    """A random pair with heavy-tailed symmetric values clipped to [-10, 10]."""
    w = rng.random(n_atoms) + 0.05
    w /= w.sum()
    f = np.clip(rng.standard_cauchy(n_atoms), -_VALUE_CLIP, _VALUE_CLIP)
    g = np.clip(rng.standard_cauchy(n_atoms), -_VALUE_CLIP, _VALUE_CLIP)
    return FunctionPair.from_arrays(w, f, g)


def verify_hanner(pair: FunctionPair, e: Exponent) -> float:
    """Signed slack of the norm-sum inequality.

    slack = (|phi| + |psi|)^p + ||phi| - |psi||^p - |phi+psi|_p^p - |phi-psi|_p^p,
    nonnegative from the quadratic exponent upward and nonpositive below it
    (up to relative rounding).
    """
    p = e.p
    x = norms(pair, e)
    a = x.x1 ** (1.0 / p)
    b = x.x2 ** (1.0 / p)
    w = pair.phi.weights
    rhs = float(w @ np.abs(pair.phi.values + pair.psi.values) ** p) + x.x3
    return (a + b) ** p + abs(a - b) ** p - rhs


def verify_clarkson(pair: FunctionPair, e: Exponent) -> float:
    """Signed slack of the power-mean inequality, always nonnegative.

    From the quadratic exponent upward:
        2^(p-1) (|phi|^p + |psi|^p) - |phi+psi|^p - |phi-psi|^p;
    strictly between 1 and 2, the conjugate-power form:
        2 (|phi|^p + |psi|^p)^(q/p) - |phi+psi|_p^q - |phi-psi|_p^q.
    """
    p = e.p
    if p <= 1.0:
        raise DomainError("the conjugate-power form requires p > 1")
    x = norms(pair, e)
    w = pair.phi.weights
    s = float(w @ np.abs(pair.phi.values + pair.psi.values) ** p)
    if p >= 2.0:
        return 2.0 ** (p - 1.0) * (x.x1 + x.x2) - s - x.x3
    q = e.q
    return 2.0 * (x.x1 + x.x2) ** (q / p) - s ** (q / p) - x.x3 ** (q / p)


def _random_batches(rng: np.random.Generator, trials: int, n_atoms: int):
    w = rng.random((trials, n_atoms)) + 0.05
    w /= w.sum(axis=1, keepdims=True)
    f = np.clip(rng.standard_cauchy((trials, n_atoms)), -_VALUE_CLIP, _VALUE_CLIP)
    g = np.clip(rng.standard_cauchy((trials, n_atoms)), -_VALUE_CLIP, _VALUE_CLIP)
    return w, f, g


def _witness(w, f, g, slack) -> dict:
    return {
        "weights": [float(x) for x in w],
        "phi": [float(x) for x in f],
        "psi": [float(x) for x in g],
        "slack": float(slack),
    }


def hanner_suite(e: Exponent, trials: int, seed: int, n_atoms: int = 8) -> dict:
    """Vectorized slack scan of the norm-sum inequality on random pairs."""
    p = e.p
    rng = np.random.default_rng(seed)
    w, f, g = _random_batches(rng, trials, n_atoms)
    np1 = np.einsum("ij,ij->i", w, np.abs(f) ** p)
    np2 = np.einsum("ij,ij->i", w, np.abs(g) ** p)
    ns = np.einsum("ij,ij->i", w, np.abs(f + g) ** p)
    nd = np.einsum("ij,ij->i", w, np.abs(f - g) ** p)
    a = np1 ** (1.0 / p)
    b = np2 ** (1.0 / p)
    lhs = (a + b) ** p + np.abs(a - b) ** p
    slack = lhs - ns - nd
    scale = np.maximum(np.maximum(lhs, ns + nd), 1e-300)
    rel = slack / scale
    if p >= 2.0:
        bad = rel < -_WEIGHT_TOL
        worst_idx = int(np.argmin(rel))
    else:
        bad = rel > _WEIGHT_TOL
        worst_idx = int(np.argmax(rel))
    return {
        "inequality": "hanner",
        "p": p,
        "trials": int(trials),
        "seed": int(seed),
        "violations": int(bad.sum()),
        "worst_relative_slack": float(rel[worst_idx]),
        "worst_witness": _witness(w[worst_idx], f[worst_idx], g[worst_idx], slack[worst_idx]),
        "passed": not bool(bad.any()),
    }


def clarkson_suite(e: Exponent, trials: int, seed: int, n_atoms: int = 8) -> dict:
    """Vectorized slack scan of the power-mean inequality on random pairs."""
    p = e.p
    if p <= 1.0:
        raise DomainError("the conjugate-power form requires p > 1")
    rng = np.random.default_rng(seed)
    w, f, g = _random_batches(rng, trials, n_atoms)
    np1 = np.einsum("ij,ij->i", w, np.abs(f) ** p)
    np2 = np.einsum("ij,ij->i", w, np.abs(g) ** p)
    ns = np.einsum("ij,ij->i", w, np.abs(f + g) ** p)
    nd = np.einsum("ij,ij->i", w, np.abs(f - g) ** p)
    if p >= 2.0:
        lhs = 2.0 ** (p - 1.0) * (np1 + np2)
        rhs = ns + nd
    else:
        qp = e.q / p
        lhs = 2.0 * (np1 + np2) ** qp
        rhs = ns**qp + nd**qp
    slack = lhs - rhs
    scale = np.maximum(np.maximum(lhs, rhs), 1e-300)
    rel = slack / scale
    bad = rel < -_WEIGHT_TOL
    worst_idx = int(np.argmin(rel))
    return {
        "inequality": "clarkson",
        "p": p,
        "trials": int(trials),
        "seed": int(seed),
        "violations": int(bad.sum()),
        "worst_relative_slack": float(rel[worst_idx]),
        "worst_witness": _witness(w[worst_idx], f[worst_idx], g[worst_idx], slack[worst_idx]),
        "passed": not bool(bad.any()),
    }


def _cone_mask(pts: np.ndarray, p: float) -> np.ndarray:
    r = pts ** (1.0 / p)
    tol = 1e-12 * np.maximum(r.max(axis=1), 1e-300)
    return (
        (r[:, 0] <= r[:, 1] + r[:, 2] + tol)
        & (r[:, 1] <= r[:, 0] + r[:, 2] + tol)
        & (r[:, 2] <= r[:, 0] + r[:, 1] + tol)
    )


def _random_cone_points(rng: np.random.Generator, count: int, e: Exponent) -> np.ndarray:
    """Random cone points: rejection-sampled section points at random scales."""
    out = np.empty((count, 3))
    have = 0
    while have < count:
        m = 2 * (count - have) + 16
        y = rng.random((m, 2))
        y3 = 1.0 - y.sum(axis=1)
        cand = np.column_stack([y, y3])[y3 >= 0.0]
        cand = cand[_cone_mask(cand, e.p)]
        take = min(len(cand), count - have)
        out[have : have + take] = cand[:take]
        have += take
    scales = 10.0 ** rng.uniform(-1.0, 1.0, count)
    return out * scales[:, None]


def verify_concavity(
    evaluator: Callable[[ConePoint], float], e: Exponent, trials: int = 10_000, seed: int = 0
) -> dict:
    """Worst midpoint-concavity violation of an evaluator on random mixtures."""
    rng = np.random.default_rng(seed)
    xs = _random_cone_points(rng, trials, e)
    ys = _random_cone_points(rng, trials, e)
    alphas = rng.random(trials)
    worst = -np.inf
    worst_item: dict = {}
    for xrow, yrow, al in zip(xs, ys, alphas):
        fx = evaluator(ConePoint(*xrow))
        fy = evaluator(ConePoint(*yrow))
        mid = al * xrow + (1.0 - al) * yrow
        fm = evaluator(ConePoint(*mid))
        viol = al * fx + (1.0 - al) * fy - fm
        if viol > worst:
            worst = viol
            worst_item = {"x": [float(v) for v in xrow], "x2": [float(v) for v in yrow], "alpha": float(al)}
    return {"trials": int(trials), "seed": int(seed), "max_violation": float(worst), "worst": worst_item}


def verify_majorant(e: Exponent, grid: int = 100) -> dict:
    """Slack of the affine majorant 2^(p-1) (y1 + y2) over a section lattice."""
    p = e.p
    ymax = 1.0 / (1.0 + 2.0 ** (1.0 - p))
    axis = np.linspace(0.0, ymax, grid)
    g1, g2 = np.meshgrid(axis, axis)
    pts = np.column_stack([g1.ravel(), g2.ravel()])
    y3 = 1.0 - pts.sum(axis=1)
    keep = y3 >= 0.0
    pts3 = np.column_stack([pts[keep], y3[keep]])
    pts3 = pts3[_cone_mask(pts3, p)]
    min_slack = np.inf
    argmin = None
    mode_counts: dict[str, int] = {}
    for row in pts3:
        res = eval_B(SectionPoint(row[0], row[1]), e)
        slack = 2.0 ** (p - 1.0) * (row[0] + row[1]) - res.value
        mode_counts[res.mode] = mode_counts.get(res.mode, 0) + 1
        if slack < min_slack:
            min_slack = slack
            argmin = [float(row[0]), float(row[1])]
    return {
        "p": p,
        "grid": int(grid),
        "points": int(len(pts3)),
        "min_slack": float(min_slack),
        "argmin": argmin,
        "modes": mode_counts,
    }


def _solve_mixture(M: np.ndarray, xvec: np.ndarray) -> np.ndarray:
    """Batched Cramer solve of the 3x3 constraint systems (never raises)."""
    det = np.linalg.det(M)
    cols = np.empty(M.shape[:1] + (3,))
    for i in range(3):
        Mi = M.copy()
        Mi[:, :, i] = xvec
        cols[:, i] = np.linalg.det(Mi)
    with np.errstate(divide="ignore", invalid="ignore"):
        return cols / det[:, None]


def _candidate_values(a: np.ndarray, b: np.ndarray, xvec: np.ndarray, p: float) -> np.ndarray:
    """Objective values of 3-atom candidates, -inf where infeasible.

    Mixture weights solve the norm constraints exactly; feasibility needs
    nonnegative weights and a small linear-system residual.  Total weight
    below one is padded with a zero atom and above one is absorbed by
    rescaling atom values; either way the objective is alpha . |a + b|^p.
    """
    M = np.stack([np.abs(a) ** p, np.abs(b) ** p, np.abs(a - b) ** p], axis=1)
    alpha = _solve_mixture(M, xvec)
    with np.errstate(invalid="ignore"):
        resid = np.abs(np.einsum("mij,mj->mi", M, alpha) - xvec).max(axis=1)
        feas = (
            np.all(np.isfinite(alpha), axis=1)
            & np.all(alpha >= 0.0, axis=1)
            & (resid <= _FEAS_TOL * max(1.0, float(np.abs(xvec).max())))
        )
        obj = np.einsum("mj,mj->m", alpha, np.abs(a + b) ** p)
    return np.where(feas, obj, -np.inf)


def _refine_chunk(
    a: np.ndarray, b: np.ndarray, vals: np.ndarray, xvec: np.ndarray, p: float, rng: np.random.Generator
) -> float:
    """Greedy local search around the best candidates of one chunk."""
    order = np.argsort(vals)[::-1][:_TOPK]
    keep = order[np.isfinite(vals[order])]
    if keep.size == 0:
        return -np.inf
    cur_a, cur_b, cur_v = a[keep].copy(), b[keep].copy(), vals[keep].copy()
    for r in range(_REFINE_ROUNDS):
        step = 0.6 * 0.88**r
        pa = cur_a + step * rng.standard_normal(cur_a.shape)
        pb = cur_b + step * rng.standard_normal(cur_b.shape)
        v = _candidate_values(pa, pb, xvec, p)
        better = v > cur_v
        cur_a[better] = pa[better]
        cur_b[better] = pb[better]
        cur_v[better] = v[better]
    return float(cur_v.max())


def lower_bound_B3(x: ConePoint, e: Exponent, budget: int = 100_000, seed: int = 0) -> float:
    """Best realized |phi + psi|_p^p over randomized admissible candidates.

    Deterministic for a given seed, and monotone in the budget: candidates
    are drawn in fixed chunks, each completed chunk additionally refines its
    best candidates with a chunk-seeded local search, so a larger budget
    only ever adds candidates.
    """
    if budget < 1:
        raise PreconditionError(f"budget must be at least 1, got {budget!r}")
    seed = int(seed)
    if seed < 0:
        raise PreconditionError("seed must be a nonnegative integer")
    reason = violated_inequality(x, e)
    if reason is not None:
        raise DomainError(f"infeasible norm data {tuple(x)}: {reason}")
    p = e.p
    if x.x1 == 0.0 and x.x2 == 0.0 and x.x3 == 0.0:
        return 0.0
    best = -np.inf
    # Deterministic boundary candidates: a single atom realizes the data
    # whenever the third constraint is already consistent with (r1, +-r2).
    r1, r2 = x.x1 ** (1.0 / p), x.x2 ** (1.0 / p)
    for b0 in (r2, -r2):
        if abs(abs(r1 - b0) ** p - x.x3) <= 1e-9 * max(1.0, x.x3):
            best = max(best, abs(r1 + b0) ** p)
    xvec = np.array([x.x1, x.x2, x.x3])
    rng = np.random.default_rng(seed)
    done = 0
    chunk_idx = 0
    while done < budget:
        m = min(_CHUNK, budget - done)
        ab = np.clip(rng.standard_cauchy((m, 6)), -_VALUE_CLIP, _VALUE_CLIP)
        a, b = ab[:, :3], ab[:, 3:]
        vals = _candidate_values(a, b, xvec, p)
        top = float(vals.max())
        if top > best:
            best = top
        if m == _CHUNK:
            refine_rng = np.random.default_rng(np.random.SeedSequence([seed, 104729, chunk_idx]))
            best = max(best, _refine_chunk(a, b, vals, xvec, p, refine_rng))
        done += m
        chunk_idx += 1
    return float(best)
