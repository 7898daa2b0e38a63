"""Figure rendering for the report path.

All functions take data already computed elsewhere and write a PNG; nothing
here recomputes values, so the figures always match the delimited output
emitted alongside them.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .boundary import arc_curve
from .domain import Exponent

__all__ = [
    "save_modulus_figure",
    "save_torsion_figure",
    "save_foliation_figure",
    "save_surface_figure",
]

plt.rcParams.update({"figure.dpi": 130, "axes.grid": True, "grid.alpha": 0.3})


def save_modulus_figure(eps: np.ndarray, delta: np.ndarray, p: float, path: str) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(eps, delta, lw=1.5)
    ax.set_xlabel(r"$\varepsilon$")
    ax.set_ylabel(r"$\delta(\varepsilon)$")
    ax.set_title(f"Modulus of convexity, p = {p:g}")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_torsion_figure(s: np.ndarray, by_arc: dict[int, np.ndarray], p: float, path: str) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for arc in sorted(by_arc):
        ax.plot(s, by_arc[arc], lw=1.2, label=f"arc {arc}")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("s")
    ax.set_ylabel("torsion")
    ax.set_title(f"Boundary torsion, p = {p:g}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _draw_section_outline(ax, e: Exponent, n: int = 400) -> None:
    s = np.linspace(0.0, 1.0, n)
    for arc in (1, 2, 3):
        g1, g2, _ = arc_curve(arc, s, e.p)
        ax.plot(g1, g2, color="k", lw=1.0)


def save_foliation_figure(chords: list[dict], e: Exponent, path: str) -> None:
    """Chord endpoints are given as section coordinate pairs in each dict."""
    fig, ax = plt.subplots(figsize=(4.6, 4.2))
    _draw_section_outline(ax, e)
    for ch in chords:
        (a1, a2), (b1, b2) = ch["end1"], ch["end2"]
        ax.plot([a1, b1], [a2, b2], color="tab:blue", lw=0.7, alpha=0.8)
    ax.set_xlabel(r"$y_1$")
    ax.set_ylabel(r"$y_2$")
    ax.set_title(f"Foliation chords, p = {e.p:g}")
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_surface_figure(vertices: np.ndarray, e: Exponent, path: str) -> None:
    """Scatter the lifted boundary vertices and the section outline below."""
    fig = plt.figure(figsize=(5.4, 4.4))
    ax = fig.add_subplot(projection="3d")
    ax.scatter(vertices[:, 0], vertices[:, 1], vertices[:, 2], s=2.0, c=vertices[:, 2], cmap="viridis")
    s = np.linspace(0.0, 1.0, 400)
    for arc in (1, 2, 3):
        g1, g2, _ = arc_curve(arc, s, e.p)
        ax.plot(g1, g2, np.zeros_like(g1), color="k", lw=0.6)
    ax.set_xlabel(r"$y_1$")
    ax.set_ylabel(r"$y_2$")
    ax.set_zlabel("value")
    ax.set_title(f"Concave envelope data, p = {e.p:g}")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
