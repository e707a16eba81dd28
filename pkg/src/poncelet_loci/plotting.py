"""
Matplotlib figures for the report paths of the CLI.

Figures are written straight to files (format from the file suffix) with
the non-interactive Agg backend.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .conic import Ellipse, caustic_axes  # noqa: E402

COLORS = {
    "table": "#1f3b73",
    "caustic": "#2e8b57",
    "orbit": "#c0392b",
    "bisector": "#8e44ad",
    "incenter": "#d68910",
}


def _style(ax, title=None):
    ax.set_aspect("equal")
    ax.grid(True, lw=0.3, alpha=0.5)
    ax.tick_params(labelsize=8)
    if title:
        ax.set_title(title, fontsize=10)


def _ellipse(ax, a, b, **kw):
    t = np.linspace(0.0, 2.0 * np.pi, 721)
    ax.plot(a * np.cos(t), b * np.sin(t), **kw)


def _tables(ax, E: Ellipse):
    _ellipse(ax, E.a, E.b, color=COLORS["table"], lw=1.4, label="table")
    a1, b1 = caustic_axes(E)
    _ellipse(ax, a1, b1, color=COLORS["caustic"], lw=1.0, ls="--", label="caustic")


def orbit_figure(E: Ellipse, orbit, path, centers=None):
    """Table, caustic and one orbit, optionally with its centers marked."""
    fig, ax = plt.subplots(figsize=(6, 6 * max(E.b / E.a, 0.4)))
    _tables(ax, E)
    xs = [p.x for p in orbit.vertices] + [orbit.p1.x]
    ys = [p.y for p in orbit.vertices] + [orbit.p1.y]
    ax.plot(xs, ys, color=COLORS["orbit"], lw=1.0, marker="o", ms=3, label="orbit")
    for kind, c in (centers or {}).items():
        ax.plot([c[0]], [c[1]], "x", color=COLORS.get(kind, "k"), ms=6, label=f"{kind} center")
    _style(ax, f"3-periodic orbit, a={E.a:g}, b={E.b:g}")
    ax.legend(fontsize=7, loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def locus_figure(E: Ellipse, loci: dict, path, fits: dict | None = None):
    """Table, caustic and the sampled center loci; fitted axes in the legend."""
    fig, ax = plt.subplots(figsize=(6.5, 5))
    _tables(ax, E)
    for kind, pts in loci.items():
        pts = np.asarray(pts, dtype=float)
        label = f"{kind} locus"
        if fits and kind in fits:
            sx, sy = fits[kind].ellipse.semi_axes
            label += f" ({sx:.6g}, {sy:.6g})"
        ax.plot(np.append(pts[:, 0], pts[0, 0]), np.append(pts[:, 1], pts[0, 1]),
                color=COLORS.get(kind, "k"), lw=1.0, label=label)
    _style(ax, f"center loci, a={E.a:g}, b={E.b:g}")
    ax.legend(fontsize=7, loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def curvature_figure(t, k, path, expected=None, title=None):
    """Affine curvature along the parameter, with the expected constant."""
    fig, ax = plt.subplots(figsize=(6.5, 3.2))
    ax.plot(t, k, color=COLORS["bisector"], lw=1.0, label="affine curvature")
    if expected is not None:
        ax.axhline(expected, color="k", lw=0.6, ls=":", label=f"expected {expected:.8g}")
    ax.set_xlabel("t", fontsize=9)
    ax.set_xlim(t[0], t[-1])
    ax.grid(True, lw=0.3, alpha=0.5)
    ax.tick_params(labelsize=8)
    ax.ticklabel_format(axis="y", useOffset=False)
    if title:
        ax.set_title(title, fontsize=10)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
