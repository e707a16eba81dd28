"""
Equi-affine curvature of convex plane curves.

A curve is any callable ``t -> (x, y)`` that accepts a
:class:`~poncelet_loci.jets.Jet4` parameter and returns jets; the curvature
is then assembled from exact derivatives up to order four:

    k_a = (4[γ'',γ'''] + [γ',γ'''']) / (3 [γ',γ'']^(5/3))
          - (5/9) [γ',γ''']² / [γ',γ'']^(8/3)

with ``[u, v] = u1 v2 - u2 v1``. The value is invariant under
area-preserving affine maps and is constant exactly along ellipses.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .jets import Jet4

Curve = Callable[[Jet4], tuple]


def _bracket(u, v):
    return u[0] * v[1] - u[1] * v[0]


def curve_derivatives(curve: Curve, t) -> np.ndarray:
    """Derivatives of orders 0..4 of ``curve`` at ``t``, shape ``(5, 2, ...)``."""
    x, y = curve(Jet4.variable(t))
    return np.stack([_as_jet(x, t).derivatives, _as_jet(y, t).derivatives], axis=1)


def _as_jet(v, t):
    if isinstance(v, Jet4):
        return v
    return Jet4.constant(np.broadcast_to(np.asarray(v, dtype=float), np.shape(t)))


def affine_curvature_from_derivatives(d) -> np.ndarray:
    """Affine curvature from stacked derivatives ``d[k] = (x^(k), y^(k))``."""
    g1, g2, g3, g4 = d[1], d[2], d[3], d[4]
    b12 = _bracket(g1, g2)
    if np.any(b12 <= 0.0):
        raise DomainError("curve is not convex and positively oriented here ([γ',γ''] <= 0)")
    b13 = _bracket(g1, g3)
    b14 = _bracket(g1, g4)
    b23 = _bracket(g2, g3)
    root = np.cbrt(b12)
    return (4.0 * b23 + b14) / (3.0 * b12 * root ** 2) - (5.0 / 9.0) * b13 ** 2 / (
        b12 ** 2 * root ** 2
    )


def affine_curvature(curve: Curve, t):
    """Affine curvature of ``curve`` at ``t`` (float or array of parameters)."""
    k = affine_curvature_from_derivatives(curve_derivatives(curve, t))
    return float(k) if np.ndim(k) == 0 else k


@dataclass(frozen=True)
class ConstancyReport:
    mean: float
    max_abs_dev: float
    rel_std: float
    n: int

    def as_dict(self) -> dict:
        return asdict(self)


def constancy_report(curve: Curve, n: int = 1000, t0: float = 0.0) -> ConstancyReport:
    """Statistics of the affine curvature at ``n`` equally spaced parameters."""
    if n < 16:
        raise DomainError(f"need at least 16 samples, got {n}")
    t = t0 + np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    k = np.asarray(affine_curvature(curve, t))
    mean = float(np.mean(k))
    return ConstancyReport(
        mean=mean,
        max_abs_dev=float(np.max(np.abs(k - mean))),
        rel_std=float(np.std(k) / abs(mean)),
        n=n,
    )


def ellipse_curve(a: float, b: float) -> Curve:
    """Parametrization ``t -> (a cos t, b sin t)``."""
    from .jets import cos, sin

    def curve(t):
        return a * cos(t), b * sin(t)

    return curve


def transformed_curve(curve: Curve, matrix, offset=(0.0, 0.0)) -> Curve:
    """``t -> M γ(t) + v``, handy for invariance checks."""
    (m00, m01), (m10, m11) = np.asarray(matrix, dtype=float)

    def mapped(t):
        x, y = curve(t)
        return m00 * x + m01 * y + offset[0], m10 * x + m11 * y + offset[1]

    return mapped
