"""
Ellipse arithmetic: points, tangent/normal frames, the confocal caustic of
the 3-periodic billiard family, and a line tangency residual.

Functions here accept plain floats; most of them also broadcast over numpy
arrays, and :func:`point_at` and :func:`frame_vectors` accept
:class:`~poncelet_loci.jets.Jet4` parameters as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import jets
from .errors import DomainError, OrientationError

ON_ELLIPSE_TOL = 1e-9


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Ellipse:
    """Billiard table ``x²/a² + y²/b² = 1`` with ``a >= b > 0``.

    Use :func:`ellipse_new` (or the constructor) to build one; the axes
    are validated on construction.
    """

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)) or a <= 0.0 or b <= 0.0:
            raise DomainError(f"ellipse axes must be positive and finite, got a={a}, b={b}")
        if a < b:
            raise OrientationError(f"major axis must come first: a={a} < b={b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def c2(self) -> float:
        """Squared focal half-distance ``a² - b²``."""
        return (self.a - self.b) * (self.a + self.b)

    @property
    def c(self) -> float:
        return math.sqrt(self.c2)

    @property
    def delta(self) -> float:
        """The invariant ``sqrt(a⁴ - a²b² + b⁴)``."""
        a2, b2 = self.a * self.a, self.b * self.b
        return math.sqrt(a2 * self.c2 + b2 * b2)

    @property
    def is_circle(self) -> bool:
        return self.a == self.b

    def implicit(self, x, y):
        """Normalized implicit value ``x²/a² + y²/b² - 1``."""
        return (x / self.a) ** 2 + (y / self.b) ** 2 - 1.0


class Frame(NamedTuple):
    T: Point2
    N: Point2
    unit_T: Point2
    unit_N: Point2


def ellipse_new(a: float, b: float) -> Ellipse:
    return Ellipse(a, b)


def point_at(E: Ellipse, t) -> Point2:
    """Point ``(a cos t, b sin t)``; ``t`` may be a float, array or jet."""
    return Point2(E.a * jets.cos(t), E.b * jets.sin(t))


def frame_vectors(E: Ellipse, x, y):
    """Unchecked tangent/normal vectors at ``(x, y)`` and their common norm."""
    a2, b2 = E.a * E.a, E.b * E.b
    T = Point2(-y / b2, x / a2)
    N = Point2(-x / a2, -y / b2)
    norm = jets.sqrt(T.x * T.x + T.y * T.y)
    return T, N, norm


def check_on_ellipse(E: Ellipse, p, tol: float = ON_ELLIPSE_TOL) -> None:
    h = np.abs(E.implicit(jets.value(p[0]), jets.value(p[1])))
    if not np.all(h < tol):
        raise DomainError(f"point is off the ellipse: |h| = {np.max(h):.3e} >= {tol:g}")


def frame_at(E: Ellipse, p) -> Frame:
    """Positive orthogonal frame at ``p``; the normal points inward."""
    check_on_ellipse(E, p)
    T, N, norm = frame_vectors(E, p[0], p[1])
    return Frame(T, N, Point2(T.x / norm, T.y / norm), Point2(N.x / norm, N.y / norm))


def caustic_axes(E: Ellipse) -> tuple[float, float]:
    """Semi-axes ``(a1, b1)`` of the confocal caustic of the 3-periodic orbits.

    The closed form is 0/0 for a circle; there the caustic is the incircle
    of the inscribed equilateral triangles, of radius ``a/2``.
    """
    if E.is_circle:
        return E.a / 2.0, E.a / 2.0
    a, b = E.a, E.b
    d = E.delta
    a1 = a * (d - b * b) / E.c2
    b1 = b * (a * a - d) / E.c2
    return a1, b1


def line_tangency_residual(p, q, a1: float, b1: float) -> float:
    """Normalized tangency defect of the line through ``p`` and ``q``.

    Zero iff the line is tangent to ``x²/a1² + y²/b1² = 1``; negative for a
    secant, positive for a line missing the conic. Lines closer to
    horizontal are written ``y = m x + k`` and use ``k² - (a1² m² + b1²)``;
    the others are written ``x = m y + k`` and use ``k² - (b1² m² + a1²)``
    (vertical lines reduce to ``k² - a1²``). Either way the defect is
    divided by ``max(a1², k², 1)``.
    """
    dx = q[0] - p[0]
    dy = q[1] - p[1]
    if dx == 0.0 and dy == 0.0:
        raise DomainError("line through coincident points")
    if abs(dy) <= abs(dx):
        m = dy / dx
        k = p[1] - m * p[0]
        raw = k * k - (a1 * a1 * m * m + b1 * b1)
    else:
        m = dx / dy
        k = p[0] - m * p[1]
        raw = k * k - (b1 * b1 * m * m + a1 * a1)
    return float(raw / max(a1 * a1, k * k, 1.0))
