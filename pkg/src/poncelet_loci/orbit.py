"""
Construction of the 3-periodic billiard orbit through a point of the table.

Two independent routes produce the other two vertices:

* :func:`build_orbit` traces the two rays leaving ``p1`` at the reflection
  angle and intersects them with the ellipse;
* :func:`closed_form_vertices` evaluates the rational vertex formulas
  directly in ``(x1, y1, cos α, sin α)``.

The core routines are written against plain arithmetic so that they run
unchanged on floats, numpy arrays and :class:`~poncelet_loci.jets.Jet4`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import jets
from .conic import (
    Ellipse,
    Point2,
    caustic_axes,
    check_on_ellipse,
    frame_vectors,
    line_tangency_residual,
    point_at,
)
from .errors import DegeneracyError, DomainError

ORBIT_ON_ELLIPSE_TOL = 1e-10


@dataclass(frozen=True)
class OrbitTriangle:
    p1: Point2
    p2: Point2
    p3: Point2
    alpha: float

    @property
    def vertices(self) -> tuple[Point2, Point2, Point2]:
        return (self.p1, self.p2, self.p3)


def _quadratic_coefficients(E: Ellipse, w):
    """Coefficients of ``c⁴ w² u² + 2 (a² + b²) w u - 3`` with ``w = |T1|²``."""
    c4 = E.c2 * E.c2
    s = E.a * E.a + E.b * E.b
    return c4 * w * w, 2.0 * s * w, -3.0


def cos2_alpha(E: Ellipse, x1, y1, polish: bool = True):
    """``u = cos²α`` at ``(x1, y1)``, positive root of the reflection quadratic.

    Evaluated as ``3 / (w ((a²+b²) + sqrt((a²+b²)² + 3 c⁴)))``, which has no
    cancellation and reduces to ``3 / (4 a² w)`` on a circle. A single
    Newton step polishes the root.
    """
    a2, b2 = E.a * E.a, E.b * E.b
    w = x1 * x1 / (a2 * a2) + y1 * y1 / (b2 * b2)
    s = a2 + b2
    u = 3.0 / (w * (s + math.sqrt(s * s + 3.0 * E.c2 * E.c2)))
    if polish:
        q2, q1, q0 = _quadratic_coefficients(E, w)
        u = u - (q2 * u * u + q1 * u + q0) / (2.0 * q2 * u + q1)
    return u


def reflection_quartic(E: Ellipse, x1, y1, cos_alpha):
    """Normalized quartic in ``cos α``; zero at the reflection angle."""
    a2, b2 = E.a * E.a, E.b * E.b
    w = x1 * x1 / (a2 * a2) + y1 * y1 / (b2 * b2)
    c2a = cos_alpha * cos_alpha
    return E.c2 * E.c2 * w * w * c2a * c2a + 2.0 * (a2 + b2) * w * c2a - 3.0


def reflection_angle(E: Ellipse, p1) -> float:
    """Reflection angle ``α ∈ (0, π/2)`` of the 3-periodic orbit through ``p1``."""
    check_on_ellipse(E, p1)
    u = float(cos2_alpha(E, float(p1[0]), float(p1[1])))
    return math.acos(math.sqrt(min(u, 1.0)))


def ray_trace_vertices(E: Ellipse, x1, y1):
    """Second intersections of the two reflection rays from ``(x1, y1)``.

    Returns ``(p2, p3, cos α, sin α)``; works on floats, arrays and jets.
    The root ``s = 0`` of the ray/ellipse quadratic is factored out, so the
    remaining root is a single quotient.
    """
    u = cos2_alpha(E, x1, y1)
    ca = jets.sqrt(u)
    sa = jets.sqrt(1.0 - u)
    T, N, norm = frame_vectors(E, x1, y1)
    tx, ty = T.x / norm, T.y / norm
    nx, ny = N.x / norm, N.y / norm
    a2, b2 = E.a * E.a, E.b * E.b
    out = []
    for sign in (1.0, -1.0):
        dx = sign * sa * tx + ca * nx
        dy = sign * sa * ty + ca * ny
        lin = x1 * dx / a2 + y1 * dy / b2
        quad = dx * dx / a2 + dy * dy / b2
        s = -2.0 * lin / quad
        out.append(Point2(x1 + s * dx, y1 + s * dy))
    return out[0], out[1], ca, sa


def build_orbit(E: Ellipse, p1) -> OrbitTriangle:
    """The unique 3-periodic orbit through ``p1`` by ray tracing."""
    check_on_ellipse(E, p1)
    x1, y1 = float(p1[0]), float(p1[1])
    p2, p3, ca, sa = ray_trace_vertices(E, x1, y1)
    alpha = math.atan2(float(sa), float(ca))
    return OrbitTriangle(
        Point2(x1, y1),
        Point2(float(p2.x), float(p2.y)),
        Point2(float(p3.x), float(p3.y)),
        alpha,
    )


def orbit_at(E: Ellipse, t: float) -> OrbitTriangle:
    """Orbit through the point of parameter ``t`` on the table."""
    return build_orbit(E, point_at(E, float(t)))


def closed_form_from_cos_sin(E: Ellipse, x1, y1, C, S):
    """Rational vertex formulas in ``(x1, y1)`` and ``(cos α, sin α)``.

    The cubic ``x1³`` coefficient of the third vertex's abscissa is taken as
    ``b⁴ (a² - (a² + b²) cos²α)``, mirroring the second vertex.
    """
    a, b = E.a, E.b
    a2, b2 = a * a, b * b
    a4, b4 = a2 * a2, b2 * b2
    c2 = E.c2
    C2 = C * C
    CS = C * S
    x2_, y2_ = x1 * x1, y1 * y1
    x3_, y3_ = x2_ * x1, y2_ * y1

    sym_q = b4 * (a2 - c2 * C2) * x2_ + a4 * (b2 + c2 * C2) * y2_
    cross_q = 2.0 * a2 * b2 * c2 * CS * x1 * y1

    p2x = (
        -b4 * ((a2 + b2) * C2 - a2) * x3_
        - 2.0 * a4 * a2 * CS * y3_
        + a4 * ((a2 - 3.0 * b2) * C2 + b2) * x1 * y2_
        - 2.0 * a4 * b2 * CS * x2_ * y1
    )
    p2y = (
        2.0 * b4 * b2 * CS * x3_
        - a4 * ((a2 + b2) * C2 - b2) * y3_
        + 2.0 * a2 * b4 * CS * x1 * y2_
        + b4 * ((b2 - 3.0 * a2) * C2 + a2) * x2_ * y1
    )
    q2 = sym_q - cross_q

    p3x = (
        b4 * (a2 - (b2 + a2) * C2) * x3_
        + 2.0 * a4 * a2 * CS * y3_
        + a4 * (C2 * (a2 - 3.0 * b2) + b2) * x1 * y2_
        + 2.0 * a4 * b2 * CS * x2_ * y1
    )
    p3y = (
        -2.0 * b4 * b2 * CS * x3_
        + a4 * (b2 - (b2 + a2) * C2) * y3_
        - 2.0 * a2 * b4 * CS * x1 * y2_
        + b4 * (a2 + (b2 - 3.0 * a2) * C2) * x2_ * y1
    )
    q3 = sym_q + cross_q

    scale = a4 * a4
    for q in (q2, q3):
        if np.any(np.abs(jets.value(q)) < 1e-12 * scale):
            raise DegeneracyError("vertex formula denominator vanishes")
    return Point2(p2x / q2, p2y / q2), Point2(p3x / q3, p3y / q3)


def closed_form_vertices(E: Ellipse, p1, alpha: float) -> tuple[Point2, Point2]:
    """Vertices ``p2, p3`` from the rational formulas at reflection angle ``alpha``."""
    x1, y1 = float(p1[0]), float(p1[1])
    p2, p3 = closed_form_from_cos_sin(E, x1, y1, math.cos(alpha), math.sin(alpha))
    return Point2(float(p2.x), float(p2.y)), Point2(float(p3.x), float(p3.y))


def _reflection_defect(E: Ellipse, p, q, r) -> float:
    _, N, norm = frame_vectors(E, p[0], p[1])
    out = []
    for other in (q, r):
        vx, vy = other[0] - p[0], other[1] - p[1]
        out.append((vx * N.x + vy * N.y) / (math.hypot(vx, vy) * norm))
    return abs(out[0] - out[1])


def orbit_residuals(E: Ellipse, orbit: OrbitTriangle) -> dict[str, float]:
    """Magnitudes of the reflection and caustic-tangency defects of an orbit.

    The reflection defect at a vertex is the difference between the cosines
    of the angles that the two incident sides make with the normal there.
    """
    p1, p2, p3 = orbit.vertices
    for p in (p1, p2, p3):
        check_on_ellipse(E, p)
    scale = 1e-14 * E.a
    for p, q in ((p1, p2), (p2, p3), (p3, p1)):
        if math.hypot(q[0] - p[0], q[1] - p[1]) <= scale:
            raise DomainError("orbit has coincident vertices")
    a1, b1 = caustic_axes(E)
    return {
        "reflection_p1": _reflection_defect(E, p1, p2, p3),
        "reflection_p2": _reflection_defect(E, p2, p3, p1),
        "reflection_p3": _reflection_defect(E, p3, p1, p2),
        "tangency_12": abs(line_tangency_residual(p1, p2, a1, b1)),
        "tangency_23": abs(line_tangency_residual(p2, p3, a1, b1)),
        "tangency_31": abs(line_tangency_residual(p3, p1, a1, b1)),
    }
