"""
Triangle centers.

``perpendicular_bisector_center`` is the point equidistant from the three
vertices, evaluated by the rational formula obtained from intersecting two
perpendicular bisectors. ``angle_bisector_center`` is the classical
incenter, equidistant from the three side lines. Both accept floats,
arrays or jets coordinate-wise.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from . import jets
from .conic import Point2
from .errors import DegeneracyError

DEGENERACY_TOL = 1e-12


class CenterKind(str, Enum):
    BISECTOR = "bisector"
    INCENTER = "incenter"

    def __str__(self):
        return self.value


def _check_triangle(p1, p2, p3):
    x = [jets.value(p[0]) for p in (p1, p2, p3)]
    y = [jets.value(p[1]) for p in (p1, p2, p3)]
    det = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0])
    scale2 = np.maximum.reduce(
        [(x[i] - x[j]) ** 2 + (y[i] - y[j]) ** 2 for i, j in ((0, 1), (1, 2), (2, 0))]
    )
    if np.any(np.abs(det) <= DEGENERACY_TOL * scale2) or np.any(scale2 == 0.0):
        raise DegeneracyError("triangle vertices are collinear")


def perpendicular_bisector_center(p1, p2, p3) -> Point2:
    """Intersection of the perpendicular bisectors of the triangle's sides."""
    _check_triangle(p1, p2, p3)
    (x1, y1), (x2, y2), (x3, y3) = p1, p2, p3
    r1 = x1 * x1 + y1 * y1
    r2 = x2 * x2 + y2 * y2
    r3 = x3 * x3 + y3 * y3
    xc = 0.5 * (r1 * (y2 - y3) + r2 * (y3 - y1) + r3 * (y1 - y2)) / (
        x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2)
    )
    yc = 0.5 * (r1 * (x3 - x2) + r2 * (x1 - x3) + r3 * (x2 - x1)) / (
        y1 * (x3 - x2) + y2 * (x1 - x3) + y3 * (x2 - x1)
    )
    return Point2(xc, yc)


def angle_bisector_center(p1, p2, p3) -> Point2:
    """Incenter: vertices weighted by the lengths of their opposite sides."""
    _check_triangle(p1, p2, p3)
    (x1, y1), (x2, y2), (x3, y3) = p1, p2, p3
    l1 = jets.sqrt((x2 - x3) ** 2 + (y2 - y3) ** 2)
    l2 = jets.sqrt((x3 - x1) ** 2 + (y3 - y1) ** 2)
    l3 = jets.sqrt((x1 - x2) ** 2 + (y1 - y2) ** 2)
    perimeter = l1 + l2 + l3
    return Point2(
        (l1 * x1 + l2 * x2 + l3 * x3) / perimeter,
        (l1 * y1 + l2 * y2 + l3 * y3) / perimeter,
    )


def triangle_center(kind, p1, p2, p3) -> Point2:
    kind = CenterKind(kind)
    if kind is CenterKind.BISECTOR:
        return perpendicular_bisector_center(p1, p2, p3)
    return angle_bisector_center(p1, p2, p3)
