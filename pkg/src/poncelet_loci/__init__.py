"""Loci of triangle centers over 3-periodic orbits of the elliptic billiard."""

__version__ = "0.1.0"

from .centers import CenterKind, angle_bisector_center, perpendicular_bisector_center, triangle_center
from .conic import Ellipse, Point2, caustic_axes, point_at
from .errors import (
    DegeneracyError,
    DomainError,
    FitError,
    InversionError,
    OrientationError,
    PonceletError,
)
from .orbit import OrbitTriangle, build_orbit, orbit_at, orbit_residuals

__all__ = [
    "CenterKind",
    "DegeneracyError",
    "DomainError",
    "Ellipse",
    "FitError",
    "InversionError",
    "OrbitTriangle",
    "OrientationError",
    "Point2",
    "PonceletError",
    "angle_bisector_center",
    "build_orbit",
    "caustic_axes",
    "orbit_at",
    "orbit_residuals",
    "perpendicular_bisector_center",
    "point_at",
    "triangle_center",
]
