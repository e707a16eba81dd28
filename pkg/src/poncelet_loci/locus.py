"""
Loci of triangle centers over the family of 3-periodic orbits.

The geometric pipeline ``t -> p1 = (a cos t, b sin t) -> orbit -> center``
is the ground truth for everything here. Next to it live three closed-form
parametrizations of the perpendicular-bisector locus, its canonical
equation ``x²/A² + y²/B² = 1``, a least-squares conic fit used as a
numerical converse, and tools that examine how the table parameter covers
the locus (preimage counts, coordinate zeros, winding).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from . import jets
from .centers import CenterKind, triangle_center
from .conic import Ellipse, Point2, caustic_axes, point_at
from .errors import DegeneracyError, DomainError, FitError
from .orbit import ray_trace_vertices


class LocusForm(str, Enum):
    COMPACT = "compact"
    F_FORM = "F_form"
    CAUSTIC_FORM = "caustic_form"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CanonicalEllipse:
    """Axis-aligned ellipse ``x²/sx² + y²/sy² = 1`` centered at the origin.

    ``sx`` and ``sy`` may carry a sign (the bisector locus has ``sy < 0``
    in its natural parametrization); only their magnitudes are semi-axes.
    """

    sx: float
    sy: float

    @property
    def semi_axes(self) -> tuple[float, float]:
        return abs(self.sx), abs(self.sy)

    @property
    def focal_axis(self) -> str:
        return "x" if abs(self.sx) >= abs(self.sy) else "y"

    @property
    def focal_dist(self) -> float:
        hx, hy = self.semi_axes
        big, small = max(hx, hy), min(hx, hy)
        return math.sqrt((big - small) * (big + small))

    def residual(self, x, y):
        """``x²/sx² + y²/sy² - 1``, zero on the ellipse."""
        return (x / self.sx) ** 2 + (y / self.sy) ** 2 - 1.0

    def as_dict(self) -> dict:
        return {
            "sx": self.sx,
            "sy": self.sy,
            "focal_axis": self.focal_axis,
            "focal_dist": self.focal_dist,
        }


class LocusSample(NamedTuple):
    t: float
    p1: Point2
    center: Point2
    center_kind: CenterKind
    residual_canonical: float


def _require_noncircular(E: Ellipse, what: str) -> None:
    if E.is_circle:
        raise DegeneracyError(f"{what} degenerates to a single point on a circular table")


def canonical_axes(E: Ellipse) -> tuple[float, float]:
    """Signed semi-axes ``(A, B)`` of the bisector-center locus."""
    d = E.delta
    return (E.a * E.a - d) / (2.0 * E.a), (E.b * E.b - d) / (2.0 * E.b)


def canonical_circumlocus(E: Ellipse) -> CanonicalEllipse:
    """Canonical ellipse of the perpendicular-bisector center locus.

    Its foci lie on the y axis at distance ``c³ / (2ab)`` from the origin.
    """
    _require_noncircular(E, "the center locus")
    A, B = canonical_axes(E)
    return CanonicalEllipse(A, B)


def incenter_locus_axes(E: Ellipse) -> CanonicalEllipse:
    """Semi-axes of the incenter locus read off its two symmetric orbits.

    At ``t = 0`` the incenter sits at ``(-(δ - b²)/a, 0)`` and at
    ``t = π/2`` at ``(0, (a² - δ)/b)``.
    """
    _require_noncircular(E, "the incenter locus")
    d = E.delta
    return CanonicalEllipse((d - E.b * E.b) / E.a, (E.a * E.a - d) / E.b)


def focal_distance(E: Ellipse) -> float:
    return E.c2 * E.c / (2.0 * E.a * E.b)


# -- closed forms ---------------------------------------------------------

def _compact(E: Ellipse, x1, y1):
    a, b = E.a, E.b
    c2 = E.c2
    A, B = canonical_axes(E)
    a02 = a * ((3.0 * a ** 3 + a * b * b) * A - b * b * c2) / (4.0 * b * b)
    b20 = b * ((a * a * b + 3.0 * b ** 3) * B + a * a * c2) / (4.0 * a * a)
    x2_, y2_ = x1 * x1, y1 * y1
    den = A * A * x2_ + B * B * y2_
    return (
        (x1 / a) * (A ** 3 * x2_ + a02 * y2_) / den,
        (y1 / b) * (b20 * x2_ + B ** 3 * y2_) / den,
    )


def _f_form(E: Ellipse, x1, y1):
    a2, b2 = E.a * E.a, E.b * E.b
    a4, b4 = a2 * a2, b2 * b2
    d = E.delta
    x2_, y2_ = x1 * x1, y1 * y1
    F1 = (b2 * (4 * a4 - a2 * b2 + b4) * d - a2 * b2 * (4 * a4 - 3 * a2 * b2 + 3 * b4)) * x2_ + a4 * (
        (3 * a2 + b2) * d - 3 * a4 + a2 * b2 - 2 * b4
    ) * y2_
    F2 = (b4 * (a2 + 3 * b2) * d - b4 * (2 * a4 - a2 * b2 + 3 * b4)) * x2_ + (
        a2 * (a4 - a2 * b2 + 4 * b4) * d - a2 * b2 * (3 * a4 - 3 * a2 * b2 + 4 * b4)
    ) * y2_
    F3 = (2 * a2 * b2 * d - b2 * (2 * a4 - a2 * b2 + b4)) * x2_ + (
        2 * a2 * b2 * d - a2 * (2 * b4 + a4 - a2 * b2)
    ) * y2_
    return x1 * F1 / (2.0 * a2 * F3), y1 * F2 / (2.0 * b2 * F3)


def _caustic_form(E: Ellipse, x1, y1):
    a2, b2 = E.a * E.a, E.b * E.b
    a4, b4 = a2 * a2, b2 * b2
    a1, b1 = caustic_axes(E)
    A12, B12 = a1 * a1, b1 * b1
    x2_, y2_ = x1 * x1, y1 * y1
    den = B12 * x2_ + A12 * y2_
    xnum = b2 * (B12 * (b4 - b2 * a2 + 4 * a4) - b4 * b2) * x2_ + a4 * (
        b2 * B12 - b4 + 3 * B12 * a2
    ) * y2_
    ynum = b4 * (A12 * a2 - a4 + 3 * A12 * b2) * x2_ + a2 * (
        A12 * (a4 - b2 * a2 + 4 * b4) - a4 * a2
    ) * y2_
    return (x1 / 4.0) * xnum / (den * a4 * b2), (y1 / 4.0) * ynum / (den * a2 * b4)


_FORMS = {
    LocusForm.COMPACT: _compact,
    LocusForm.F_FORM: _f_form,
    LocusForm.CAUSTIC_FORM: _caustic_form,
}


def locus_param_xy(E: Ellipse, x1, y1, form=LocusForm.COMPACT) -> Point2:
    """Closed-form bisector center for table point ``(x1, y1)``.

    Works on floats, arrays and jets.
    """
    _require_noncircular(E, "the center locus")
    form = LocusForm(form)
    scale = E.a ** 2
    den = E.b ** 2 * x1 * x1 + E.a ** 2 * y1 * y1
    if np.any(np.abs(jets.value(den)) < 1e-14 * scale * E.b ** 2):
        raise DegeneracyError("closed-form locus denominator vanishes")
    x, y = _FORMS[form](E, x1, y1)
    return Point2(x, y)


def locus_param(E: Ellipse, t, form=LocusForm.COMPACT) -> Point2:
    """Closed-form bisector center at table parameter ``t``."""
    p1 = point_at(E, t)
    return locus_param_xy(E, p1.x, p1.y, form)


# -- geometric pipeline ---------------------------------------------------

def pipeline_center(E: Ellipse, t, kind=CenterKind.BISECTOR) -> Point2:
    """Center of the orbit through ``point_at(E, t)``; ``t`` may be an array or jet."""
    p1 = point_at(E, t)
    p2, p3, _, _ = ray_trace_vertices(E, p1.x, p1.y)
    return triangle_center(kind, p1, p2, p3)


def locus_curve(E: Ellipse, kind=CenterKind.BISECTOR, method: str = "closed_form", form=LocusForm.COMPACT):
    """Jet-evaluable parametrization ``t -> center`` of a center locus.

    ``method="closed_form"`` (bisector centers only) evaluates the chosen
    closed form; ``method="pipeline"`` differentiates straight through the
    orbit construction.
    """
    kind = CenterKind(kind)
    if method == "closed_form":
        if kind is not CenterKind.BISECTOR:
            raise DomainError("closed forms exist only for the bisector center")
        return lambda t: tuple(locus_param(E, t, form))
    if method == "pipeline":
        return lambda t: tuple(pipeline_center(E, t, kind))
    raise DomainError(f"unknown locus method {method!r}")


def sample_grid(n: int) -> np.ndarray:
    return np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)


def sample_locus(E: Ellipse, center_kind=CenterKind.BISECTOR, n: int = 1000) -> list[LocusSample]:
    """Sample the locus at ``n`` equally spaced table parameters.

    ``residual_canonical`` measures each center against the canonical
    bisector-locus ellipse, for either center kind, so incenter samples show
    how far that locus is from it. On a circle every center is the origin
    and the residual is the center's distance from it divided by ``a``.
    """
    if n < 8:
        raise DomainError(f"need at least 8 samples, got {n}")
    kind = CenterKind(center_kind)
    t = sample_grid(n)
    p1 = point_at(E, t)
    xc, yc = pipeline_center(E, t, kind)
    if E.is_circle:
        res = np.hypot(xc, yc) / E.a
    else:
        res = canonical_circumlocus(E).residual(xc, yc)
    return [
        LocusSample(float(t[i]), Point2(float(p1.x[i]), float(p1.y[i])),
                    Point2(float(xc[i]), float(yc[i])), kind, float(res[i]))
        for i in range(n)
    ]


# -- conic fit ------------------------------------------------------------

AXIS_ALIGNED_TOL = 1e-7


@dataclass(frozen=True)
class ConicFit:
    ellipse: CanonicalEllipse
    fit_residual: float
    coefficients: tuple[float, float, float, float, float]

    def as_dict(self) -> dict:
        sx, sy = self.ellipse.semi_axes
        return {"sx": sx, "sy": sy, "fit_residual": self.fit_residual}


def fit_axis_aligned_conic(points) -> ConicFit:
    """Least-squares fit of ``αx² + βy² + γxy + δx + εy = 1``.

    Coordinates are scaled by their RMS radius before solving. The fit is
    accepted only if the cross and linear terms are negligible (below
    ``1e-7`` of the largest quadratic coefficient, in scaled units), i.e.
    the conic is an axis-aligned ellipse centered at the origin.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(np.unique(np.round(pts, 14), axis=0)) < 6:
        raise FitError("need at least 6 distinct points")
    x, y = pts[:, 0], pts[:, 1]
    s = math.sqrt(float(np.mean(x * x + y * y)))
    if s == 0.0:
        raise FitError("all points at the origin")
    u, v = x / s, y / s
    design = np.column_stack([u * u, v * v, u * v, u, v])
    coef, _, rank, _ = np.linalg.lstsq(design, np.ones_like(u), rcond=None)
    if rank < 5:
        raise FitError("singular normal equations")
    al, be, ga, de, ep = coef
    quad = max(abs(al), abs(be))
    if al <= 0.0 or be <= 0.0:
        raise FitError("fitted conic is not an ellipse")
    if max(abs(ga), abs(de), abs(ep)) > AXIS_ALIGNED_TOL * quad:
        raise FitError(
            f"fitted conic is not axis-aligned and centered "
            f"(|γ|={abs(ga):.2e}, |δ|={abs(de):.2e}, |ε|={abs(ep):.2e} vs {quad:.2e})"
        )
    alpha, beta = al / s ** 2, be / s ** 2
    residual = float(np.max(np.abs(alpha * x * x + beta * y * y - 1.0)))
    coefficients = (float(alpha), float(beta), float(ga / s ** 2), float(de / s), float(ep / s))
    return ConicFit(CanonicalEllipse(1.0 / math.sqrt(alpha), 1.0 / math.sqrt(beta)), residual, coefficients)


def fit_locus(E: Ellipse, center_kind=CenterKind.BISECTOR, n: int = 1000) -> ConicFit:
    samples = sample_locus(E, center_kind, n)
    return fit_axis_aligned_conic([s.center for s in samples])


# -- covering structure ---------------------------------------------------

COVERING_SCAN = 10_000
COVERING_MATCH_TOL = 1e-7
COVERING_PROBE_TOL = 1e-6
COVERING_CLUSTER_DT = 1e-4
POLISH_STEPS = 12


def locus_preimages(E: Ellipse, center_kind, probe, scan: int = COVERING_SCAN) -> list[tuple[float, float]]:
    """Table parameters whose center lies on ``probe``, with their distances.

    Local minima of ``|center(t) - probe|`` on a dense grid are polished by
    Gauss-Newton steps (first derivatives from jets) and clustered by
    parameter distance.
    """
    kind = CenterKind(center_kind)
    px, py = float(probe[0]), float(probe[1])
    t = sample_grid(scan)
    xc, yc = pipeline_center(E, t, kind)
    dist = np.hypot(xc - px, yc - py)
    is_min = (dist <= np.roll(dist, 1)) & (dist <= np.roll(dist, -1))
    s = t[is_min].copy()
    for _ in range(POLISH_STEPS):
        cx, cy = pipeline_center(E, jets.Jet4.variable(s), kind)
        rx, ry = cx.value - px, cy.value - py
        vx, vy = cx.derivative(1), cy.derivative(1)
        step = -(rx * vx + ry * vy) / (vx * vx + vy * vy)
        s = s + np.clip(step, -2.0 * np.pi / scan, 2.0 * np.pi / scan)
    s = np.mod(s, 2.0 * np.pi)
    fx, fy = pipeline_center(E, s, kind)
    d = np.hypot(fx - px, fy - py)
    found = sorted(zip(s.tolist(), d.tolist()))
    clustered: list[tuple[float, float]] = []
    for si, di in found:
        if clustered and _circular_gap(si, clustered[-1][0]) < COVERING_CLUSTER_DT:
            if di < clustered[-1][1]:
                clustered[-1] = (si, di)
            continue
        clustered.append((si, di))
    if len(clustered) > 1 and _circular_gap(clustered[0][0], clustered[-1][0]) < COVERING_CLUSTER_DT:
        first, last = clustered[0], clustered.pop()
        clustered[0] = min(first, last, key=lambda sd: sd[1])
    return clustered


def _circular_gap(s1: float, s2: float) -> float:
    g = abs(s1 - s2) % (2.0 * np.pi)
    return min(g, 2.0 * np.pi - g)


def covering_degree(E: Ellipse, center_kind, probe) -> int:
    """Number of table parameters in ``[0, 2π)`` mapped onto ``probe``."""
    _require_noncircular(E, "the center locus")
    pre = locus_preimages(E, center_kind, probe)
    best = min(d for _, d in pre)
    if best > COVERING_PROBE_TOL:
        raise DomainError(f"probe is {best:.3e} away from the locus")
    return sum(1 for _, d in pre if d < COVERING_MATCH_TOL)


ZERO_SCAN = 100_000


def coordinate_zeros(E: Ellipse, center_kind=CenterKind.BISECTOR, scan: int = ZERO_SCAN):
    """Zeros in ``[0, 2π)`` of the center's x and y coordinates along ``t``.

    Sign changes are located on a grid of ``scan`` points (exact zeros on
    grid nodes are skipped over) and refined with Brent's method.
    """
    _require_noncircular(E, "the center locus")
    kind = CenterKind(center_kind)
    t = sample_grid(scan)
    c = pipeline_center(E, t, kind)
    h = 2.0 * np.pi / scan
    out = []
    for coord in (0, 1):
        sign = np.sign(np.asarray(c[coord]))
        nz = np.flatnonzero(sign != 0)
        roots = []
        for j, k in zip(nz, np.roll(nz, -1)):
            if sign[j] == sign[k]:
                continue
            if (k - j) % scan != 1:
                # exact zero on the grid node(s) between j and k
                roots.append(float(t[(j + 1) % scan]))
                continue

            def g(s, coord=coord):
                return float(pipeline_center(E, np.array([s]), kind)[coord][0])

            lo, hi = t[j], t[j] + h
            glo, ghi = g(lo), g(hi)
            if glo * ghi > 0.0:
                # grid value rounded to the other side of zero
                root = lo if abs(glo) <= abs(ghi) else hi
            else:
                root = brentq(g, lo, hi, xtol=1e-15)
            roots.append(root % (2.0 * np.pi))
        out.append(sorted(roots))
    return out[0], out[1]


def coordinate_zero_count(E: Ellipse, center_kind=CenterKind.BISECTOR) -> tuple[int, int]:
    zx, zy = coordinate_zeros(E, center_kind)
    return len(zx), len(zy)


def winding_angle(E: Ellipse, center_kind=CenterKind.BISECTOR, n: int = 20_000) -> float:
    """Angle swept around the origin by the center over one table period."""
    _require_noncircular(E, "the center locus")
    t = np.linspace(0.0, 2.0 * np.pi, n + 1)
    xc, yc = pipeline_center(E, t, CenterKind(center_kind))
    theta = np.arctan2(yc, xc)
    step = np.angle(np.exp(1j * np.diff(theta)))
    return float(np.sum(step))


# -- containment ----------------------------------------------------------

def containment_threshold(a: float) -> float:
    """Smallest ``b`` for which the bisector locus fits inside the table."""
    if a <= 0.0:
        raise DomainError("a must be positive")
    return a / 4.0 * math.sqrt(math.sqrt(33.0) - 1.0)


def locus_contained(E: Ellipse) -> bool:
    """Whether ``|A| <= a`` and ``|B| <= b`` for the bisector locus."""
    A, B = canonical_axes(E)
    return abs(A) <= E.a and abs(B) <= E.b
