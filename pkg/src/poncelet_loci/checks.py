"""
Invariant suite run by ``poncelet-loci check``.

Every check evaluates one invariant on one table and returns its worst
residual against a fixed tolerance. Results over several tables are
merged per invariant name. Mismatches between the closed-form locus
parametrizations and the geometric pipeline are reported as WARN, since
the pipeline is the reference for those formulas.
"""

from __future__ import annotations

import math
import time
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable

import mpmath
import numpy as np

from . import affine, axes_map, centers, conic, locus, orbit
from .centers import CenterKind
from .conic import Ellipse, Point2

PASS, WARN, FAIL = "PASS", "WARN", "FAIL"


@dataclass
class CheckResult:
    name: str
    max_residual: float
    tolerance: float
    status: str
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class SuiteReport:
    results: list[CheckResult]
    ellipses: list[tuple[float, float]]
    elapsed: float = 0.0
    status: str = field(init=False)

    def __post_init__(self):
        self.status = FAIL if any(r.status == FAIL for r in self.results) else PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == FAIL]

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "elapsed_s": self.elapsed,
            "ellipses": [list(e) for e in self.ellipses],
            "results": [r.as_dict() for r in self.results],
        }


@dataclass
class SuiteOptions:
    n_samples: int = 1000
    n_probes: int = 100
    n_random: int = 1000
    seed: int = 12345


_CHECKS: list[tuple[str, float, bool, Callable]] = []


def _check(name: str, tol: float, warn_only: bool = False):
    def register(fn):
        _CHECKS.append((name, tol, warn_only, fn))
        return fn

    return register


def _rel(x, ref):
    return abs(x - ref) / max(abs(ref), 1e-300)


# -- conic_core -----------------------------------------------------------

@_check("conic.confocality", 1e-11)
def _confocality(E, opt, rng):
    a1, b1 = conic.caustic_axes(E)
    return _rel(a1 * a1 - b1 * b1, E.c2)


@_check("conic.bilinear_identity", 1e-11)
def _bilinear(E, opt, rng):
    a1, b1 = conic.caustic_axes(E)
    return _rel(E.b * a1 + E.a * b1, E.a * E.b)


@_check("conic.caustic_ordering", 0.0)
def _ordering(E, opt, rng):
    a1, b1 = conic.caustic_axes(E)
    return float(not (0.0 < b1 < a1 < E.a))


@_check("conic.delta_two_forms", 1e-14)
def _delta(E, opt, rng):
    a2, b2 = E.a ** 2, E.b ** 2
    return _rel(a2 * E.c2 + b2 * b2, a2 * a2 - a2 * b2 + b2 * b2)


@_check("conic.frame_orthogonality", 1e-14)
def _frame(E, opt, rng):
    t = rng.uniform(0.0, 2.0 * np.pi, opt.n_random)
    p = conic.point_at(E, t)
    T, N, norm = conic.frame_vectors(E, p.x, p.y)
    dot = np.abs(T.x * N.x + T.y * N.y) / (norm * norm)
    det = T.x * N.y - T.y * N.x
    if np.any(det <= 0.0):
        return math.inf
    return float(np.max(dot))


# -- orbit_builder --------------------------------------------------------

def _random_orbits(E, opt, rng):
    t = rng.uniform(0.0, 2.0 * np.pi, opt.n_random)
    return [orbit.orbit_at(E, s) for s in t]


@_check("orbit.reflection_residual", 1e-10)
def _reflection(E, opt, rng):
    worst = 0.0
    for o in _random_orbits(E, opt, rng):
        r = orbit.orbit_residuals(E, o)
        worst = max(worst, r["reflection_p1"], r["reflection_p2"], r["reflection_p3"])
    return worst


@_check("orbit.caustic_tangency", 1e-8)
def _tangency(E, opt, rng):
    worst = 0.0
    for o in _random_orbits(E, opt, rng):
        r = orbit.orbit_residuals(E, o)
        worst = max(worst, r["tangency_12"], r["tangency_23"], r["tangency_31"])
    return worst


@_check("orbit.closed_form_agreement", 1e-9)
def _closed_form(E, opt, rng):
    t = rng.uniform(0.0, 2.0 * np.pi, opt.n_random)
    p1 = conic.point_at(E, t)
    p2, p3, ca, sa = orbit.ray_trace_vertices(E, p1.x, p1.y)
    q2, q3 = orbit.closed_form_from_cos_sin(E, p1.x, p1.y, ca, sa)
    return float(max(np.max(np.abs(np.subtract(p2, q2))), np.max(np.abs(np.subtract(p3, q3)))))


@_check("orbit.reflection_quartic", 1e-12)
def _quartic(E, opt, rng):
    t = rng.uniform(0.0, 2.0 * np.pi, opt.n_random)
    p1 = conic.point_at(E, t)
    u = orbit.cos2_alpha(E, p1.x, p1.y)
    if np.any((u <= 0.0) | (u > 1.0)):
        return math.inf
    return float(np.max(np.abs(orbit.reflection_quartic(E, p1.x, p1.y, np.sqrt(u)))))


@_check("orbit.uniqueness", 1e-9)
def _uniqueness(E, opt, rng):
    worst = 0.0
    for s in rng.uniform(0.0, 2.0 * np.pi, 20):
        o = orbit.orbit_at(E, s)
        other = orbit.build_orbit(E, o.p2)
        for p in o.vertices:
            worst = max(worst, min(math.dist(p, q) for q in other.vertices))
    return worst


@_check("orbit.symmetric_sides", 1e-12)
def _symmetric(E, opt, rng):
    a1, b1 = conic.caustic_axes(E)
    o = orbit.build_orbit(E, Point2(E.a, 0.0))
    h = orbit.build_orbit(E, Point2(0.0, E.b))
    return max(abs(o.p2.x + a1), abs(o.p3.x + a1), abs(h.p2.y + b1), abs(h.p3.y + b1)) / E.a


# -- centers --------------------------------------------------------------

@_check("centers.vertex_sharing", 1e-9)
def _sharing(E, opt, rng):
    worst = 0.0
    t = rng.uniform(0.0, 2.0 * np.pi, 50)
    for kind in CenterKind:
        for s in t:
            o = orbit.orbit_at(E, s)
            cs = []
            for v in o.vertices:
                tv = math.atan2(v.y / E.b, v.x / E.a)
                cs.append(locus.pipeline_center(E, tv, kind))
            worst = max(worst, math.dist(cs[0], cs[1]), math.dist(cs[1], cs[2]), math.dist(cs[2], cs[0]))
    return worst


@_check("centers.permutation_invariance", 1e-12)
def _permutation(E, opt, rng):
    worst = 0.0
    for s in rng.uniform(0.0, 2.0 * np.pi, 20):
        v = orbit.orbit_at(E, s).vertices
        for kind in CenterKind:
            ref = centers.triangle_center(kind, *v)
            for perm in ((1, 2, 0), (2, 0, 1), (0, 2, 1)):
                c = centers.triangle_center(kind, *(v[i] for i in perm))
                worst = max(worst, math.dist(c, ref) / E.a)
    return worst


@_check("centers.incenter_inside", 0.0)
def _inside(E, opt, rng):
    bad = 0
    for s in rng.uniform(0.0, 2.0 * np.pi, 50):
        p1, p2, p3 = orbit.orbit_at(E, s).vertices
        c = centers.angle_bisector_center(p1, p2, p3)
        bad += int(any(w <= 0.0 for w in barycentric(c, p1, p2, p3)))
    return float(bad)


def barycentric(p, p1, p2, p3):
    det = (p2.x - p1.x) * (p3.y - p1.y) - (p3.x - p1.x) * (p2.y - p1.y)
    l2 = ((p.x - p1.x) * (p3.y - p1.y) - (p3.x - p1.x) * (p.y - p1.y)) / det
    l3 = ((p2.x - p1.x) * (p.y - p1.y) - (p.x - p1.x) * (p2.y - p1.y)) / det
    return 1.0 - l2 - l3, l2, l3


# -- locus_engine ---------------------------------------------------------

@_check("locus.canonical_identity", 1e-8)
def _canonical(E, opt, rng):
    samples = locus.sample_locus(E, CenterKind.BISECTOR, opt.n_samples)
    return max(abs(s.residual_canonical) for s in samples)


@_check("locus.foci", 1e-10)
def _foci(E, opt, rng):
    A, B = locus.canonical_axes(E)
    return _rel(math.sqrt(B * B - A * A), locus.focal_distance(E))


@_check("locus.similarity", 1e-11)
def _similarity(E, opt, rng):
    A, B = locus.canonical_axes(E)
    a1, b1 = conic.caustic_axes(E)
    return _rel(A / abs(B), b1 / a1)


@_check("locus.caustic_relations", 1e-10)
def _relations(E, opt, rng):
    A, B = locus.canonical_axes(E)
    a1, b1 = conic.caustic_axes(E)
    k = 4.0 * E.a ** 2 * E.b ** 2
    c4 = E.c2 ** 2
    return max(_rel(k * A * A, c4 * b1 * b1), _rel(k * B * B, c4 * a1 * a1))


def _form_check(form):
    def fn(E, opt, rng):
        t = rng.uniform(0.0, 2.0 * np.pi, opt.n_random)
        ref = locus.pipeline_center(E, t)
        got = locus.locus_param(E, t, form)
        scale = max(1.0, abs(locus.canonical_axes(E)[1]))
        return float(max(np.max(np.abs(got.x - ref.x)), np.max(np.abs(got.y - ref.y)))) / scale

    return fn


for _form in locus.LocusForm:
    _check(f"locus.form_equivalence.{_form.value}", 1e-9, warn_only=True)(_form_check(_form))


@_check("locus.fit_bisector", 1e-8)
def _fit_bisector(E, opt, rng):
    fit = locus.fit_locus(E, CenterKind.BISECTOR, opt.n_samples)
    A, B = locus.canonical_axes(E)
    sx, sy = fit.ellipse.semi_axes
    return max(fit.fit_residual, _rel(sx, abs(A)), _rel(sy, abs(B)))


@_check("locus.fit_incenter", 1e-8)
def _fit_incenter(E, opt, rng):
    fit = locus.fit_locus(E, CenterKind.INCENTER, opt.n_samples)
    ref = locus.incenter_locus_axes(E)
    sx, sy = fit.ellipse.semi_axes
    return max(fit.fit_residual, _rel(sx, ref.sx), _rel(sy, ref.sy))


@_check("locus.center_kind_separation", 0.0)
def _separation(E, opt, rng):
    """Zero when the incenter locus is not the canonical ellipse."""
    A, B = locus.canonical_axes(E)
    inc = locus.incenter_locus_axes(E)
    sep = max(_rel(inc.sx, abs(A)), _rel(inc.sy, abs(B)))
    return float(sep <= 0.3)


@_check("locus.covering_degree", 0.0)
def _covering(E, opt, rng):
    bad = 0
    for kind in CenterKind:
        for s in rng.uniform(0.0, 2.0 * np.pi, opt.n_probes):
            probe = locus.pipeline_center(E, float(s), kind)
            bad += int(locus.covering_degree(E, kind, probe) != 3)
    return float(bad)


@_check("locus.coordinate_zeros", 0.0)
def _zeros(E, opt, rng):
    zx, zy = locus.coordinate_zero_count(E, CenterKind.BISECTOR)
    return float(abs(zx - 6) + abs(zy - 6))


@_check("locus.winding", 1e-6)
def _winding(E, opt, rng):
    return abs(locus.winding_angle(E, CenterKind.BISECTOR) - 6.0 * math.pi)


# -- affine_geometry ------------------------------------------------------

@_check("affine.locus_constancy", 1e-6)
def _constancy(E, opt, rng):
    A, B = locus.canonical_axes(E)
    rep = affine.constancy_report(locus.locus_curve(E, CenterKind.BISECTOR), opt.n_samples)
    return max(rep.rel_std, abs(rep.mean ** 3 * A * A * B * B - 1.0))


@_check("affine.pipeline_constancy", 1e-6)
def _pipeline_constancy(E, opt, rng):
    A, B = locus.canonical_axes(E)
    rep = affine.constancy_report(locus.locus_curve(E, CenterKind.BISECTOR, "pipeline"), opt.n_samples)
    return max(rep.rel_std, abs(rep.mean ** 3 * A * A * B * B - 1.0))


@_check("affine.table_curvature", 1e-8)
def _table(E, opt, rng):
    rep = affine.constancy_report(affine.ellipse_curve(E.a, E.b), 64)
    return max(_rel(rep.mean, (E.a * E.b) ** (-2.0 / 3.0)), rep.rel_std)


@_check("affine.unimodular_invariance", 1e-8)
def _unimodular(E, opt, rng):
    curve = locus.locus_curve(E, CenterKind.BISECTOR)
    t = rng.uniform(0.0, 2.0 * np.pi, 32)
    ref = affine.affine_curvature(curve, t)
    worst = 0.0
    for _ in range(3):
        m = _random_unimodular(rng)
        got = affine.affine_curvature(affine.transformed_curve(curve, m, rng.normal(size=2)), t)
        worst = max(worst, float(np.max(np.abs(got - ref) / np.abs(ref))))
    return worst


def _random_unimodular(rng):
    while True:
        m = rng.normal(size=(2, 2))
        d = np.linalg.det(m)
        if abs(d) > 0.2:
            break
    if d < 0:
        m[:, 0] = -m[:, 0]
        d = -d
    return m / math.sqrt(d)


@_check("affine.jet_vs_finite_differences", 1e-5)
def _jet_fd(E, opt, rng):
    curve = locus.locus_curve(E, CenterKind.BISECTOR)
    t = rng.uniform(0.0, 2.0 * np.pi, 10)
    return float(np.max(jet_fd_discrepancy(curve, t)))


def jet_fd_discrepancy(curve, t, h: float = 1e-3) -> np.ndarray:
    """Per-parameter gap between jet and finite-difference derivatives.

    The gap for orders 1..4 is divided by the largest derivative magnitude
    at that parameter. Curve values for the stencil are computed with 40
    significant digits so the fourth difference is not swamped by rounding.
    """
    jd = affine.curve_derivatives(curve, t)[1:]
    with mpmath.workdps(40):
        fd = np.stack([richardson_derivatives(_mp_curve(curve), s, h) for s in np.atleast_1d(t)], axis=-1)
    scale = np.max(np.abs(jd), axis=(0, 1))
    return np.max(np.abs(jd - fd), axis=(0, 1)) / scale


def _mp_curve(curve):
    def f(s):
        x, y = curve(s)
        return np.array([x, y], dtype=object)

    return f


def richardson_derivatives(f, t, h: float = 1e-3) -> np.ndarray:
    """Derivatives of orders 1..4 by 5-point central differences with one
    Richardson step; result shape ``(4,) + f(t).shape``.

    ``t`` may be a float/array (float arithmetic) or a single point that
    ``f`` evaluates in mpmath, in which case the stencil runs in mpmath too.
    """

    def stencil(h):
        pts = [f(_shift(t, k, h)) for k in (-2, -1, 0, 1, 2)]
        fm2, fm1, f0, fp1, fp2 = pts
        d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
        d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
        d3 = (-fm2 + 2 * fm1 - 2 * fp1 + fp2) / (2 * h ** 3)
        d4 = (fm2 - 4 * fm1 + 6 * f0 - 4 * fp1 + fp2) / h ** 4
        return [d1, d2, d3, d4]

    coarse, fine = stencil(h), stencil(h / 2)
    # d1, d2 carry O(h⁴) error, d3, d4 carry O(h²)
    out = []
    for k, order in enumerate((4, 4, 2, 2)):
        w = 2.0 ** order
        out.append((w * fine[k] - coarse[k]) / (w - 1.0))
    return np.array(out, dtype=float)


def _shift(t, k, h):
    if isinstance(t, (np.ndarray, list)):
        return np.asarray(t, dtype=float) + k * h
    return mpmath.mpf(float(t)) + k * mpmath.mpf(h)


# -- containment ----------------------------------------------------------

@_check("locus.containment_flip", 0.0)
def _containment(E, opt, rng):
    b_star = locus.containment_threshold(E.a)
    bs = np.linspace(b_star * (1 - 1e-3), b_star * (1 + 1e-3), 21)
    flags = [locus.locus_contained(Ellipse(E.a, b)) for b in bs]
    flips = sum(1 for u, v in zip(flags, flags[1:]) if u != v)
    return float(abs(flips - 1) + (flags[0] or not flags[-1]))


# -- axes_map -------------------------------------------------------------

@_check("axes_map.roundtrip", 1e-9)
def _roundtrip(E, opt, rng):
    x, y = axes_map.forward_map(E.a, E.b)
    a, b = axes_map.invert_map(x, y)
    return max(_rel(a, E.a), _rel(b, E.b))


@_check("axes_map.identities", 1e-10)
def _identities(E, opt, rng):
    x, y = axes_map.forward_map(E.a, E.b)
    a, b = axes_map.invert_map(x, y)
    return max(axes_map.identity_defects(a, b, x, y))


@_check("axes_map.root_structure", 0.0)
def _roots(E, opt, rng):
    x, y = axes_map.forward_map(E.a, E.b)
    q = axes_map.quartic_real_roots(*axes_map.inversion_quartic(x, y))
    above = sum(1 for r in q.roots if r > x)
    return float((len(q.roots) != 2) + (q.discriminant_sign >= 0) + (above != 1))


@_check("axes_map.jacobian_positive", 0.0)
def _jacobian(E, opt, rng):
    x, y = axes_map.forward_map(E.a, E.b)
    ok = axes_map.numeric_jacobian_det(E.a, E.b) > 0.0 and x > y > 0.0
    return float(not ok)


# -- circle sanity, run once ---------------------------------------------

def _circle_orbit():
    E = Ellipse(1.0, 1.0)
    o = orbit.orbit_at(E, 0.3)
    return max(max(orbit.orbit_residuals(E, o).values()), abs(o.alpha - math.pi / 6))


def _circle_caustic():
    a1, b1 = conic.caustic_axes(Ellipse(1.0, 1.0))
    return max(abs(a1 - 0.5), abs(b1 - 0.5))


def _circle_curvature():
    rep = affine.constancy_report(affine.ellipse_curve(1.0, 1.0), 64)
    return max(abs(rep.mean - 1.0), rep.max_abs_dev)


def _circle_checks() -> list[CheckResult]:
    out = []
    for name, fn, tol in (("circle.equilateral_orbit", _circle_orbit, 1e-14),
                          ("circle.caustic", _circle_caustic, 0.0),
                          ("circle.affine_curvature", _circle_curvature, 1e-12)):
        try:
            out.append(_result(name, fn(), tol))
        except Exception as exc:
            out.append(_result(name, math.inf, tol, detail=f"{type(exc).__name__}: {exc}"))
    return out


def _result(name, residual, tol, warn_only=False, detail=""):
    ok = residual <= tol and not math.isnan(residual)
    status = PASS if ok else (WARN if warn_only else FAIL)
    return CheckResult(name, float(residual), tol, status, detail)


def default_grid(n: int = 50, lo: float = 1.01, hi: float = 5.0) -> list[Ellipse]:
    """``n`` tables with ratios ``a/b`` log-spaced in ``(lo, hi]`` and ``b = 1``."""
    return [Ellipse(float(r), 1.0) for r in np.geomspace(lo, hi, n + 1)[1:]]


def run_checks(ellipses, options: SuiteOptions | None = None) -> SuiteReport:
    """Run every invariant on every table and merge results per invariant."""
    opt = options or SuiteOptions()
    start = time.perf_counter()
    merged: dict[str, CheckResult] = {}
    for E in ellipses:
        if E.is_circle:
            continue
        for name, tol, warn_only, fn in _CHECKS:
            rng = np.random.default_rng([opt.seed, zlib.crc32(name.encode())])
            try:
                residual = float(fn(E, opt, rng))
                detail = ""
            except Exception as exc:  # a crashing invariant is a failing invariant
                residual, detail = math.inf, f"{type(exc).__name__}: {exc}"
            res = _result(name, residual, tol, warn_only, detail)
            prev = merged.get(name)
            if prev is None or _worse(res, prev):
                if res.status != PASS:
                    where = f"worst at a={E.a:g}, b={E.b:g}"
                    res.detail = f"{where}; {res.detail}" if res.detail else where
                merged[name] = res
    results = list(merged.values()) + _circle_checks()
    report = SuiteReport(results, [(E.a, E.b) for E in ellipses])
    report.elapsed = time.perf_counter() - start
    return report


def _worse(new: CheckResult, old: CheckResult) -> bool:
    if math.isnan(new.max_residual):
        return True
    return new.max_residual > old.max_residual


def check_names() -> list[str]:
    return [name for name, *_ in _CHECKS]

