import math

import numpy as np
import pytest
from hypothesis import given

from poncelet_loci.conic import Ellipse, Point2, caustic_axes, point_at
from poncelet_loci.errors import DomainError
from poncelet_loci.orbit import (
    OrbitTriangle,
    build_orbit,
    closed_form_from_cos_sin,
    closed_form_vertices,
    cos2_alpha,
    orbit_at,
    orbit_residuals,
    reflection_angle,
    reflection_quartic,
)

from .conftest import angles, tables


def test_circle_angle():
    C = Ellipse(1, 1)
    for t in (0.0, 0.4, 2.0):
        assert reflection_angle(C, point_at(C, t)) == pytest.approx(math.pi / 6, abs=1e-14)


@pytest.mark.parametrize("p1, u", [((2.0, 0.0), 0.9827122), ((0.0, 1.0), 0.2456781)])
def test_cos2_alpha_examples(E21, p1, u):
    assert cos2_alpha(E21, *p1) == pytest.approx(u, abs=1e-7)


def test_cos2_alpha_is_quartic_root_by_sign_scan(E21):
    # independent check: the only sign change of the quartic on (0, π/2)
    x1, y1 = 2.0, 0.0
    al = np.linspace(1e-6, math.pi / 2 - 1e-6, 200001)
    q = reflection_quartic(E21, x1, y1, np.cos(al))
    idx = np.nonzero(np.diff(np.sign(q)))[0]
    assert len(idx) == 1
    assert math.cos(al[idx[0]]) ** 2 == pytest.approx(cos2_alpha(E21, x1, y1), abs=1e-5)


def test_build_orbit_at_major_vertex(E21):
    o = build_orbit(E21, Point2(2.0, 0.0))
    np.testing.assert_allclose(o.p2, (-1.7370342, 0.4956592), atol=1e-7)
    np.testing.assert_allclose(o.p3, (-1.7370342, -0.4956592), atol=1e-7)
    assert o.p2.x == pytest.approx(-caustic_axes(E21)[0], abs=1e-12)


def test_build_orbit_at_minor_vertex(E21):
    o = build_orbit(E21, Point2(0.0, 1.0))
    a1, b1 = caustic_axes(E21)
    x = 2.0 * math.sqrt(1.0 - b1 * b1)
    np.testing.assert_allclose(o.p2, (-x, -b1), atol=1e-12)
    np.testing.assert_allclose(o.p3, (x, -b1), atol=1e-12)
    assert x == pytest.approx(1.9826368, abs=1e-7)


def test_circle_orbit_equilateral():
    o = build_orbit(Ellipse(1, 1), Point2(1.0, 0.0))
    np.testing.assert_allclose(o.p2, (-0.5, math.sqrt(3) / 2), atol=1e-15)
    np.testing.assert_allclose(o.p3, (-0.5, -math.sqrt(3) / 2), atol=1e-15)
    assert max(orbit_residuals(Ellipse(1, 1), o).values()) < 1e-15


def test_closed_form_with_rounded_angle(E21):
    C = math.sqrt(0.9827122)
    p2, p3 = closed_form_from_cos_sin(E21, 2.0, 0.0, C, math.sqrt(1 - C * C))
    # the printed example was evaluated term by term with 7-digit inputs
    np.testing.assert_allclose((p2[0], p2[1]), (-1.7370334, 0.4956443), atol=3e-5)
    exact = build_orbit(E21, Point2(2.0, 0.0))
    np.testing.assert_allclose((p2[0], p2[1]), exact.p2, atol=1e-6)
    np.testing.assert_allclose((p3[0], p3[1]), (p2[0], -p2[1]), atol=1e-15)


@given(tables(), angles)
def test_closed_form_matches_ray_trace(E, t):
    o = orbit_at(E, t)
    p2, p3 = closed_form_vertices(E, o.p1, o.alpha)
    np.testing.assert_allclose(np.r_[p2, p3], np.r_[o.p2, o.p3], atol=1e-9 * E.a)


@given(tables(), angles)
def test_orbit_invariants(E, t):
    o = orbit_at(E, t)
    res = orbit_residuals(E, o)
    assert max(res[k] for k in res if k.startswith("reflection")) < 1e-10
    assert max(res[k] for k in res if k.startswith("tangency")) < 1e-8
    for p in o.vertices:
        assert abs(E.implicit(*p)) < 1e-10
    assert 0 < o.alpha < math.pi / 2
    u = math.cos(o.alpha) ** 2
    assert 0 < u <= 1
    assert abs(reflection_quartic(E, *o.p1, math.cos(o.alpha))) < 1e-12


@given(tables(), angles)
def test_orbit_map_well_defined(E, t):
    o = orbit_at(E, t)
    for q in (o.p2, o.p3):
        o2 = build_orbit(E, q)
        for p in o.vertices:
            assert min(math.dist(p, r) for r in o2.vertices) < 1e-9 * E.a


def test_perturbed_vertex_detected(E21):
    o = orbit_at(E21, 0.7)
    t2 = math.atan2(o.p2.y / 1.0, o.p2.x / 2.0) + 1e-3
    bad = OrbitTriangle(o.p1, point_at(E21, t2), o.p3, o.alpha)
    assert orbit_residuals(E21, bad)["reflection_p2"] > 1e-4


def test_duplicate_vertices(E21):
    p = Point2(2.0, 0.0)
    with pytest.raises(DomainError):
        orbit_residuals(E21, OrbitTriangle(p, p, Point2(-2.0, 0.0), 0.3))


def test_off_ellipse(E21):
    with pytest.raises(DomainError):
        reflection_angle(E21, Point2(1.0, 1.0))
