import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poncelet_loci.affine import (
    affine_curvature,
    constancy_report,
    ellipse_curve,
    transformed_curve,
)
from poncelet_loci.checks import jet_fd_discrepancy
from poncelet_loci.conic import Ellipse
from poncelet_loci.errors import DomainError
from poncelet_loci.locus import canonical_axes, locus_curve

from .conftest import angles, tables


@given(st.floats(0.3, 4.0), st.floats(0.3, 4.0), angles)
def test_ellipse_remark(a, b, t):
    assert affine_curvature(ellipse_curve(a, b), t) == pytest.approx((a * b) ** (-2 / 3), rel=1e-10)


def test_circle_curvature():
    r = 2.5
    # (ab)^(-2/3) with a = b = r
    assert affine_curvature(ellipse_curve(r, r), 0.3) == pytest.approx(r ** (-4 / 3), rel=1e-13)
    rep = constancy_report(ellipse_curve(1, 1), 64)
    assert rep.mean == pytest.approx(1.0) and rep.max_abs_dev < 1e-12


def test_table_constancy():
    rep = constancy_report(ellipse_curve(3, 1), 1000)
    assert rep.mean == pytest.approx(3 ** (-2 / 3), abs=1e-10)
    assert rep.rel_std < 1e-10


@pytest.mark.parametrize("method", ["closed_form", "pipeline"])
def test_bisector_locus_constant(E21, method):
    rep = constancy_report(locus_curve(E21, "bisector", method), 1000)
    A, B = canonical_axes(E21)
    assert rep.rel_std < 1e-6
    assert rep.mean ** 3 * A * A * B * B == pytest.approx(1.0, abs=1e-6)
    assert rep.mean == pytest.approx(3.92766, abs=1e-5)


def test_reparametrization_invariance(E21):
    c = locus_curve(E21, "bisector")
    r0, r1 = constancy_report(c, 256), constancy_report(c, 256, t0=0.37)
    assert r0.mean == pytest.approx(r1.mean, rel=1e-12)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), angles)
def test_unimodular_invariance(p, q, s, t):
    M = np.array([[1.0, p], [0.0, 1.0]]) @ np.array([[math.exp(s), 0], [0, math.exp(-s)]]) \
        @ np.array([[1.0, 0.0], [q, 1.0]])
    c = ellipse_curve(2.0, 1.0)
    assert affine_curvature(transformed_curve(c, M, (0.3, -1)), t) == pytest.approx(
        affine_curvature(c, t), rel=1e-8)


def test_nonconvex_rejected():
    c = ellipse_curve(2.0, 1.0)
    reflected = transformed_curve(c, [[1, 0], [0, -1]])
    with pytest.raises(DomainError):
        affine_curvature(reflected, 0.5)
    with pytest.raises(DomainError):
        constancy_report(c, 8)


@given(tables(lo=1.05, hi=4.0))
@settings(max_examples=5)
def test_jets_match_finite_differences(E):
    t = np.random.default_rng(0).uniform(0, 2 * np.pi, 5)
    assert np.max(jet_fd_discrepancy(locus_curve(E, "bisector", "pipeline"), t)) < 1e-5
