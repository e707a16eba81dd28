import math

import numpy as np
import pytest
from hypothesis import given

from poncelet_loci.axes_map import (
    forward_map,
    identity_defects,
    inversion_quartic,
    invert_map,
    numeric_jacobian_det,
    quartic_real_roots,
)
from poncelet_loci.conic import Ellipse, caustic_axes
from poncelet_loci.errors import DomainError

from .conftest import tables


@pytest.mark.parametrize("a, xy", [(2, (1.7370342, 0.1314829)), (3, (2.8290014, 0.0569995))])
def test_forward(a, xy):
    x, y = forward_map(a, 1)
    np.testing.assert_allclose((x, y), xy, atol=1e-7)
    assert (x, y) == caustic_axes(Ellipse(a, 1))
    assert 1 * x + a * y == pytest.approx(a, rel=1e-12)


def test_forward_rejects():
    with pytest.raises(DomainError):
        forward_map(1, 1)


def test_quartic_examples():
    x, y = forward_map(2, 1)
    r = quartic_real_roots(*inversion_quartic(x, y))
    assert min(abs(u - 2) for u in r.roots) < 1e-10
    assert r.discriminant_sign < 0
    # (a-1)²(a²+1) = a⁴ - 2a³ + 2a² - 2a + 1
    r = quartic_real_roots(1, -2, 2, -2, 1)
    assert len(r.roots) == 2
    np.testing.assert_allclose(r.roots, [1, 1], atol=1e-12)
    assert quartic_real_roots(1, 0, 2, 0, 1).roots == [] or \
        len(quartic_real_roots(1, 0, 2, 0, 1).roots) == 0


def test_quartic_simple_roots():
    r = quartic_real_roots(2, -20, 70, -100, 48)  # 2(a-1)(a-2)(a-3)(a-4)
    np.testing.assert_allclose(r.roots, [1, 2, 3, 4], rtol=1e-12)
    assert r.discriminant_sign > 0


@pytest.mark.parametrize("xy, ab", [((1.7370342, 0.1314829), (2, 1)),
                                    ((2.8290014, 0.0569995), (3, 1))])
def test_invert_examples(xy, ab):
    np.testing.assert_allclose(invert_map(*xy), ab, atol=1e-5)


def test_invert_rejects():
    with pytest.raises(DomainError):
        invert_map(1, 2)
    with pytest.raises(DomainError):
        invert_map(1, 1)


@given(tables())
def test_roundtrip_and_structure(E):
    x, y = forward_map(E.a, E.b)
    assert x > y > 0
    a, b = invert_map(x, y)
    assert a == pytest.approx(E.a, rel=1e-9) and b == pytest.approx(E.b, rel=1e-9)
    r = quartic_real_roots(*inversion_quartic(x, y))
    assert len(r.roots) == 2 and sum(u > x for u in r.roots) == 1
    assert r.discriminant_sign < 0
    assert max(identity_defects(a, b, x, y)) < 1e-10
    assert numeric_jacobian_det(E.a, E.b) > 0


def test_discriminant_closed_form():
    from poncelet_loci.axes_map import quartic_discriminant

    x, c2 = 1.5, 1.2
    want = -432 * x ** 4 * c2 ** 2 * (c2 - x * x) ** 2
    got = quartic_discriminant(*inversion_quartic(x, math.sqrt(x * x - c2)))
    assert got == pytest.approx(want, rel=1e-9)
