"""
The map from table semi-axes ``(a, b)`` to caustic semi-axes ``(a1, b1)``
and its inverse on the region ``a > b > 0``.

Given ``(x, y) = (a1, b1)``, the table satisfies ``a² - b² = x² - y²`` and
``b x + a y = a b``. Eliminating ``b = a y / (a - x)`` leaves the quartic

    p(a) = a⁴ - 2 x a³ + 2 c² x a - c² x²,    c² = x² - y²,

which has exactly two real roots, one of them larger than ``x``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .conic import Ellipse, caustic_axes
from .errors import DomainError, InversionError

ROOT_IMAG_TOL = 1e-6
ROOT_CLUSTER_TOL = 1e-6
NEAR_CIRCLE_TOL = 1e-9


def forward_map(a: float, b: float) -> tuple[float, float]:
    """Caustic semi-axes of the table ``(a, b)``; requires ``a > b > 0``."""
    if not (a > b > 0.0):
        raise DomainError(f"forward map needs a > b > 0, got a={a}, b={b}")
    return caustic_axes(Ellipse(a, b))


class QuarticRoots(NamedTuple):
    roots: list[float]
    discriminant_sign: int


def quartic_discriminant(c4: float, c3: float, c2: float, c1: float, c0: float) -> float:
    """Discriminant of ``c4 x⁴ + c3 x³ + c2 x² + c1 x + c0``."""
    a, b, c, d, e = c4, c3, c2, c1, c0
    return (
        256 * a**3 * e**3
        - 192 * a**2 * b * d * e**2
        - 128 * a**2 * c**2 * e**2
        + 144 * a**2 * c * d**2 * e
        - 27 * a**2 * d**4
        + 144 * a * b**2 * c * e**2
        - 6 * a * b**2 * d**2 * e
        - 80 * a * b * c**2 * d * e
        + 18 * a * b * c * d**3
        + 16 * a * c**4 * e
        - 4 * a * c**3 * d**2
        - 27 * b**4 * e**2
        + 18 * b**3 * c * d * e
        - 4 * b**3 * d**3
        - 4 * b**2 * c**3 * e
        + b**2 * c**2 * d**2
    )


def _newton(coeffs, x, iters=8):
    deriv = np.polyder(coeffs)
    for _ in range(iters):
        fp = np.polyval(deriv, x)
        if fp == 0.0:
            break
        step = np.polyval(coeffs, x) / fp
        x -= step
        if abs(step) <= 1e-17 * max(1.0, abs(x)):
            break
    return x


def quartic_real_roots(c4: float, c3: float, c2: float, c1: float, c0: float) -> QuarticRoots:
    """Real roots (with multiplicity, ascending) of a quartic and its discriminant sign.

    Companion-matrix eigenvalues are classified as real when their imaginary
    part is small, then polished by Newton's method. A pair of nearly equal
    real roots is treated as a double root and polished as a root of the
    derivative, which keeps it accurate instead of ``O(sqrt(eps))``.
    """
    if c4 == 0.0:
        raise DomainError("leading coefficient must be nonzero")
    coeffs = np.array([c4, c3, c2, c1, c0], dtype=float)
    raw = np.roots(coeffs)
    scale = max(1.0, float(np.max(np.abs(raw))))
    real = sorted(float(r.real) for r in raw if abs(r.imag) <= ROOT_IMAG_TOL * scale)
    deriv = np.polyder(coeffs)
    roots: list[float] = []
    i = 0
    while i < len(real):
        j = i
        while j + 1 < len(real) and real[j + 1] - real[i] <= ROOT_CLUSTER_TOL * scale:
            j += 1
        mult = j - i + 1
        guess = sum(real[i : j + 1]) / mult
        if mult == 1:
            roots.append(float(_newton(coeffs, guess)))
        else:
            roots.extend([float(_newton(deriv, guess))] * mult)
        i = j + 1
    disc = quartic_discriminant(c4, c3, c2, c1, c0)
    return QuarticRoots(sorted(roots), int(np.sign(disc)))


def inversion_quartic(x: float, y: float) -> tuple[float, float, float, float, float]:
    """Coefficients of ``p(a)`` for the caustic axes ``(x, y)``."""
    c2 = (x - y) * (x + y)
    return 1.0, -2.0 * x, 0.0, 2.0 * c2 * x, -c2 * x * x


def invert_map(x: float, y: float) -> tuple[float, float]:
    """Table semi-axes ``(a, b)`` whose caustic has semi-axes ``(x, y)``."""
    if not (x > y > 0.0):
        raise DomainError(f"caustic axes must satisfy x > y > 0, got x={x}, y={y}")
    if x - y <= NEAR_CIRCLE_TOL * x:
        raise DomainError("caustic axes too close to a circle to invert")
    roots = quartic_real_roots(*inversion_quartic(x, y)).roots
    admissible = [r for r in roots if r > x]
    if not admissible:
        raise InversionError(f"no root of the inversion quartic exceeds x={x}; roots={roots}")
    a = max(admissible)
    b = a * y / (a - x)
    return a, b


def numeric_jacobian_det(a: float, b: float, step: float = 1e-6) -> float:
    """Central-difference determinant of the forward map's Jacobian."""
    h_a, h_b = step * a, step * b
    xa = np.subtract(forward_map(a + h_a, b), forward_map(a - h_a, b)) / (2 * h_a)
    xb = np.subtract(forward_map(a, b + h_b), forward_map(a, b - h_b)) / (2 * h_b)
    return float(xa[0] * xb[1] - xa[1] * xb[0])


def identity_defects(a: float, b: float, x: float, y: float) -> tuple[float, float]:
    """Relative defects of ``x² - y² = a² - b²`` and ``b x + a y = a b``."""
    conf = abs((x * x - y * y) - (a * a - b * b)) / (a * a)
    bil = abs(b * x + a * y - a * b) / (a * b)
    return conf, bil

