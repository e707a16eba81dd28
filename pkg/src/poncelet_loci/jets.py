"""
Truncated Taylor jets of order four.

A :class:`Jet4` carries the value of a function and its first four
derivatives at a point. Arithmetic on jets propagates the derivatives
exactly (up to rounding), which is what the affine curvature needs: it is
built from fourth derivatives of compositions of rational and
trigonometric functions.

Internally the jet stores normalized Taylor coefficients ``f^(k)(t)/k!``;
the leading axis has length 5 and any trailing axes broadcast, so a single
jet can hold a whole batch of evaluation points.

The module-level functions :func:`sqrt`, :func:`sin`, :func:`cos` and
:func:`cbrt` accept jets as well as plain floats, numpy arrays or mpmath
numbers, so the same geometric code runs on all of them.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

from .errors import DomainError

ORDER = 4
_FACTORIALS = np.array([math.factorial(k) for k in range(ORDER + 1)], dtype=float)
_DIV_EPS = 1e-300


def _bshape(fact, ndim):
    return fact.reshape((-1,) + (1,) * ndim)


class Jet4:
    """Value and derivatives of orders 1 through 4 of a scalar function.

    Parameters
    ----------
    coeffs : array_like
        Normalized Taylor coefficients, shape ``(5, ...)``.

    Examples
    --------
    >>> t = Jet4.variable(3.0)
    >>> (t * t).derivatives
    array([9., 6., 2., 0., 0.])
    """

    __slots__ = ("c",)
    __array_priority__ = 1000  # so ndarray OP Jet4 defers to the jet

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=float)
        if c.shape[:1] != (ORDER + 1,):
            raise ValueError(f"expected leading axis of length {ORDER + 1}, got {c.shape}")
        self.c = c

    # -- constructors -----------------------------------------------------
    @classmethod
    def variable(cls, t) -> "Jet4":
        """Jet of the identity function at ``t`` (scalar or array)."""
        t = np.asarray(t, dtype=float)
        c = np.zeros((ORDER + 1,) + t.shape)
        c[0] = t
        c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, v) -> "Jet4":
        v = np.asarray(v, dtype=float)
        c = np.zeros((ORDER + 1,) + v.shape)
        c[0] = v
        return cls(c)

    @classmethod
    def from_derivatives(cls, derivs) -> "Jet4":
        d = np.asarray(derivs, dtype=float)
        return cls(d / _bshape(_FACTORIALS, d.ndim - 1))

    # -- accessors --------------------------------------------------------
    @property
    def value(self) -> np.ndarray:
        return self.c[0]

    @property
    def derivatives(self) -> np.ndarray:
        """Array ``(d0, d1, d2, d3, d4)`` of the value and derivatives."""
        return self.c * _bshape(_FACTORIALS, self.c.ndim - 1)

    def derivative(self, k: int) -> np.ndarray:
        return self.c[k] * _FACTORIALS[k]

    @property
    def shape(self):
        return self.c.shape[1:]

    def __repr__(self):
        return f"Jet4({self.derivatives.tolist()!r})"

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Jet4):
            return other.c
        v = np.asarray(other, dtype=float)
        c = np.zeros((ORDER + 1,) + np.broadcast_shapes(v.shape, self.shape))
        c[0] = v
        return c

    def __neg__(self):
        return Jet4(-self.c)

    def __pos__(self):
        return self

    def __add__(self, other):
        return Jet4(self.c + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Jet4(self.c - self._coerce(other))

    def __rsub__(self, other):
        return Jet4(self._coerce(other) - self.c)

    def __mul__(self, other):
        if not isinstance(other, Jet4):
            return Jet4(self.c * np.asarray(other, dtype=float))
        return Jet4(_mul(self.c, other.c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet4):
            return Jet4(self.c / np.asarray(other, dtype=float))
        return Jet4(_div(self.c, other.c))

    def __rtruediv__(self, other):
        return Jet4(_div(self._coerce(other), self.c))

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)):
            if p == 0:
                return Jet4.constant(np.ones(self.shape))
            if p < 0:
                return 1.0 / (self ** (-p))
            result = None
            base = self
            while p:
                if p & 1:
                    result = base if result is None else result * base
                p >>= 1
                if p:
                    base = base * base
            return result
        return Jet4(_pow_real(self.c, float(p)))


def _mul(a, b):
    c = np.zeros(np.broadcast_shapes(a.shape, b.shape))
    for k in range(ORDER + 1):
        acc = a[0] * b[k]
        for j in range(1, k + 1):
            acc = acc + a[j] * b[k - j]
        c[k] = acc
    return c


def _div(a, b):
    b0 = b[0]
    if np.any(np.abs(b0) <= _DIV_EPS):
        raise ZeroDivisionError("division by a jet with zero value")
    q = np.zeros(np.broadcast_shapes(a.shape, b.shape))
    for k in range(ORDER + 1):
        acc = a[k]
        for j in range(1, k + 1):
            acc = acc - b[j] * q[k - j]
        q[k] = acc / b0
    return q


def _pow_real(a, r):
    a0 = a[0]
    if np.any(a0 <= 0.0):
        raise DomainError("real power of a jet requires a positive value")
    p = np.zeros_like(a)
    p[0] = a0 ** r
    for k in range(1, ORDER + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + (r * j + (j - k)) * a[j] * p[k - j]
        p[k] = acc / (k * a0)
    return p


def _sincos(a):
    s = np.zeros_like(a)
    c = np.zeros_like(a)
    s[0] = np.sin(a[0])
    c[0] = np.cos(a[0])
    for k in range(1, ORDER + 1):
        acc_s = 0.0
        acc_c = 0.0
        for j in range(1, k + 1):
            acc_s = acc_s + j * a[j] * c[k - j]
            acc_c = acc_c + j * a[j] * s[k - j]
        s[k] = acc_s / k
        c[k] = -acc_c / k
    return s, c


def _is_mp(x) -> bool:
    return type(x).__module__.startswith("mpmath")


def sqrt(x):
    """Square root of a jet, float, array or mpmath number."""
    if isinstance(x, Jet4):
        a = x.c
        if np.any(a[0] <= 0.0):
            raise DomainError("sqrt of a jet requires a positive value")
        s = np.zeros_like(a)
        s[0] = np.sqrt(a[0])
        for k in range(1, ORDER + 1):
            acc = a[k]
            for j in range(1, k):
                acc = acc - s[j] * s[k - j]
            s[k] = acc / (2.0 * s[0])
        return Jet4(s)
    if _is_mp(x):
        return mpmath.sqrt(x)
    return np.sqrt(x)


def cbrt(x):
    """Real cube root; jets must have a positive value."""
    if isinstance(x, Jet4):
        return x ** (1.0 / 3.0)
    return np.cbrt(x)


def sin(x):
    if isinstance(x, Jet4):
        return Jet4(_sincos(x.c)[0])
    if _is_mp(x):
        return mpmath.sin(x)
    return np.sin(x)


def cos(x):
    if isinstance(x, Jet4):
        return Jet4(_sincos(x.c)[1])
    if _is_mp(x):
        return mpmath.cos(x)
    return np.cos(x)


def value(x) -> np.ndarray:
    """Plain value of a jet, or the argument itself as an array."""
    if isinstance(x, Jet4):
        return x.c[0]
    return np.asarray(x, dtype=float)
