"""Truncated Taylor polynomials ("jets") with numpy coefficients.

A :class:`Jet` of order ``m`` stores normalised Taylor coefficients
``c[k] = u^{(k)}(t) / k!`` for ``k = 0..m``.  Coefficient arrays carry an
arbitrary trailing batch shape so one jet can represent many base points.
"""
from __future__ import annotations

import math

import numpy as np

MAX_ORDER = 4


class Jet:
    __slots__ = ("c",)
    __array_priority__ = 100

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=complex)

    # -- construction ---------------------------------------------------
    @classmethod
    def variable(cls, t, order: int) -> "Jet":
        """Jet of the identity map at ``t``: t + eps."""
        t = np.asarray(t, dtype=complex)
        c = np.zeros((order + 1,) + t.shape, dtype=complex)
        c[0] = t
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        value = np.asarray(value, dtype=complex)
        c = np.zeros((order + 1,) + value.shape, dtype=complex)
        c[0] = value
        return cls(c)

    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    @property
    def value(self):
        return self.c[0]

    def derivatives(self) -> np.ndarray:
        """Return ``[u, u', u'', ...]`` stacked along axis 0."""
        fact = np.array([math.factorial(k) for k in range(self.order + 1)], dtype=float)
        return self.c * fact.reshape((-1,) + (1,) * (self.c.ndim - 1))

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(np.broadcast_to(other, self.c.shape[1:]), self.order)

    # -- arithmetic -----------------------------------------------------
    def __neg__(self):
        return Jet(-self.c)

    def __add__(self, other):
        if not isinstance(other, Jet):
            c = self.c.copy()
            c[0] = c[0] + other
            return Jet(c)
        return Jet(self.c + other.c)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * other)
        a, b = self.c, other.c
        m = self.order
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
        for k in range(m + 1):
            acc = a[0] * b[k]
            for i in range(1, k + 1):
                acc = acc + a[i] * b[k - i]
            out[k] = acc
        return Jet(out)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a = self.c
        m = self.order
        q = np.zeros_like(a)
        q[0] = 1.0 / a[0]
        for k in range(1, m + 1):
            acc = 0.0
            for i in range(1, k + 1):
                acc = acc + a[i] * q[k - i]
            q[k] = -acc * q[0]
        return Jet(q)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise TypeError("Jet powers are restricted to non-negative integers")
        result = Jet.constant(np.ones(self.c.shape[1:]), self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def log(self) -> "Jet":
        """Principal logarithm, composed with the jet."""
        a = self.c
        m = self.order
        out = np.zeros_like(a)
        out[0] = np.log(a[0])
        inv = 1.0 / a[0]
        for k in range(1, m + 1):
            acc = k * a[k]
            for i in range(1, k):
                acc = acc - i * out[i] * a[k - i]
            out[k] = acc * inv / k
        return Jet(out)

    def max_abs(self):
        """Largest coefficient modulus per batch element."""
        return np.max(np.abs(self.c), axis=0)

    def __repr__(self):
        return f"Jet(order={self.order}, c={self.c!r})"
