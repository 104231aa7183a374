"""Truncated Taylor series arithmetic, vectorized over sample points.

A series is an array ``c`` of shape ``(n + 1, *points)`` holding normalized
coefficients ``c[m] = f^(m)(x) / m!``.  Operations truncate to the shorter
operand; differentiation drops one order.
"""

from __future__ import annotations

from math import factorial

import numpy as np


def _factorials(n: int, ndim: int) -> np.ndarray:
    f = np.array([float(factorial(m)) for m in range(n)])
    return f.reshape((n,) + (1,) * (ndim - 1))


def from_derivatives(values) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    return values / _factorials(values.shape[0], values.ndim)


def to_derivatives(series) -> np.ndarray:
    series = np.asarray(series)
    return series * _factorials(series.shape[0], series.ndim)


def constant(value, order: int, shape=()) -> np.ndarray:
    out = np.zeros((order + 1,) + tuple(shape), dtype=complex)
    out[0] = value
    return out


def variable(x, order: int) -> np.ndarray:
    """The series of the identity function t -> t expanded at ``x``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros((order + 1,) + x.shape, dtype=complex)
    out[0] = x
    if order >= 1:
        out[1] = 1.0
    return out


def truncate(a, order: int) -> np.ndarray:
    return a[: order + 1]


def add(a, b):
    n = min(len(a), len(b))
    return a[:n] + b[:n]


def sub(a, b):
    n = min(len(a), len(b))
    return a[:n] - b[:n]


def mul(a, b):
    n = min(len(a), len(b))
    out = np.zeros(np.broadcast_shapes(a[:n].shape, b[:n].shape), dtype=complex)
    for m in range(n):
        out[m] = np.sum(a[: m + 1] * b[m::-1], axis=0)
    return out


def div(a, b):
    n = min(len(a), len(b))
    shape = np.broadcast_shapes(a[:n].shape, b[:n].shape)
    out = np.zeros(shape, dtype=complex)
    for m in range(n):
        acc = a[m] - np.sum(b[1 : m + 1] * out[m - 1 :: -1][:m], axis=0) if m else a[0]
        out[m] = acc / b[0]
    return out


def deriv(a):
    n = len(a) - 1
    k = np.arange(1, n + 1, dtype=float).reshape((n,) + (1,) * (a.ndim - 1))
    return a[1:] * k


def log_deriv(a):
    """Series of f'/f."""
    return div(deriv(a), a)


def value(a):
    return a[0]
