"""Exact integer array kernels.

Arrays are int64 whenever every entry fits comfortably, otherwise dtype
object holding Python ints.  Each kernel checks a worst-case bound before
taking a machine-precision route, so results are always exact.
"""

from __future__ import annotations

from math import gcd

import numpy as np

_F53 = 2**53
_I62 = 2**62


def maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a.flat)
    return int(np.abs(a).max())


def narrow(a: np.ndarray) -> np.ndarray:
    """Convert to int64 when every entry fits below 2**62."""
    if a.dtype == object:
        if maxabs(a) < _I62:
            return a.astype(np.int64)
        return a
    if a.dtype != np.int64:
        return a.astype(np.int64)
    return a


def widen(a: np.ndarray) -> np.ndarray:
    return a if a.dtype == object else a.astype(object)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object and maxabs(a) + maxabs(b) < _I62:
        return a + b
    return narrow(widen(a) + widen(b))


def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object and maxabs(a) + maxabs(b) < _I62:
        return a - b
    return narrow(widen(a) - widen(b))


def scale(a: np.ndarray, k: int) -> np.ndarray:
    k = int(k)
    if k == 1:
        return a
    if a.dtype != object and maxabs(a) * abs(k) < _I62:
        return a * k
    return narrow(widen(a) * k)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of 2-D integer arrays."""
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if a.dtype != object and b.dtype != object:
        bound = maxabs(a) * maxabs(b) * a.shape[1]
        if bound < _F53:
            prod = a.astype(np.float64) @ b.astype(np.float64)
            return np.rint(prod).astype(np.int64)
        if bound < _I62:
            return a @ b
    return narrow(widen(a) @ widen(b))


def conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Polynomial product along the last axis (shapes broadcast elsewhere)."""
    n, k = a.shape[-1], b.shape[-1]
    if a.ndim == 1 and b.ndim == 1:
        if a.dtype != object and b.dtype != object and maxabs(a) * maxabs(b) * min(n, k) < _I62:
            return np.convolve(a, b)
        return narrow(np.convolve(widen(a), widen(b)))
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (n + k - 1,)
    exact64 = (a.dtype != object and b.dtype != object
               and maxabs(a) * maxabs(b) * min(n, k) < _I62)
    if not exact64:
        a, b = widen(a), widen(b)
    out = np.zeros(shape, dtype=np.int64 if exact64 else object)
    for u in range(n):
        out[..., u:u + k] += a[..., u:u + 1] * b
    return narrow(out)


def gcd_all(a: np.ndarray, start: int = 0) -> int:
    g = start
    if a.size == 0:
        return g
    if a.dtype != object:
        g = gcd(g, int(np.gcd.reduce(np.abs(a).ravel())))
        return g
    for x in a.flat:
        g = gcd(g, int(x))
        if g == 1:
            break
    return g


def exact_div(a: np.ndarray, k: int) -> np.ndarray:
    k = int(k)
    if k == 1:
        return a
    if a.dtype == object:
        return narrow(a // k)
    return a // k
