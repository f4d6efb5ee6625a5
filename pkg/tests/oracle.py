"""Floating-point reference computations, independent of the exact core."""

from __future__ import annotations

import cmath
import math

import numpy as np


def qint(n: int, k: int, l: int) -> float:
    """[n]_q at q = exp(pi i l / (k + 2))."""
    x = math.pi * l / (k + 2)
    return math.sin(n * x) / math.sin(x)


def sl2_s(k: int, l: int) -> np.ndarray:
    return np.array([[qint((a + 1) * (b + 1), k, l) for b in range(k + 1)] for a in range(k + 1)])


def adjoint_s(k: int, l: int) -> np.ndarray:
    js = range(k // 2 + 1)
    return np.array([[qint((2 * a + 1) * (2 * b + 1), k, l) for b in js] for a in js])


def verlinde(S: np.ndarray) -> np.ndarray:
    """N_{xy}^z = sum_w S_xw S_yw conj(S_zw) / (D S_0w) for real or complex S."""
    D = float(np.sum(np.abs(S[0]) ** 2))
    N = np.einsum("xw,yw,zw,w->xyz", S, S, np.conj(S), 1 / S[0]) / D
    return np.real_if_close(N)


def adjoint_anomaly_closed_form(k: int) -> complex:
    """exp((1 - k) k pi i / (2 (k + 2)))."""
    return cmath.exp(1j * math.pi * (1 - k) * k / (2 * (k + 2)))


def brute_phi2(n: int) -> int:
    return len({a * a % n for a in range(n) if math.gcd(a, n) == 1})


def brute_legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if any(x * x % p == a for x in range(1, p)) else -1
