"""Elementary number theory used throughout the package."""

from __future__ import annotations

from functools import lru_cache, reduce
from math import gcd


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), values, 1)


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n`` as ``((p, e), ...)`` in increasing order."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


def euler_phi(m: int) -> int:
    result = m
    for p, _ in factorize(m):
        result = result // p * (p - 1)
    return result


def is_squarefree(m: int) -> bool:
    return all(e == 1 for _, e in factorize(m))


def units(n: int) -> list[int]:
    """Representatives of (Z/n)^x in increasing order (``[0]`` for n = 1)."""
    if n == 1:
        return [0]
    return [a for a in range(1, n) if gcd(a, n) == 1]


def legendre(a: int, p: int) -> int:
    if p < 3 or not is_prime(p):
        raise ValueError(f"legendre symbol needs an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def phi2(m: int) -> int:
    """Order of the subgroup of squares in (Z/m)^x."""
    if m < 1:
        raise ValueError("phi2 needs a positive integer")
    result = 1
    for p, e in factorize(m):
        if p == 2:
            result *= 2 ** (e - 3) if e >= 3 else 1
        else:
            result *= (p - 1) * p ** (e - 1) // 2
    return result


def multiplicative_order(a: int, n: int) -> int:
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    k, x = 1, a % n
    while x != 1 % n:
        x = x * a % n
        k += 1
    return k


def lift_unit(a: int, n: int, modulus: int) -> int:
    """A residue mod ``modulus`` congruent to ``a`` mod ``n`` and prime to ``modulus``."""
    step = n
    x = a % n
    for _ in range(modulus + 1):
        if gcd(x, modulus) == 1:
            return x % modulus
        x += step
    raise ValueError(f"no unit lift of {a} mod {n} to modulus {modulus}")


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficients low degree first; den monic
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)
