"""Exact arithmetic in cyclotomic fields Q(zeta_m).

An element is stored in canonical form: integer numerators of the powers
zeta_m^0 .. zeta_m^(phi(m)-1) over one positive common denominator, reduced
modulo the m-th cyclotomic polynomial.  Operands with different conductors
are promoted to the lcm of the two conductors.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Union

import mpmath
import numpy as np

from . import _exact as ex
from .nt import cyclotomic_polynomial, euler_phi, factorize, is_prime, lcm, legendre, units

Scalar = Union["Cyc", int, Fraction]


def _mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


class CyclotomicField:
    """Reduction tables for Q(zeta_m); obtain instances through :func:`field`."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("conductor must be positive")
        self.m = m
        self.phi = euler_phi(m)
        self.poly = cyclotomic_polynomial(m)
        self.powers = self._power_table()
        self.powers.flags.writeable = False
        self._galois: dict[int, np.ndarray] = {}
        self._promote: dict[int, np.ndarray] = {}
        self._trace: tuple[Fraction, ...] | None = None
        self._roots: np.ndarray | None = None
        self._dft: tuple[np.ndarray, np.ndarray] | None = None

    def _power_table(self) -> np.ndarray:
        m, phi, poly = self.m, self.phi, self.poly
        rows = []
        cur = [1] + [0] * (phi - 1)
        for _ in range(m):
            rows.append(cur)
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [c - top * p for c, p in zip(cur, poly)]
        return np.array(rows, dtype=np.int64)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        """Canonical form of coefficient vectors along the last axis."""
        phi = self.phi
        length = arr.shape[-1]
        if length <= phi:
            if length == phi:
                return ex.narrow(arr)
            pad = np.zeros(arr.shape[:-1] + (phi - length,), dtype=arr.dtype)
            return ex.narrow(np.concatenate([arr, pad], axis=-1))
        low = arr[..., :phi]
        high = arr[..., phi:]
        table = self.powers[np.arange(phi, length) % self.m]
        flat = ex.matmul(high.reshape(-1, length - phi), table)
        return ex.add(low, flat.reshape(arr.shape[:-1] + (phi,)))

    def galois_matrix(self, a: int) -> np.ndarray:
        a %= self.m
        mat = self._galois.get(a)
        if mat is None:
            mat = self.powers[(a * np.arange(self.phi)) % self.m]
            self._galois[a] = mat
        return mat

    def promote_matrix(self, m2: int) -> np.ndarray:
        mat = self._promote.get(m2)
        if mat is None:
            if m2 % self.m:
                raise ValueError(f"{self.m} does not divide {m2}")
            target = field(m2)
            mat = target.powers[((m2 // self.m) * np.arange(self.phi)) % m2]
            self._promote[m2] = mat
        return mat

    @property
    def trace_weights(self) -> tuple[Fraction, ...]:
        """Normalized traces Tr(zeta^k)/phi(m), k < phi; independent of the conductor."""
        if self._trace is None:
            m = self.m
            w = []
            for k in range(self.phi):
                g = gcd(k, m)
                w.append(Fraction(_mobius(m // g), euler_phi(m // g)))
            self._trace = tuple(w)
        return self._trace

    @property
    def roots(self) -> np.ndarray:
        if self._roots is None:
            self._roots = np.exp(2j * np.pi * np.arange(self.phi) / self.m)
        return self._roots

    def dft(self) -> tuple[np.ndarray, np.ndarray]:
        """Evaluation matrices at all primitive m-th roots and back."""
        if self._dft is None:
            us = np.array(units(self.m) if self.m > 1 else [0])
            fwd = np.exp(2j * np.pi * np.outer(np.arange(self.phi), us) / self.m)
            back = np.exp(-2j * np.pi * np.outer(us, np.arange(self.m)) / self.m)
            self._dft = (fwd, back)
        return self._dft


@lru_cache(maxsize=None)
def field(m: int) -> CyclotomicField:
    return CyclotomicField(m)


def _to_fraction(c) -> Fraction:
    if isinstance(c, str):
        return Fraction(c.strip())
    return Fraction(c)


class Cyc:
    """An exact element of Q(zeta_m)."""

    __slots__ = ("m", "num", "den", "_hash")

    def __init__(self, m: int, num: np.ndarray, den: int = 1):
        # num must already be canonical with length phi(m)
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = ex.scale(num, -1), -den
        g = ex.gcd_all(num, den)
        if g > 1:
            num, den = ex.exact_div(num, g), den // g
        num = ex.narrow(np.asarray(num))
        num.flags.writeable = False
        self.m = m
        self.num = num
        self.den = den
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def from_vector(cls, m: int, vec: np.ndarray, den: int = 1) -> "Cyc":
        """From integer coefficients of zeta_m^0, zeta_m^1, ... (any length)."""
        vec = ex.narrow(np.asarray(vec))
        if vec.shape[-1] > m:
            folded = np.zeros(m, dtype=vec.dtype)
            for k in range(vec.shape[-1]):
                folded[k % m] += vec[k]
            vec = ex.narrow(folded)
        return cls(m, field(m).reduce(vec), den)

    @classmethod
    def from_coefficients(cls, m: int, coeffs: Iterable) -> "Cyc":
        fr = [_to_fraction(c) for c in coeffs]
        if not fr:
            return cls.zero(m)
        den = lcm(*(f.denominator for f in fr))
        vec = np.array([f.numerator * (den // f.denominator) for f in fr], dtype=object)
        return cls.from_vector(m, vec, den)

    @classmethod
    def zero(cls, m: int = 1) -> "Cyc":
        return cls(m, np.zeros(field(m).phi, dtype=np.int64))

    @classmethod
    def rational(cls, q, m: int = 1) -> "Cyc":
        q = _to_fraction(q)
        vec = np.zeros(field(m).phi, dtype=object)
        vec[0] = q.numerator
        return cls(m, vec, q.denominator)

    @classmethod
    def root(cls, m: int, k: int = 1) -> "Cyc":
        """zeta_m^k."""
        return cls(m, field(m).powers[k % m].copy())

    # conversions --------------------------------------------------------
    @property
    def field(self) -> CyclotomicField:
        return field(self.m)

    @property
    def coefficients(self) -> list[Fraction]:
        return [Fraction(int(c), self.den) for c in self.num]

    def promote(self, m2: int) -> "Cyc":
        if m2 == self.m:
            return self
        mat = self.field.promote_matrix(m2)
        return Cyc(m2, ex.matmul(self.num.reshape(1, -1), mat)[0], self.den)

    def is_zero(self) -> bool:
        return not self.num.any()

    def is_rational(self) -> bool:
        return not self.num[1:].any()

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(int(self.num[0]), self.den)

    def is_integer(self) -> bool:
        return self.is_rational() and self.den == 1

    def is_real(self) -> bool:
        return self == self.conj()

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def coerce(x: Scalar) -> "Cyc":
        if isinstance(x, Cyc):
            return x
        if isinstance(x, np.integer):
            x = int(x)
        if isinstance(x, (int, Fraction)):
            return Cyc.rational(x)
        raise TypeError(f"cannot interpret {x!r} as a cyclotomic number")

    @staticmethod
    def align(x: "Cyc", y: "Cyc") -> tuple["Cyc", "Cyc"]:
        if x.m == y.m:
            return x, y
        m = lcm(x.m, y.m)
        return x.promote(m), y.promote(m)

    def __add__(self, other: Scalar) -> "Cyc":
        try:
            x, y = Cyc.align(self, Cyc.coerce(other))
        except TypeError:
            return NotImplemented
        d = lcm(x.den, y.den)
        num = ex.add(ex.scale(x.num, d // x.den), ex.scale(y.num, d // y.den))
        return Cyc(x.m, num, d)

    __radd__ = __add__

    def __neg__(self) -> "Cyc":
        return Cyc(self.m, ex.scale(self.num, -1), self.den)

    def __sub__(self, other: Scalar) -> "Cyc":
        try:
            return self + (-Cyc.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other: Scalar) -> "Cyc":
        return Cyc.coerce(other) + (-self)

    def __mul__(self, other: Scalar) -> "Cyc":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            q = Fraction(other)
            return Cyc(self.m, ex.scale(self.num, q.numerator), self.den * q.denominator)
        try:
            x, y = Cyc.align(self, Cyc.coerce(other))
        except TypeError:
            return NotImplemented
        prod = ex.conv(x.num, y.num)
        return Cyc(x.m, x.field.reduce(prod), x.den * y.den)

    __rmul__ = __mul__

    def inverse(self) -> "Cyc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return Cyc.rational(1 / self.to_fraction(), self.m)
        inv = _inverse_numeric(self)
        if inv is None:
            inv = inverse_euclid(self)
        return inv

    def __truediv__(self, other: Scalar) -> "Cyc":
        try:
            other = Cyc.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> "Cyc":
        return Cyc.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "Cyc":
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyc.rational(1, self.m)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def galois(self, a: int) -> "Cyc":
        """Image under zeta_m -> zeta_m^a."""
        if gcd(a, self.m) != 1:
            raise ValueError(f"{a} is not a unit modulo {self.m}")
        if a % self.m == 1 % self.m:
            return self
        mat = self.field.galois_matrix(a)
        return Cyc(self.m, ex.matmul(self.num.reshape(1, -1), mat)[0], self.den)

    def conj(self) -> "Cyc":
        return self.galois(-1)

    # comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        try:
            x, y = Cyc.align(self, Cyc.coerce(other))
        except TypeError:
            return NotImplemented
        return x.den == y.den and np.array_equal(x.num, y.num)

    def __hash__(self) -> int:
        if self._hash is None:
            w = self.field.trace_weights
            t = sum((int(c) * wk for c, wk in zip(self.num, w) if c), Fraction(0))
            self._hash = hash(t / self.den)
        return self._hash

    def key(self) -> tuple:
        """Hashable canonical form at the current conductor."""
        body = self.num.tobytes() if self.num.dtype != object else tuple(int(c) for c in self.num)
        return (self.m, self.den, body)

    # numerics -----------------------------------------------------------
    def embed(self, precision: int = 53):
        """Complex value at zeta_m = exp(2 pi i / m)."""
        if precision <= 53 and self.num.dtype != object:
            return complex(self.num.astype(np.float64) @ self.field.roots) / self.den
        with mpmath.workprec(precision + 16):
            total = mpmath.mpc(0)
            for k, c in enumerate(self.num):
                if c:
                    total += int(c) * mpmath.expjpi(mpmath.mpf(2 * k) / self.m)
            return total / self.den

    def error_bound(self, precision: int = 53) -> float:
        """Bound on |embed(precision) - true value|."""
        l1 = sum(abs(int(c)) for c in self.num) / self.den
        return l1 * (2 * self.field.phi + 8) * 2.0 ** (1 - precision)

    def __complex__(self) -> complex:
        return complex(self.embed())

    def sign(self) -> int:
        """Sign of a real element, decided with precision doubling."""
        if self.is_zero():
            return 0
        if not self.is_real():
            raise ValueError("sign of a non-real number")
        prec = 53
        while True:
            v = self.embed(prec)
            err = self.error_bound(prec)
            re = float(v.real) if prec <= 53 else v.real
            if abs(re) > err:
                return 1 if re > 0 else -1
            prec *= 2
            if prec > 1 << 16:
                raise ArithmeticError("could not separate value from zero")

    def is_positive(self) -> bool:
        return self.sign() > 0

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        coeffs = []
        for k in range(self.m):
            c = Fraction(int(self.num[k]), self.den) if k < len(self.num) else Fraction(0)
            coeffs.append(f"{c.numerator}/{c.denominator}")
        return {"conductor": self.m, "coefficients": coeffs}

    @classmethod
    def from_json(cls, obj: dict) -> "Cyc":
        return cls.from_coefficients(int(obj["conductor"]), obj["coefficients"])

    def __repr__(self) -> str:
        return f"Cyc({self.m}, {self})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.num):
            if not c:
                continue
            q = Fraction(int(c), self.den)
            if k == 0:
                terms.append(str(q))
            else:
                coef = "" if q == 1 else "-" if q == -1 else f"{q}*"
                terms.append(f"{coef}z{self.m}^{k}" if k > 1 else f"{coef}z{self.m}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def E(m: int, k: int = 1) -> Cyc:
    """Shorthand for zeta_m^k."""
    return Cyc.root(m, k)


# inversion ----------------------------------------------------------------

def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        a.pop()
        _poly_trim(a)
    return q, a


def _poly_sub_mul(s0: list[Fraction], q: list[Fraction], s1: list[Fraction]) -> list[Fraction]:
    out = list(s0) + [Fraction(0)] * max(0, len(q) + len(s1) - 1 - len(s0))
    for i, qi in enumerate(q):
        if qi:
            for j, sj in enumerate(s1):
                out[i + j] -= qi * sj
    return _poly_trim(out)


def inverse_euclid(x: Cyc) -> Cyc:
    """Inverse by the extended Euclidean algorithm against Phi_m."""
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero")
    f = [Fraction(c) for c in x.field.poly]
    a = _poly_trim([Fraction(int(c)) for c in x.num])
    r0, r1 = f, a
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub_mul(s0, q, s1)
    c = r1[0]
    # s1 * num == c (mod Phi), so 1/x = den * s1 / c
    return Cyc.from_coefficients(x.m, [sj * x.den / c for sj in s1])


def _inverse_numeric(x: Cyc) -> Cyc | None:
    """Fast inverse: round a floating-point guess, then confirm exactly."""
    if x.num.dtype == object or x.field.phi < 8:
        return None
    fld = x.field
    fwd, back = fld.dft()
    vals = x.num.astype(np.float64) @ fwd
    mags = np.abs(vals)
    if not np.all(mags > 1e-9):
        return None
    log_norm = float(np.sum(np.log2(mags)))
    if log_norm > 40:
        return None
    norm = np.prod(vals)
    n = int(round(norm.real))
    if n == 0 or abs(norm.real - n) > 1e-6 * max(1, abs(n)):
        return None
    traces = (n / vals) @ back
    if np.max(np.abs(traces)) > 2.0**45:
        return None
    rounded = np.rint(traces.real)
    if np.max(np.abs(traces - rounded)) > 1e-3:
        return None
    cand = Cyc.from_vector(x.m, rounded.astype(np.int64), x.m * n) * x.den
    return cand if (cand * x) == 1 else None


# special elements -----------------------------------------------------------

def root_exponent(x: Cyc) -> Fraction | None:
    """Return r in [0, 1) with x = exp(2 pi i r) exactly, or None."""
    if x.is_zero():
        return None
    n = lcm(2, x.m)
    v = x.embed()
    if abs(abs(v) - 1) > 1e-6:
        return None
    k = round(cmath.phase(v) * n / (2 * math.pi)) % n
    if x == Cyc.root(n, k):
        return Fraction(k, n)
    return None


def quantum_integer(n: int, root: Cyc) -> Cyc:
    """[n]_q = q^(n-1) + q^(n-3) + ... + q^(1-n), without division."""
    r = root_exponent(root)
    if r is None:
        raise ValueError("quantum integers need a root of unity")
    if r.denominator <= 2:
        raise ValueError("quantum integers are undefined at q = 1 or q = -1")
    if n == 0:
        return Cyc.zero(root.m)
    if n < 0:
        return -quantum_integer(-n, root)
    m = lcm(root.m, r.denominator)
    e = r.numerator * (m // r.denominator)
    vec = np.zeros(m, dtype=np.int64)
    for j in range(n):
        vec[(e * (n - 1 - 2 * j)) % m] += 1
    return Cyc.from_vector(m, vec).promote(lcm(m, root.m))


def gauss_sum_sqrt(p: int) -> Cyc:
    """Quadratic Gauss sum; its square is p or -p according to p mod 4."""
    if p < 3 or not is_prime(p):
        raise ValueError("need an odd prime")
    vec = np.array([legendre(t, p) for t in range(p)], dtype=np.int64)
    return Cyc.from_vector(p, vec)


def norm(x: Cyc) -> Fraction:
    """Product of all conjugates of x in Q(zeta_m)."""
    prod = Cyc.rational(1, x.m)
    for a in units(x.m):
        prod = prod * x.galois(a)
    return prod.to_fraction()


# functional aliases --------------------------------------------------------

def cyc_add(x: Scalar, y: Scalar) -> Cyc:
    return Cyc.coerce(x) + y


def cyc_mul(x: Scalar, y: Scalar) -> Cyc:
    return Cyc.coerce(x) * y


def cyc_inv(x: Scalar) -> Cyc:
    return Cyc.coerce(x).inverse()


def cyc_galois(x: Scalar, a: int) -> Cyc:
    return Cyc.coerce(x).galois(a)


def cyc_embed(x: Scalar, precision: int = 53):
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    return Cyc.coerce(x).embed(precision)
