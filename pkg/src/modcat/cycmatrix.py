"""Dense matrices over a cyclotomic field with vectorized exact arithmetic."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _exact as ex
from .cyclotomic import Cyc, CyclotomicField, field
from .nt import lcm, units

_TOEPLITZ_LIMIT = 4_000_000


def _shift_matrix(fld: CyclotomicField, e: int) -> np.ndarray:
    """Matrix of multiplication by zeta^e on canonical coefficient vectors."""
    cache = fld.__dict__.setdefault("_shift", {})
    e %= fld.m
    mat = cache.get(e)
    if mat is None:
        mat = fld.powers[(np.arange(fld.phi) + e) % fld.m]
        cache[e] = mat
    return mat


def mul_roots(fld: CyclotomicField, num: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """Multiply each coefficient vector num[..., :] by zeta^exps[...]."""
    shape = num.shape
    flat = num.reshape(-1, shape[-1])
    e = np.broadcast_to(np.asarray(exps) % fld.m, shape[:-1]).reshape(-1)
    out = np.zeros_like(flat)
    if flat.dtype == object:
        out = out.astype(object)
    for val in np.unique(e):
        idx = np.nonzero(e == val)[0]
        if val == 0:
            out[idx] = flat[idx]
        else:
            out[idx] = ex.matmul(flat[idx], _shift_matrix(fld, int(val)))
    return ex.narrow(out).reshape(shape)


class CycMatrix:
    """An exact matrix: integer numerators of shape (rows, cols, phi(m)) over one denominator."""

    __slots__ = ("m", "num", "den")

    def __init__(self, m: int, num: np.ndarray, den: int = 1):
        den = int(den)
        if den < 0:
            num, den = ex.scale(num, -1), -den
        g = ex.gcd_all(num, den)
        if g > 1:
            num, den = ex.exact_div(num, g), den // g
        self.m = m
        self.num = ex.narrow(num)
        self.den = den

    # construction -------------------------------------------------------
    @classmethod
    def from_entries(cls, rows: Sequence[Sequence], m: int | None = None) -> "CycMatrix":
        cells = [[Cyc.coerce(x) for x in row] for row in rows]
        nr = len(cells)
        nc = len(cells[0]) if nr else 0
        conductors = [x.m for row in cells for x in row]
        mm = lcm(*(conductors + [m or 1]))
        fld = field(mm)
        dens = [x.den for row in cells for x in row]
        den = lcm(*dens) if dens else 1
        num = np.zeros((nr, nc, fld.phi), dtype=object)
        for i, row in enumerate(cells):
            for j, x in enumerate(row):
                x = x.promote(mm)
                num[i, j] = ex.widen(x.num) * (den // x.den)
        return cls(mm, num, den)

    @classmethod
    def from_ints(cls, mat, m: int = 1) -> "CycMatrix":
        mat = np.asarray(mat)
        fld = field(m)
        num = np.zeros(mat.shape + (fld.phi,), dtype=np.int64 if mat.dtype != object else object)
        num[..., 0] = mat
        return cls(m, num)

    @classmethod
    def from_fractions(cls, mat: Sequence[Sequence[Fraction]], m: int = 1) -> "CycMatrix":
        den = lcm(*(Fraction(x).denominator for row in mat for x in row)) if mat else 1
        ints = np.array([[Fraction(x).numerator * (den // Fraction(x).denominator) for x in row]
                         for row in mat], dtype=object)
        out = cls.from_ints(ints, m)
        return cls(m, out.num, den)

    @classmethod
    def identity(cls, n: int, m: int = 1) -> "CycMatrix":
        return cls.from_ints(np.eye(n, dtype=np.int64), m)

    @classmethod
    def diag_roots(cls, exps: Sequence[int], m: int) -> "CycMatrix":
        n = len(exps)
        fld = field(m)
        num = np.zeros((n, n, fld.phi), dtype=np.int64)
        for i, e in enumerate(exps):
            num[i, i] = fld.powers[e % m]
        return cls(m, num)

    # basic access -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.num.shape[0], self.num.shape[1]

    @property
    def field(self) -> CyclotomicField:
        return field(self.m)

    def __getitem__(self, idx: tuple[int, int]) -> Cyc:
        i, j = idx
        return Cyc(self.m, self.num[i, j].copy(), self.den)

    def to_lists(self) -> list[list[Cyc]]:
        r, c = self.shape
        return [[self[i, j] for j in range(c)] for i in range(r)]

    def row(self, i: int) -> list[Cyc]:
        return [self[i, j] for j in range(self.shape[1])]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "CycMatrix":
        return CycMatrix(self.m, self.num[np.ix_(list(rows), list(cols))], self.den)

    def permute(self, perm: Sequence[int]) -> "CycMatrix":
        """Matrix with entries [perm[i], perm[j]]."""
        return self.submatrix(perm, perm)

    def promote(self, m2: int) -> "CycMatrix":
        if m2 == self.m:
            return self
        mat = self.field.promote_matrix(m2)
        r, c = self.shape
        flat = ex.matmul(self.num.reshape(r * c, -1), mat)
        return CycMatrix(m2, flat.reshape(r, c, -1), self.den)

    @staticmethod
    def align(a: "CycMatrix", b: "CycMatrix") -> tuple["CycMatrix", "CycMatrix"]:
        if a.m == b.m:
            return a, b
        m = lcm(a.m, b.m)
        return a.promote(m), b.promote(m)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other: "CycMatrix") -> "CycMatrix":
        a, b = CycMatrix.align(self, other)
        d = lcm(a.den, b.den)
        return CycMatrix(a.m, ex.add(ex.scale(a.num, d // a.den), ex.scale(b.num, d // b.den)), d)

    def __neg__(self) -> "CycMatrix":
        return CycMatrix(self.m, ex.scale(self.num, -1), self.den)

    def __sub__(self, other: "CycMatrix") -> "CycMatrix":
        return self + (-other)

    def scale(self, x) -> "CycMatrix":
        """Multiply every entry by a scalar."""
        if isinstance(x, (int, Fraction)):
            q = Fraction(x)
            return CycMatrix(self.m, ex.scale(self.num, q.numerator), self.den * q.denominator)
        x = Cyc.coerce(x)
        m = lcm(self.m, x.m)
        a, x = self.promote(m), x.promote(m)
        prod = ex.conv(a.num, x.num)
        return CycMatrix(m, a.field.reduce(prod), a.den * x.den)

    def hadamard(self, other: "CycMatrix") -> "CycMatrix":
        a, b = CycMatrix.align(self, other)
        prod = ex.conv(a.num, b.num)
        return CycMatrix(a.m, a.field.reduce(prod), a.den * b.den)

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        a, b = CycMatrix.align(self, other)
        r, k, phi = a.num.shape
        c = b.num.shape[1]
        if k != b.num.shape[0]:
            raise ValueError("shape mismatch")
        full = _conv_matmul(a.num, b.num, r, k, c, phi)
        return CycMatrix(a.m, a.field.reduce(full), a.den * b.den)

    def int_matmul(self, mat: np.ndarray) -> "CycMatrix":
        """self @ mat for an integer matrix ``mat``."""
        r, k, phi = self.num.shape
        moved = np.moveaxis(self.num, 2, 1).reshape(r * phi, k)
        prod = ex.matmul(moved, np.asarray(mat))
        c = prod.shape[1]
        return CycMatrix(self.m, np.moveaxis(prod.reshape(r, phi, c), 1, 2), self.den)

    def rint_matmul(self, mat: np.ndarray) -> "CycMatrix":
        """mat @ self for an integer matrix ``mat``."""
        k, c, phi = self.num.shape
        prod = ex.matmul(np.asarray(mat), self.num.reshape(k, c * phi))
        return CycMatrix(self.m, prod.reshape(-1, c, phi), self.den)

    def mul_roots(self, exps: np.ndarray, m: int | None = None) -> "CycMatrix":
        """Multiply entry (i, j) by zeta_m^exps[i, j] (exps broadcast to the shape)."""
        base = self
        if m is not None and m != self.m:
            big = lcm(m, self.m)
            exps = np.asarray(exps) * (big // m)
            base = self.promote(big)
        elif m is None:
            m = self.m
        return CycMatrix(base.m, mul_roots(base.field, base.num, exps), base.den)

    def scale_rows(self, exps: Sequence[int], m: int | None = None) -> "CycMatrix":
        return self.mul_roots(np.asarray(exps).reshape(-1, 1), m)

    def scale_cols(self, exps: Sequence[int], m: int | None = None) -> "CycMatrix":
        return self.mul_roots(np.asarray(exps).reshape(1, -1), m)

    def galois(self, a: int) -> "CycMatrix":
        if a % self.m == 1 % self.m:
            return self
        r, c = self.shape
        flat = ex.matmul(self.num.reshape(r * c, -1), self.field.galois_matrix(a))
        return CycMatrix(self.m, flat.reshape(self.num.shape), self.den)

    def conj(self) -> "CycMatrix":
        return self.galois(-1)

    @property
    def T(self) -> "CycMatrix":
        return CycMatrix(self.m, np.swapaxes(self.num, 0, 1), self.den)

    def kron(self, other: "CycMatrix") -> "CycMatrix":
        a, b = CycMatrix.align(self, other)
        r1, c1, phi = a.num.shape
        r2, c2, _ = b.num.shape
        prod = ex.conv(a.num[:, None, :, None, :], b.num[None, :, None, :, :])
        red = a.field.reduce(prod.reshape(r1 * r2 * c1 * c2, -1))
        return CycMatrix(a.m, red.reshape(r1, r2, c1, c2, phi).reshape(r1 * r2, c1 * c2, phi),
                         a.den * b.den)

    # predicates ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        a, b = CycMatrix.align(self, other)
        return a.den == b.den and np.array_equal(a.num, b.num)

    __hash__ = None

    def zero_mask(self) -> np.ndarray:
        return ~self.num.any(axis=-1)

    def is_symmetric(self) -> bool:
        return np.array_equal(self.num, np.swapaxes(self.num, 0, 1))

    def integer_entries(self) -> np.ndarray | None:
        """The entries as an integer array when all are rational integers."""
        if self.num[..., 1:].any():
            return None
        vals = self.num[..., 0]
        if self.den == 1:
            return vals
        if vals.dtype == object:
            if any(int(v) % self.den for v in vals.flat):
                return None
        elif np.any(vals % self.den):
            return None
        return ex.exact_div(vals, self.den)

    def is_identity(self) -> bool:
        ints = self.integer_entries()
        return ints is not None and np.array_equal(ints, np.eye(self.shape[0], dtype=np.int64))

    def numeric(self) -> np.ndarray:
        if self.num.dtype == object:
            r, c = self.shape
            return np.array([[complex(self[i, j].embed()) for j in range(c)] for i in range(r)])
        return (self.num.astype(np.float64) @ self.field.roots) / self.den

    def column_keys(self) -> list[bytes]:
        nm = self.num if self.num.dtype != object else self.num.astype(str)
        return [nm[:, j].tobytes() for j in range(self.shape[1])]

    def __repr__(self) -> str:
        return f"CycMatrix(m={self.m}, shape={self.shape})"


def field_conductor(mat: CycMatrix) -> int:
    """Smallest d dividing mat.m such that every entry lies in Q(zeta_d)."""
    m = mat.m
    all_units = units(m)
    for d in (d for d in range(1, m + 1) if m % d == 0):
        kernel = [a for a in all_units if a % d == 1 % d]
        span = {1 % m}
        fixed = True
        for a in kernel:
            if a in span:
                continue
            if mat.galois(a) != mat:
                fixed = False
                break
            new = set(span)
            frontier = list(span)
            while frontier:
                frontier = [x * a % m for x in frontier if x * a % m not in new]
                new.update(frontier)
            span = new
        if fixed:
            return d
    return m


def _conv_matmul(a: np.ndarray, b: np.ndarray, r: int, k: int, c: int, phi: int) -> np.ndarray:
    width = 2 * phi - 1
    bound = ex.maxabs(a) * ex.maxabs(b) * k * phi
    if k * phi * c * width <= _TOEPLITZ_LIMIT:
        dtype = np.int64 if b.dtype != object else object
        toe = np.zeros((k, phi, c, width), dtype=dtype)
        for u in range(phi):
            toe[:, u, :, u:u + phi] = b
        full = ex.matmul(a.reshape(r, k * phi), toe.reshape(k * phi, c * width))
        return full.reshape(r, c, width)
    if a.dtype != object and b.dtype != object and bound < 2**53:
        af = a.astype(np.float64)
        bf = b.astype(np.float64).reshape(k, c * phi)
        out = np.zeros((r, c, width))
        for u in range(phi):
            out[:, :, u:u + phi] += (af[:, :, u] @ bf).reshape(r, c, phi)
        return np.rint(out).astype(np.int64)
    aw, bw = ex.widen(a), ex.widen(b).reshape(k, c * phi)
    out = np.zeros((r, c, width), dtype=object)
    for u in range(phi):
        out[:, :, u:u + phi] += (aw[:, :, u] @ bw).reshape(r, c, phi)
    return ex.narrow(out)


def stack_columns(mats: Iterable[CycMatrix]) -> CycMatrix:
    mats = list(mats)
    m = lcm(*(x.m for x in mats))
    mats = [x.promote(m) for x in mats]
    d = lcm(*(x.den for x in mats))
    parts = [ex.scale(x.num, d // x.den) for x in mats]
    if any(p.dtype == object for p in parts):
        parts = [ex.widen(p) for p in parts]
    num = np.concatenate(parts, axis=1)
    return CycMatrix(m, num, d)


def stack_rows(mats: Iterable[CycMatrix]) -> CycMatrix:
    return stack_columns([x.T for x in mats]).T
