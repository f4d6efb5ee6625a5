"""Modular data: construction, validation and structural invariants.

A :class:`ModularData` record carries the unnormalized S-matrix over
Q(zeta_M), the twists as exponents of zeta_M and the duality permutation.
Premodular (degenerate) data is allowed; such records must carry their
fusion ring explicitly since the Verlinde formula does not apply.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from . import _exact as ex
from .cyclotomic import Cyc, quantum_integer, root_exponent
from .cycmatrix import CycMatrix
from .linalg import rank as exact_rank
from .nt import lcm, units


class ModularDataError(Exception):
    """Base class for invalid or inconsistent modular data."""


class NotModular(ModularDataError):
    """Verlinde coefficients are not nonnegative integers."""


class SingularS(ModularDataError):
    """The S-matrix is not invertible."""


class DegenerateForm(ModularDataError):
    """A quadratic form is not nondegenerate."""


class FactorizationFailure(ModularDataError):
    """Prime factor supports do not assemble into the whole category."""


class ZeroGaussSum(ModularDataError):
    """tau_m vanishes, so the anomaly is undefined."""


# fusion rings -----------------------------------------------------------------

class FusionRing:
    """Fusion coefficients ``N[x, y, z] = N_{x,y}^z`` with unit 0."""

    def __init__(self, coefficients: np.ndarray, dual_perm: Sequence[int]):
        self.N = np.asarray(coefficients, dtype=np.int64)
        self.N.flags.writeable = False
        self.dual_perm = tuple(int(i) for i in dual_perm)
        r = self.N.shape[0]
        if self.N.shape != (r, r, r) or len(self.dual_perm) != r:
            raise ValueError("fusion tensor has the wrong shape")

    @property
    def rank(self) -> int:
        return self.N.shape[0]

    def fusion_matrix(self, x: int) -> np.ndarray:
        """Matrix of left multiplication by x: entry [z, y] = N_{x,y}^z."""
        return self.N[x].T

    def product(self, x: int, y: int) -> dict[int, int]:
        return {int(z): int(c) for z, c in enumerate(self.N[x, y]) if c}

    def check(self) -> list[str]:
        """Names of the violated fusion-ring axioms."""
        N, r, dual = self.N, self.rank, self.dual_perm
        bad = []
        if np.any(N < 0):
            bad.append("nonnegativity")
        if not np.array_equal(N[0], np.eye(r, dtype=np.int64)):
            bad.append("unit")
        if not np.array_equal(N, N.transpose(1, 0, 2)):
            bad.append("commutativity")
        dual_idx = np.array(dual)
        if not np.array_equal(N, N[dual_idx].transpose(0, 2, 1)):
            bad.append("duality")
        if dual[0] != 0 or any(dual[dual[i]] != i for i in range(r)):
            bad.append("dual involution")
        if r <= 40:
            left = np.einsum("xyw,wzv->xyzv", N, N)
            right = np.einsum("yzw,xwv->xyzv", N, N)
            if not np.array_equal(left, right):
                bad.append("associativity")
        return bad

    def kron(self, other: "FusionRing") -> "FusionRing":
        r1, r2 = self.rank, other.rank
        N = np.einsum("ace,bdf->abcdef", self.N, other.N).reshape(r1 * r2, r1 * r2, r1 * r2)
        dual = [self.dual_perm[a] * r2 + other.dual_perm[b] for a in range(r1) for b in range(r2)]
        return FusionRing(N, dual)

    def restrict(self, subset: Sequence[int]) -> "FusionRing":
        idx = list(subset)
        pos = {x: i for i, x in enumerate(idx)}
        return FusionRing(self.N[np.ix_(idx, idx, idx)], [pos[self.dual_perm[x]] for x in idx])

    def __eq__(self, other) -> bool:
        return (isinstance(other, FusionRing) and self.dual_perm == other.dual_perm
                and np.array_equal(self.N, other.N))

    __hash__ = None

    def to_json(self) -> dict:
        return {"N": self.N.tolist(), "dual_perm": list(self.dual_perm)}

    @classmethod
    def from_json(cls, obj: dict) -> "FusionRing":
        return cls(np.array(obj["N"], dtype=np.int64), obj["dual_perm"])


# modular data -----------------------------------------------------------------

class ModularData:
    """Labels, exact S over Q(zeta_conductor), twist exponents and duality."""

    def __init__(self, labels: Sequence[str], conductor: int, S: CycMatrix,
                 theta_exponents: Sequence[int], dual_perm: Sequence[int] | None = None,
                 fusion: FusionRing | None = None,
                 factors: tuple["ModularData", "ModularData"] | None = None):
        r = len(labels)
        if S.shape != (r, r) or len(theta_exponents) != r:
            raise ValueError("labels, S and theta have inconsistent sizes")
        if conductor % S.m:
            S = S.promote(lcm(S.m, conductor))
            conductor = S.m
        self.labels = tuple(str(x) for x in labels)
        self.conductor = conductor
        self.S = S.promote(conductor)
        self.theta_exponents = tuple(int(e) % conductor for e in theta_exponents)
        self.dual_perm = tuple(range(r)) if dual_perm is None else tuple(int(i) for i in dual_perm)
        self.explicit_fusion = fusion
        self.factors = factors

    def __repr__(self) -> str:
        return f"ModularData(rank={self.rank}, conductor={self.conductor}, labels={list(self.labels)})"

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: int | str) -> int:
        if isinstance(label, (int, np.integer)):
            return int(label)
        return self.labels.index(label)

    @cached_property
    def dims(self) -> list[Cyc]:
        return self.S.row(0)

    @cached_property
    def dim_row(self) -> CycMatrix:
        return self.S.submatrix([0], range(self.rank))

    def theta(self, x: int | str) -> Cyc:
        return Cyc.root(self.conductor, self.theta_exponents[self.index(x)])

    @cached_property
    def ord_T(self) -> int:
        m = self.conductor
        return lcm(*(m // gcd(m, e) for e in self.theta_exponents))

    @cached_property
    def global_dim(self) -> Cyc:
        sq = self.dim_row.hadamard(self.dim_row)
        return _matrix_sum(sq)

    @cached_property
    def fusion(self) -> FusionRing:
        if self.explicit_fusion is not None:
            return self.explicit_fusion
        if self.factors is not None:
            return self.factors[0].fusion.kron(self.factors[1].fusion)
        return verlinde_fusion(self)

    @property
    def fusion_known(self) -> bool:
        """True when the fusion ring is available without the Verlinde formula."""
        if self.explicit_fusion is not None:
            return True
        return self.factors is not None and all(f.fusion_known for f in self.factors)

    @cached_property
    def transparency(self) -> np.ndarray:
        """Boolean matrix of pairs (X, Y) with S_{X,Y} = d_X d_Y."""
        col = self.dim_row.T
        outer = col.hadamard(self.dim_row)
        return (self.S - outer).zero_mask()

    def charge_conjugation(self) -> np.ndarray:
        r = self.rank
        c = np.zeros((r, r), dtype=np.int64)
        for x, y in enumerate(self.dual_perm):
            c[x, y] = 1
        return c

    def with_fusion(self, fusion: FusionRing) -> "ModularData":
        return ModularData(self.labels, self.conductor, self.S, self.theta_exponents,
                           self.dual_perm, fusion)

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "labels": list(self.labels),
            "conductor": self.conductor,
            "S": [[x.to_json()["coefficients"] for x in row] for row in self.S.to_lists()],
            "theta_exponents": list(self.theta_exponents),
            "dual_perm": list(self.dual_perm),
        }
        if self.fusion_known:
            out["fusion"] = self.fusion.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ModularData":
        m = int(obj["conductor"])
        rows = [[Cyc.from_coefficients(m, cell) for cell in row] for row in obj["S"]]
        S = CycMatrix.from_entries(rows, m)
        fusion = FusionRing.from_json(obj["fusion"]) if "fusion" in obj else None
        return cls(obj["labels"], m, S, obj["theta_exponents"], obj.get("dual_perm"), fusion)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _matrix_sum(mat: CycMatrix) -> Cyc:
    num = mat.num
    if num.dtype != object and ex.maxabs(num) * num.shape[0] * num.shape[1] < 2**62:
        total = num.sum(axis=(0, 1))
    else:
        total = ex.widen(num).sum(axis=(0, 1))
    return Cyc(mat.m, ex.narrow(np.asarray(total)), mat.den)


# constructors -----------------------------------------------------------------

def trivial_data() -> ModularData:
    return ModularData(["1"], 1, CycMatrix.identity(1), [0])


def sl2_fusion_rule(k: int, a: int, b: int, c: int) -> int:
    """Closed-form fusion multiplicity of V_a (x) V_b -> V_c at level k."""
    ok = abs(a - b) <= c <= min(a + b, 2 * k - a - b) and (a + b - c) % 2 == 0
    return int(ok)


def build_sl2(k: int, l: int) -> ModularData:
    """Quantum-group data at level k with q = zeta_{2(k+2)}^l."""
    if k < 1:
        raise ValueError("level must be positive")
    if gcd(l, 2 * (k + 2)) != 1:
        raise ValueError(f"l = {l} is not a unit modulo {2 * (k + 2)}")
    m = 4 * (k + 2)
    q = Cyc.root(m, 2 * l)
    qint = {n: quantum_integer(n, q) for n in range(1, (k + 1) ** 2 + 1)}
    rows = [[qint[(a + 1) * (b + 1)] for b in range(k + 1)] for a in range(k + 1)]
    theta = [l * a * (a + 2) for a in range(k + 1)]
    return ModularData([f"V{a}" for a in range(k + 1)], m, CycMatrix.from_entries(rows, m), theta)


def build_sl2_adjoint(k: int, l: int, *, allow_even: bool = False) -> ModularData:
    """Subcategory of integer-spin objects V_0, V_2, ... of the level-k data.

    Odd k gives modular data.  Even k (with ``allow_even``) gives premodular
    data whose transparent fermion is V_k; its fusion ring is attached.
    """
    if k < 1:
        raise ValueError("level must be positive")
    if k % 2 == 0 and not allow_even:
        raise ValueError("the adjoint subcategory is modular only for odd k")
    if gcd(l, 2 * (k + 2)) != 1:
        raise ValueError(f"l = {l} is not a unit modulo {2 * (k + 2)}")
    m = 2 * (k + 2)
    q = Cyc.root(m, l)
    js = range(k // 2 + 1)
    qint = {}
    rows = []
    for j in js:
        row = []
        for i in js:
            n = (2 * j + 1) * (2 * i + 1)
            if n not in qint:
                qint[n] = quantum_integer(n, q)
            row.append(qint[n])
        rows.append(row)
    theta = [2 * l * j * (j + 1) for j in js]
    fusion = None
    if k % 2 == 0:
        r = len(js)
        N = np.zeros((r, r, r), dtype=np.int64)
        for a, b, c in itertools.product(js, js, js):
            N[a, b, c] = sl2_fusion_rule(k, 2 * a, 2 * b, 2 * c)
        fusion = FusionRing(N, range(r))
    labels = [f"V{2 * j}" for j in js]
    return ModularData(labels, m, CycMatrix.from_entries(rows, m), theta, None, fusion)


def cyclic_quadratic_form(n: int, c: int, conductor: int) -> list[int]:
    """Exponents of q(a) = zeta_conductor^(c a^2) on Z/n."""
    return [(c * a * a) % conductor for a in range(n)]


def build_pointed(cyclic_orders: Sequence[int], q_exponents: Sequence[int],
                  conductor: int) -> ModularData:
    """Pointed data on A = Z/n_1 x ... from q(a) = zeta_conductor^(q_exponents[a]).

    Group elements are enumerated lexicographically.
    """
    orders = [int(n) for n in cyclic_orders]
    elems = list(itertools.product(*(range(n) for n in orders))) if orders else [()]
    pos = {a: i for i, a in enumerate(elems)}
    if len(q_exponents) != len(elems):
        raise ValueError("need one q exponent per group element")
    e = [int(x) % conductor for x in q_exponents]

    def add(a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, orders))

    def neg(a):
        return tuple((-x) % n for x, n in zip(a, orders))

    if e[0] != 0:
        raise DegenerateForm("q(0) must be 1")
    for a in elems:
        if e[pos[neg(a)]] != e[pos[a]]:
            raise DegenerateForm("q is not even")

    def bichar(a, b):
        return (e[pos[add(a, b)]] - e[pos[a]] - e[pos[b]]) % conductor

    for a, b, c in itertools.product(elems, repeat=3):
        if bichar(add(a, b), c) != (bichar(a, c) + bichar(b, c)) % conductor:
            raise DegenerateForm("associated form is not a bicharacter")
    for a in elems[1:]:
        if all(bichar(a, b) == 0 for b in elems):
            raise DegenerateForm(f"bicharacter is degenerate at {a}")
    size = len(elems)
    fld_rows = [[Cyc.root(conductor, -bichar(a, b)) for b in elems] for a in elems]
    if len(orders) == 1:
        labels = [str(a[0]) for a in elems]
    else:
        labels = ["(" + ",".join(map(str, a)) + ")" for a in elems]
    dual = [pos[neg(a)] for a in elems]
    S = CycMatrix.from_entries(fld_rows, conductor) if size else CycMatrix.identity(1)
    return ModularData(labels, conductor, S, e, dual)


def build_svec(eps: int) -> ModularData:
    """sVec with d_f = eps; degenerate, fusion ring attached."""
    if eps not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    S = CycMatrix.from_ints(np.array([[1, eps], [eps, 1]]), 2)
    theta = [0, 1 if eps == 1 else 0]
    N = np.zeros((2, 2, 2), dtype=np.int64)
    for a, b in itertools.product(range(2), repeat=2):
        N[a, b, (a + b) % 2] = 1
    return ModularData(["1", "f"], 2, S, theta, None, FusionRing(N, [0, 1]))


def deligne_product(A: ModularData, B: ModularData) -> ModularData:
    m = lcm(A.conductor, B.conductor)
    S = A.S.promote(m).kron(B.S.promote(m))
    fa, fb = m // A.conductor, m // B.conductor
    theta = [ea * fa + eb * fb for ea in A.theta_exponents for eb in B.theta_exponents]
    labels = [f"({a},{b})" for a in A.labels for b in B.labels]
    rb = B.rank
    dual = [A.dual_perm[x] * rb + B.dual_perm[y] for x in range(A.rank) for y in range(rb)]
    return ModularData(labels, m, S, theta, dual, None, (A, B))


def deligne_power(*parts: ModularData) -> ModularData:
    out = parts[0]
    for p in parts[1:]:
        out = deligne_product(out, p)
    return out


def restrict(C: ModularData, subset: Iterable[int]) -> ModularData:
    """Data of the fusion subcategory supported on ``subset``."""
    idx = sorted(set(int(i) for i in subset))
    if idx[0] != 0:
        raise ValueError("a subcategory must contain the unit")
    pos = {x: i for i, x in enumerate(idx)}
    dual = [pos[C.dual_perm[x]] for x in idx]
    fusion = C.fusion.restrict(idx) if (C.fusion_known or "fusion" in C.__dict__) else None
    return ModularData([C.labels[i] for i in idx], C.conductor, C.S.submatrix(idx, idx),
                       [C.theta_exponents[i] for i in idx], dual, fusion)


# invertibility and Verlinde ---------------------------------------------------------

def _is_invertible(S: CycMatrix, D: Cyc | None = None, transparent: np.ndarray | None = None) -> bool:
    r = S.shape[0]
    if D is None:
        D = _matrix_sum(S.submatrix([0], range(r)).hadamard(S.submatrix([0], range(r))))
    if not D.is_zero():
        gram = S @ S.conj().T
        if gram == CycMatrix.identity(r).scale(D):
            return True
    if transparent is not None and transparent[1:].all(axis=1).any():
        return False
    return exact_rank(S) == r


def verlinde_fusion(C: ModularData) -> FusionRing:
    """N_{X,Y}^Z = (1/dim) sum_W S_{X,W} S_{Y,W} S_{Z*,W} / S_{1,W}, checked integral."""
    S, r = C.S, C.rank
    if not _is_invertible(S, C.global_dim):
        raise SingularS("S-matrix is singular")
    if any(d.is_zero() for d in C.dims):
        raise NotModular("a quantum dimension vanishes")
    inv_d = CycMatrix.from_entries([[d.inverse() for d in C.dims]], C.conductor)
    U = S.hadamard(inv_d)
    B = CycMatrix(S.m, S.num[:, None, :, :], S.den).hadamard(CycMatrix(U.m, U.num[None], U.den))
    flat = CycMatrix(B.m, B.num.reshape(r * r, r, -1), B.den)
    Sdual = S.submatrix(list(C.dual_perm), range(r))
    raw = flat @ Sdual.T
    vals = raw.scale(C.global_dim.inverse()).integer_entries()
    if vals is None:
        raise NotModular("Verlinde coefficients are not all rational integers")
    N = vals.reshape(r, r, r)
    if np.any(N < 0):
        raise NotModular("negative Verlinde coefficient")
    return FusionRing(N, C.dual_perm)


# validation ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    checks: dict[str, bool] = dc_field(default_factory=dict)
    warnings: list[str] = dc_field(default_factory=list)
    notes: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks, "warnings": self.warnings,
                "notes": self.notes}


def validate_modular(C: ModularData) -> ValidationReport:
    rep = ValidationReport()
    r, S, dual = C.rank, C.S, C.dual_perm
    rep.checks["S symmetric"] = S.is_symmetric()
    rep.checks["unit normalization"] = C.dims[0] == 1 and C.theta_exponents[0] == 0
    rep.checks["dual involution"] = dual[0] == 0 and all(dual[dual[i]] == i for i in range(r))
    rep.checks["S invariant under duality"] = S.permute(list(dual)) == S
    invertible = _is_invertible(S, C.global_dim, C.transparency)
    rep.checks["det S nonzero"] = invertible
    fusion = None
    if invertible:
        try:
            fusion = verlinde_fusion(C)
            rep.checks["Verlinde integrality"] = True
        except NotModular as err:
            rep.checks["Verlinde integrality"] = False
            rep.notes.append(str(err))
    else:
        rep.checks["Verlinde integrality"] = False
        rep.notes.append("Verlinde formula skipped: S is singular")
    square = S @ S
    rep.checks["S^2 = dim * C"] = square == CycMatrix.from_ints(C.charge_conjugation()).scale(C.global_dim)
    rep.checks["theta finite order"] = True
    if fusion is None and C.fusion_known:
        fusion = C.fusion
    if fusion is not None:
        bad = fusion.check()
        rep.checks["fusion ring axioms"] = not bad
        if bad:
            rep.notes.append("fusion axioms violated: " + ", ".join(bad))
        if not balancing_holds(C, fusion):
            rep.warnings.append("balancing identity S_XY theta_X theta_Y = "
                                "sum_Z N_{X*Y}^Z theta_Z d_Z fails")
    return rep


def balancing_holds(C: ModularData, fusion: FusionRing) -> bool:
    r = C.rank
    e = np.array(C.theta_exponents)
    lhs = C.S.mul_roots(e[:, None] + e[None, :])
    td = C.dim_row.T.mul_roots(e.reshape(-1, 1))
    coeff = fusion.N[list(C.dual_perm)].reshape(r * r, r)
    rhs = td.rint_matmul(coeff)
    rhs = CycMatrix(rhs.m, rhs.num.reshape(r, r, -1), rhs.den)
    return lhs == rhs


# dimensions, Gauss sums, anomaly ------------------------------------------------

def global_dim(C: ModularData) -> Cyc:
    return C.global_dim


def gauss_sum(C: ModularData, m: int) -> Cyc:
    """tau_m = sum_X d_X^2 theta_X^m."""
    sq = C.dim_row.hadamard(C.dim_row)
    e = np.array(C.theta_exponents) * m
    return _matrix_sum(sq.mul_roots(e.reshape(1, -1)))


def anomaly(C: ModularData, m: int = 1) -> Cyc:
    """alpha_m = tau_m / conj(tau_m), verified to be a root of unity."""
    if gcd(m, C.ord_T) != 1:
        raise ValueError(f"m = {m} is not prime to ord(T) = {C.ord_T}")
    tau = gauss_sum(C, m)
    if tau.is_zero():
        raise ZeroGaussSum(f"tau_{m} vanishes")
    alpha = tau / tau.conj()
    if root_exponent(alpha) is None:
        raise ArithmeticError("anomaly is not a root of unity")
    return alpha


@dataclass
class FPDims:
    values: list[float]
    realizer: int | None  # residue a with sigma_a(d_X) = FPdim(X) for all X

    def to_json(self) -> dict:
        return {"values": self.values, "realizer": self.realizer}


def fp_dims(C: ModularData) -> FPDims:
    F = C.fusion
    vals = []
    for x in range(C.rank):
        eig = np.linalg.eigvals(F.fusion_matrix(x).astype(float))
        real = eig[np.abs(eig.imag) < 1e-7].real
        vals.append(float(real.max()))
    m = C.conductor
    coeffs = C.dim_row.num[0].astype(float) / C.dim_row.den
    realizer = None
    for a in units(m):
        w = np.exp(2j * np.pi * a * np.arange(coeffs.shape[1]) / m)
        conj = coeffs @ w
        if np.allclose(conj.imag, 0, atol=1e-8) and np.allclose(conj.real, vals, atol=1e-7):
            realizer = a
            break
    return FPDims(vals, realizer)


# subcategories ------------------------------------------------------------------

def _fusion_of(C: ModularData | FusionRing) -> FusionRing:
    return C if isinstance(C, FusionRing) else C.fusion


def _closure(F: FusionRing, seed: Iterable[int]) -> frozenset[int]:
    mask = np.zeros(F.rank, dtype=bool)
    mask[0] = True
    mask[list(seed)] = True
    dual = np.array(F.dual_perm)
    while True:
        idx = np.nonzero(mask)[0]
        new = F.N[np.ix_(idx, idx)].any(axis=(0, 1)) | mask
        new[dual[new]] = True
        if np.array_equal(new, mask):
            return frozenset(int(i) for i in np.nonzero(mask)[0])
        mask = new


def tensor_generated(C: ModularData | FusionRing, X: int | str) -> frozenset[int]:
    F = _fusion_of(C)
    x = C.index(X) if isinstance(C, ModularData) else int(X)
    return _closure(F, [x])


def all_fusion_subcategories(C: ModularData | FusionRing) -> list[frozenset[int]]:
    F = _fusion_of(C)
    found = {_closure(F, [x]) for x in range(F.rank)}
    frontier = list(found)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(found):
                j = _closure(F, a | b)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def centralizer(C: ModularData, D: Iterable[int | str]) -> frozenset[int]:
    idx = [C.index(x) for x in D]
    ok = C.transparency[:, idx].all(axis=1)
    return frozenset(int(i) for i in np.nonzero(ok)[0])


def is_modular_subcategory(C: ModularData, D: Iterable[int]) -> bool:
    """Whether the S-submatrix on D is invertible."""
    idx = sorted(D)
    cache = C.__dict__.setdefault("_modular_sub", {})
    key = tuple(idx)
    if key not in cache:
        sub = C.S.submatrix(idx, idx)
        dsub = _matrix_sum(C.dim_row.submatrix([0], idx).hadamard(C.dim_row.submatrix([0], idx)))
        trans = C.transparency[np.ix_(idx, idx)]
        cache[key] = _is_invertible(sub, dsub, trans)
    return cache[key]


def is_prime(C: ModularData) -> bool:
    full = frozenset(range(C.rank))
    for D in all_fusion_subcategories(C):
        if len(D) > 1 and D != full and is_modular_subcategory(C, D):
            return False
    return True


def prime_factorization(C: ModularData, order: Sequence[int] | None = None) -> list[frozenset[int]]:
    """Supports of the prime factors, found by repeated splitting off of minimal modular subcategories."""
    r = C.rank
    order = list(order) if order is not None else list(range(r))
    rankpos = {x: i for i, x in enumerate(order)}
    subs = all_fusion_subcategories(C)
    remaining = frozenset(range(r))
    factors: list[frozenset[int]] = []
    while len(remaining) > 1:
        cands = [D for D in subs if len(D) > 1 and D <= remaining and is_modular_subcategory(C, D)]
        if not cands:
            raise FactorizationFailure("no modular subcategory left to split off")
        pick = min(cands, key=lambda D: (len(D), sorted(rankpos[x] for x in D)))
        factors.append(pick)
        remaining = centralizer(C, pick) & remaining
    _check_factorization(C, factors)
    return factors


def _check_factorization(C: ModularData, factors: list[frozenset[int]]) -> None:
    r = C.rank
    size = 1
    for D in factors:
        size *= len(D)
    if size != r:
        raise FactorizationFailure(f"factor sizes multiply to {size}, rank is {r}")
    for a, b in itertools.combinations(factors, 2):
        if not C.transparency[np.ix_(sorted(a), sorted(b))].all():
            raise FactorizationFailure("factors do not centralize each other")
    F = C.fusion
    seen = set()
    for tup in itertools.product(*(sorted(D) for D in factors)):
        vec = np.zeros(r, dtype=np.int64)
        vec[0] = 1
        for x in tup:
            vec = vec @ F.N[:, x, :] if False else np.einsum("y,yz->z", vec, F.N[x])
        if vec.sum() != 1:
            raise FactorizationFailure(f"product of {tup} is not simple")
        seen.add(int(np.argmax(vec)))
    if len(seen) != r:
        raise FactorizationFailure("factor products do not exhaust the simples")


# equivalence --------------------------------------------------------------------

def _entry_keys(S: CycMatrix, m: int, den: int) -> list[list[bytes]]:
    S = S.promote(m)
    num = ex.scale(S.num, den // S.den)
    num = num if num.dtype != object else num.astype(str)
    r = S.shape[0]
    return [[num[i, j].tobytes() for j in range(r)] for i in range(r)]


def data_equivalent(A: ModularData, B: ModularData) -> list[int] | None:
    """A bijection pi with pi(1) = 1 matching S and theta exactly, or None."""
    r = A.rank
    if B.rank != r:
        return None
    m = lcm(A.conductor, B.conductor)
    den = lcm(A.S.den, B.S.den)
    ka, kb = _entry_keys(A.S, m, den), _entry_keys(B.S, m, den)
    ta = [e * (m // A.conductor) % m for e in A.theta_exponents]
    tb = [e * (m // B.conductor) % m for e in B.theta_exponents]
    fa = [(ta[x], ka[0][x]) for x in range(r)]
    fb = [(tb[y], kb[0][y]) for y in range(r)]
    if sorted(fa) != sorted(fb):
        return None
    cands = {x: [y for y in range(r) if fb[y] == fa[x]] for x in range(r)}
    if 0 not in cands[0]:
        return None
    cands[0] = [0]
    order = sorted(range(r), key=lambda x: (len(cands[x]), x))
    pi: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == r:
            return True
        x = order[i]
        for y in cands[x]:
            if y in used:
                continue
            if ka[x][x] != kb[y][y]:
                continue
            if all(ka[x][x2] == kb[y][y2] for x2, y2 in pi.items()):
                pi[x] = y
                used.add(y)
                if extend(i + 1):
                    return True
                del pi[x]
                used.discard(y)
        return False

    if not extend(0):
        return None
    return [pi[x] for x in range(r)]
