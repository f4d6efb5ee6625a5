"""Linear representations of SL2(Z) attached to modular data.

A representation is stored as an exact matrix s and a diagonal t given by
exponents of zeta_L, where L is the conductor of s.  The defining relations
are s^4 = 1 and (st)^3 = s^2.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .cyclotomic import Cyc, gauss_sum_sqrt, root_exponent
from .cycmatrix import CycMatrix
from .galois import characteristic_two_group, galois_permutation, ambient_modulus
from .linalg import rank as exact_rank
from .modular_data import ModularData, gauss_sum
from .nt import factorize, is_prime, lcm, legendre, lift_unit, phi2, units


class LiftFailure(Exception):
    """The projective representation could not be lifted."""


class NotFound(Exception):
    """A root-of-unity search exhausted its widening budget."""


class NotSignedPermutation(Exception):
    """A Galois word did not evaluate to a signed permutation matrix."""


class MultiplicityError(Exception):
    """The t-spectrum has repeated eigenvalues."""


class ShapeError(ValueError):
    """The level cannot carry a minimal irreducible representation."""


class SL2ZRep:
    """Exact pair (s, t) with t = diag(zeta_L^e)."""

    def __init__(self, s: CycMatrix, t_exponents: Sequence[int], modulus: int,
                 category: ModularData | None = None):
        L = lcm(s.m, modulus)
        self.s = s.promote(L)
        self.modulus = L
        scale = L // modulus
        self.t_exponents = tuple(int(e) * scale % L for e in t_exponents)
        self.category = category
        if self.s.shape != (len(self.t_exponents),) * 2:
            raise ValueError("s and t have different sizes")

    @property
    def dim(self) -> int:
        return len(self.t_exponents)

    @property
    def conductor(self) -> int:
        return self.modulus

    @property
    def level(self) -> int:
        L = self.modulus
        return lcm(*(L // gcd(L, e) for e in self.t_exponents))

    @property
    def t_matrix(self) -> CycMatrix:
        return CycMatrix.diag_roots(self.t_exponents, self.modulus)

    def t_power_exponents(self, k: int) -> np.ndarray:
        return np.array(self.t_exponents, dtype=np.int64) * k % self.modulus

    def spectrum(self) -> list[Fraction]:
        """Eigenvalues of t as fractions r with eigenvalue exp(2 pi i r)."""
        return [Fraction(e, self.modulus) for e in self.t_exponents]

    def s_inverse(self) -> CycMatrix:
        cache = self.__dict__
        if "_s_inv" not in cache:
            sq = self.s @ self.s
            cache["_s_sq"] = sq
            cache["_s_inv"] = sq @ self.s
        return cache["_s_inv"]

    def relations_hold(self) -> bool:
        s = self.s
        sq = s @ s
        if not (sq @ sq).is_identity():
            return False
        st = s.scale_cols(self.t_exponents)
        return (st @ st) @ st == sq

    def galois(self, a: int) -> "SL2ZRep":
        """Entrywise image under zeta_n -> zeta_n^a (n the level), lifted to the conductor."""
        b = lift_unit(a, self.level, self.modulus) % self.modulus
        return SL2ZRep(self.s.galois(b), [e * b for e in self.t_exponents], self.modulus,
                       self.category)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "level": self.level,
            "conductor": self.modulus,
            "t_exponents": list(self.t_exponents),
            "s": [[x.to_json()["coefficients"] for x in row] for row in self.s.to_lists()],
        }

    def __repr__(self) -> str:
        return f"SL2ZRep(dim={self.dim}, level={self.level}, conductor={self.modulus})"


def _search_root(target: Cyc, base: int, ok, max_factor: int = 48) -> tuple[int, int]:
    """Find (K, j) with ok(zeta_K^j) for K = base * f, f built from 2s and 3s."""
    angle = cmath.phase(complex(target.embed()))
    factors = sorted({2**i * 3**j for i in range(6) for j in range(3) if 2**i * 3**j <= max_factor})
    for f in factors:
        K = base * f
        j0 = round(angle * K / (2 * math.pi))
        for j in (j0, j0 - 1, j0 + 1):
            if ok(Cyc.root(K, j)):
                return K, j % K
    raise NotFound(f"no root of unity found up to conductor {base * max_factor}")


def sqrt_global_dim(C: ModularData) -> Cyc:
    """The positive square root of dim(C), as tau_1 divided by a root of unity."""
    cache = C.__dict__
    if "_sqrt_dim" in cache:
        return cache["_sqrt_dim"]
    D = C.global_dim
    if D == 1:
        return Cyc.rational(1)
    tau = gauss_sum(C, 1)

    def ok(xi: Cyc) -> bool:
        cand = tau / xi
        return cand == cand.conj() and cand * cand == D and cand.is_positive()

    K, j = _search_root(tau, lcm(C.conductor, 2), ok)
    out = tau * Cyc.root(K, -j)
    cache["_sqrt_dim"] = out
    return out


def _base_lift_data(C: ModularData) -> tuple[Cyc, int, list[int]]:
    """sqrt(dim), the lift conductor L and the base t-exponents mod L."""
    cache = C.__dict__
    if "_lift_data" not in cache:
        sq = sqrt_global_dim(C)
        xi = gauss_sum(C, 1) / sq
        r = root_exponent(xi)
        if r is None:
            raise LiftFailure("tau_1 / sqrt(dim) is not a root of unity")
        gamma = r / 3
        L = lcm(C.conductor, sq.m, gamma.denominator, 12)
        g = gamma.numerator * (L // gamma.denominator)
        t = [(e * (L // C.conductor) - g) % L for e in C.theta_exponents]
        cache["_lift_data"] = (sq, L, t)
    return cache["_lift_data"]


def lift_levels(C: ModularData) -> list[int]:
    """Levels of the 12 lifts, in the order of :func:`lift_projective`."""
    _, L, t = _base_lift_data(C)
    out = []
    for k in range(12):
        exps = [e + k * (L // 12) for e in t]
        out.append(lcm(*(L // gcd(L, e % L) for e in exps)))
    return out


def lift_projective(C: ModularData) -> list[SL2ZRep]:
    """The 12 linear lifts, base lift first, then its twists by chi_x for x = zeta_12^k."""
    cache = C.__dict__
    if "_lifts" in cache:
        return cache["_lifts"]
    sq, L, t = _base_lift_data(C)
    s = C.S.scale(sq.inverse()).promote(L)
    base = SL2ZRep(s, t, L, C)
    if not base.relations_hold():
        raise LiftFailure("s^4 = 1 or (st)^3 = s^2 fails for the base lift")
    lifts = [base] + [twist(base, k) for k in range(1, 12)]
    cache["_lifts"] = lifts
    return lifts


def twist(rho: SL2ZRep, k: int) -> SL2ZRep:
    """rho tensor chi_x with x = zeta_12^k: s -> x^-3 s, t -> x t."""
    L = lcm(rho.modulus, 12)
    s = rho.s.promote(L).scale(Cyc.root(4, -k))
    t = [e * (L // rho.modulus) + k * (L // 12) for e in rho.t_exponents]
    return SL2ZRep(s, t, L, rho.category)


def chi_rep(x: int | Cyc) -> SL2ZRep:
    """One-dimensional representation with t = x, s = x^-3, x a 12th root of unity.

    ``x`` is either the exponent k of x = zeta_12^k or the root itself.
    """
    if isinstance(x, Cyc):
        r = root_exponent(x)
        if r is None or (r * 12).denominator != 1:
            raise ValueError("chi_rep needs a 12th root of unity")
        k = int(r * 12)
    else:
        k = int(x)
    s = CycMatrix.from_entries([[Cyc.root(4, -k)]], 12)
    return SL2ZRep(s, [k], 12)


def _eta_parameter(p: int, j: int) -> int:
    return next(a for a in range(1, p) if legendre(a, p) == j)


def eta_rep(p: int, j: int) -> SL2ZRep:
    """The level-p irreducible representation of dimension (p-1)/2 with t-type j."""
    if not (p > 3 and is_prime(p)):
        raise ValueError("p must be a prime greater than 3")
    if j not in (1, -1):
        raise ValueError("j must be +1 or -1")
    a = _eta_parameter(p, j)
    h = (p - 1) // 2
    inv_g = gauss_sum_sqrt(p).inverse()
    rows = [[(Cyc.root(p, 2 * a * x * y) - Cyc.root(p, -2 * a * x * y)) * inv_g * (-j)
             for y in range(1, h + 1)] for x in range(1, h + 1)]
    rho = SL2ZRep(CycMatrix.from_entries(rows, p), [a * x * x for x in range(1, h + 1)], p)
    if not rho.relations_hold():
        raise ArithmeticError("eta representation fails the defining relations")
    return rho


def tensor_rep(a: SL2ZRep, b: SL2ZRep) -> SL2ZRep:
    L = lcm(a.modulus, b.modulus)
    s = a.s.promote(L).kron(b.s.promote(L))
    fa, fb = L // a.modulus, L // b.modulus
    t = [x * fa + y * fb for x in a.t_exponents for y in b.t_exponents]
    return SL2ZRep(s, t, L)


def direct_sum(a: SL2ZRep, b: SL2ZRep) -> SL2ZRep:
    L = lcm(a.modulus, b.modulus)
    A, B = a.s.promote(L), b.s.promote(L)
    na, nb = a.dim, b.dim
    phi = A.num.shape[2]
    num = np.zeros((na + nb, na + nb, phi), dtype=object)
    den = lcm(A.den, B.den)
    num[:na, :na] = A.num.astype(object) * (den // A.den)
    num[na:, na:] = B.num.astype(object) * (den // B.den)
    t = [x * (L // a.modulus) for x in a.t_exponents] + [y * (L // b.modulus) for y in b.t_exponents]
    return SL2ZRep(CycMatrix(L, num, den), t, L)


# level and minimality ---------------------------------------------------------

def rep_level(rho: SL2ZRep) -> int:
    return rho.level


@dataclass(frozen=True)
class MinimalTypeDescriptor:
    level: int
    type: int
    d: int
    l0: int
    factors: tuple[tuple[int, int, int], ...]  # (p, l_p, legendre(l_p, p))

    def to_json(self) -> dict:
        return {"level": self.level, "type": self.type, "d": self.d, "l0": self.l0,
                "factors": [list(f) for f in self.factors]}


def minimal_decomposition(n: int, l: int) -> MinimalTypeDescriptor:
    """(d, l0, {(p, l_p)}) with zeta_n^l = zeta_d^l0 * prod zeta_p^l_p, d | 12."""
    if gcd(l, n) != 1:
        raise ValueError(f"{l} is not a unit modulo {n}")
    d = 1
    primes = []
    for p, e in factorize(n):
        if p == 2:
            if e > 2:
                raise ShapeError("8 divides the level")
            d *= 2**e
        elif p == 3:
            if e > 1:
                raise ShapeError("9 divides the level")
            d *= 3
        elif e > 1:
            raise ShapeError(f"{p}^{e} divides the level")
        else:
            primes.append(p)
    l0 = l * pow((n // d) % d, -1, d) % d if d > 1 else 0
    factors = []
    for p in primes:
        lp = l * pow((n // p) % p, -1, p) % p
        factors.append((p, lp, legendre(lp, p)))
    return MinimalTypeDescriptor(n, l % n, d, l0, tuple(factors))


def is_minimal(rho: SL2ZRep) -> MinimalTypeDescriptor | None:
    """Descriptor when dim = phi2(n) and the t-spectrum is one orbit {a^2 l}; else None."""
    n = rho.level
    if rho.dim != phi2(n):
        return None
    L = rho.modulus
    exps = sorted(e * n // L for e in rho.t_exponents)
    if len(set(exps)) != len(exps):
        return None
    l = exps[0]
    if gcd(l, n) != 1 or sorted({a * a * l % n for a in units(n)}) != exps:
        return None
    try:
        return minimal_decomposition(n, l)
    except ShapeError:
        return MinimalTypeDescriptor(n, l, 0, 0, ())


def rep_from_descriptor(desc: MinimalTypeDescriptor) -> SL2ZRep:
    """chi tensor eta_{p_1} tensor ... realizing the descriptor's type."""
    rho = chi_rep(desc.l0 * 12 // desc.d if desc.d else 0)
    for p, _, j in desc.factors:
        rho = tensor_rep(rho, eta_rep(p, j))
    return rho


# irreducibility ---------------------------------------------------------------

def _components(n: int, edges) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        parent[find(i)] = find(j)
    return len({find(i) for i in range(n)})


def commutant_dimension(rho: SL2ZRep) -> int:
    """dim {M : Ms = sM, Mt = tM}, blocked by t-eigenspaces."""
    n = rho.dim
    blocks: dict[int, list[int]] = {}
    for i, e in enumerate(rho.t_exponents):
        blocks.setdefault(e, []).append(i)
    nonzero = ~rho.s.zero_mask()
    if all(len(b) == 1 for b in blocks.values()):
        # M is diagonal; m_i = m_k whenever s_ik != 0
        return _components(n, zip(*np.nonzero(nonzero)))
    unknowns = [(i, j) for b in blocks.values() for i in b for j in b]
    col = {u: c for c, u in enumerate(unknowns)}
    s = rho.s.to_lists()
    zero = Cyc.zero(rho.modulus)
    rows = []
    for i in range(n):
        for k in range(n):
            row = [zero] * len(unknowns)
            for j in range(n):
                if (i, j) in col and nonzero[j, k]:
                    row[col[(i, j)]] = row[col[(i, j)]] + s[j][k]
                if (j, k) in col and nonzero[i, j]:
                    row[col[(j, k)]] = row[col[(j, k)]] - s[i][j]
            if any(not x.is_zero() for x in row):
                rows.append(row)
    if not rows:
        return len(unknowns)
    return len(unknowns) - exact_rank(rows)


def is_irreducible(rho: SL2ZRep) -> bool:
    return commutant_dimension(rho) == 1


# Galois symmetry --------------------------------------------------------------

@dataclass(frozen=True)
class SignedPermutationMatrix:
    permutation: tuple[int, ...]  # row X has its nonzero entry in column permutation[X]
    signs: tuple[int, ...]

    def matrix(self) -> np.ndarray:
        n = len(self.permutation)
        out = np.zeros((n, n), dtype=np.int64)
        for x, (c, e) in enumerate(zip(self.permutation, self.signs)):
            out[x, c] = e
        return out

    @classmethod
    def from_matrix(cls, mat: np.ndarray) -> "SignedPermutationMatrix":
        n = mat.shape[0]
        perm, signs = [], []
        for x in range(n):
            nz = np.nonzero(mat[x])[0]
            if len(nz) != 1 or abs(int(mat[x, nz[0]])) != 1:
                raise NotSignedPermutation(f"row {x} is not a signed unit vector")
            perm.append(int(nz[0]))
            signs.append(int(mat[x, nz[0]]))
        if sorted(perm) != list(range(n)):
            raise NotSignedPermutation("columns repeat")
        return cls(tuple(perm), tuple(signs))


def _sigma(rho: SL2ZRep, a: int) -> int:
    return lift_unit(a, rho.level, rho.modulus) % rho.modulus


def g_sigma(rho: SL2ZRep, a: int, verify: bool = True) -> SignedPermutationMatrix:
    """rho(t^a s t^b s t^a s^-1) with b = a^-1 mod n, checked against sigma(s) = g s."""
    n = rho.level
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit modulo the level {n}")
    b = pow(a, -1, n) if n > 1 else 0
    ea, eb = rho.t_power_exponents(a), rho.t_power_exponents(b)
    left = rho.s.mul_roots(ea.reshape(-1, 1) + eb.reshape(1, -1))
    right = rho.s.scale_cols(ea)
    word = (left @ right) @ rho.s_inverse()
    ints = word.integer_entries()
    if ints is None:
        raise NotSignedPermutation("Galois word has non-integer entries")
    g = SignedPermutationMatrix.from_matrix(np.asarray(ints, dtype=np.int64))
    if verify:
        c = _sigma(rho, a)
        gm = g.matrix()
        if rho.s.galois(c) != rho.s.rint_matmul(gm):
            raise NotSignedPermutation("sigma(s) differs from g s")
        t2 = rho.t_power_exponents(c * c)
        moved = np.array(rho.t_exponents)[list(g.permutation)]
        if not np.array_equal(t2, moved):
            raise NotSignedPermutation("sigma^2(t) differs from g t g^-1")
    return g


def g_sigma_category_check(rho: SL2ZRep, a: int) -> bool:
    """Permutation part of g_sigma equals the category's sigma-hat_a."""
    C = rho.category
    if C is None:
        raise ValueError("representation is not attached to modular data")
    g = g_sigma(rho, a)
    M = ambient_modulus(C)
    b = lift_unit(a, rho.level, lcm(rho.level, M)) % M
    return g.permutation == galois_permutation(C, b)


def epsilon_signs(rho: SL2ZRep, a: int) -> tuple[int, ...]:
    """epsilon(X) = sigma(s_{X,1}) / s_{sigma-hat(X),1}, cross-checked with g_sigma."""
    g = g_sigma(rho, a)
    image = rho.s.galois(_sigma(rho, a))
    out = []
    for x in range(rho.dim):
        num, den = image[x, 0], rho.s[g.permutation[x], 0]
        if den.is_zero():
            raise ArithmeticError("s has a zero in its first column")
        ratio = num / den
        if ratio == 1:
            out.append(1)
        elif ratio == -1:
            out.append(-1)
        else:
            raise ArithmeticError("sign ratio is not +1 or -1")
    if tuple(out) != g.signs:
        raise ArithmeticError("sign function disagrees with g_sigma")
    return tuple(out)


# isotypic decomposition -------------------------------------------------------

@dataclass(frozen=True)
class IsotypicComponent:
    character: tuple[int, ...]  # values on the generators of the section
    dimension: int
    invariant: bool


def h2_section(C: ModularData, n: int) -> tuple[list[int], list[int]]:
    """A subgroup of the 2-torsion of (Z/n)^x mapping isomorphically onto H_C.

    Returns (elements, generators); residues are scanned in increasing order
    and added whenever their image is new.
    """
    M = ambient_modulus(C)
    big = lcm(n, M)
    elems = [1 % n]
    images = {galois_permutation(C, 1)}
    gens: list[int] = []
    for r in range(1, n):
        if gcd(r, n) != 1 or r * r % n != 1 % n:
            continue
        img = galois_permutation(C, lift_unit(r, n, big) % M)
        if img in images:
            continue
        gens.append(r)
        elems = elems + [r * h % n for h in elems]
        images = {galois_permutation(C, lift_unit(h, n, big) % M) for h in elems}
    h2 = characteristic_two_group(C, method="level")
    if len(images) != len(h2):
        raise ArithmeticError("section does not cover H_C")
    return elems, gens


def isotypic_decomposition(rho: SL2ZRep, C: ModularData | None = None) -> list[IsotypicComponent]:
    C = C or rho.category
    if C is None:
        raise ValueError("need the modular data of the lift")
    n = rho.level
    elems, gens = h2_section(C, n)
    k = len(gens)
    gmats = {h: g_sigma(rho, h).matrix() for h in elems}
    # exponent vector of each element over the generators
    coords = {1 % n: (0,) * k}
    for i, gen in enumerate(gens):
        for h, v in list(coords.items()):
            coords[gen * h % n] = v[:i] + (1,) + v[i + 1:]
    out = []
    size = len(elems)
    for signs in np.ndindex(*(2,) * k):
        chi = tuple(-1 if x else 1 for x in signs)
        total = np.zeros((rho.dim, rho.dim), dtype=np.int64)
        for h in elems:
            val = 1
            for c, e in zip(chi, coords[h]):
                if e:
                    val *= c
            total = total + val * gmats[h]
        trace = int(np.trace(total))
        if trace % size:
            raise ArithmeticError("projector trace is not integral")
        dim = trace // size
        if dim == 0:
            continue
        P = CycMatrix.from_ints(total, rho.modulus)
        invariant = (P @ rho.s == rho.s @ P and P.scale_cols(rho.t_exponents) == P.scale_rows(rho.t_exponents))
        out.append(IsotypicComponent(chi, dim, invariant))
    return out


# equivalence ------------------------------------------------------------------

def reps_equivalent(a: SL2ZRep, b: SL2ZRep) -> np.ndarray | None:
    """Signed permutation W with W s_a W^T = s_b and W t_a W^T = t_b, or None."""
    spectrum_a, spectrum_b = a.spectrum(), b.spectrum()
    if len(set(spectrum_a)) != len(spectrum_a) or len(set(spectrum_b)) != len(spectrum_b):
        raise MultiplicityError("t-spectrum is not multiplicity free")
    if a.dim != b.dim or sorted(spectrum_a) != sorted(spectrum_b):
        return None
    where = {x: i for i, x in enumerate(spectrum_b)}
    pi = [where[x] for x in spectrum_a]
    sa = a.s
    sb = b.s.submatrix(pi, pi)
    sa, sb = CycMatrix.align(sa, sb)
    za, zb = sa.zero_mask(), sb.zero_mask()
    if not np.array_equal(za, zb):
        return None
    n = a.dim
    u = [0] * n
    A, B = sa.to_lists(), sb.to_lists()
    for start in range(n):
        if u[start]:
            continue
        u[start] = 1
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if za[i, j]:
                    continue
                if B[i][j] == A[i][j]:
                    sign = u[i]
                elif B[i][j] == -A[i][j]:
                    sign = -u[i]
                else:
                    return None
                if u[j] == 0:
                    u[j] = sign
                    queue.append(j)
                elif u[j] != sign:
                    return None
    D = np.diag(u)
    Dm = CycMatrix.from_ints(D, sa.m)
    if (Dm @ sa) @ Dm != sb:
        return None
    W = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        W[pi[i], i] = u[i]
    return W
