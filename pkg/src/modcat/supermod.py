"""Super-modular data: premodular data whose transparent objects are 1 and a fermion f.

Simple objects come in free pairs {X, f X}.  A basic subset picks one object
from each pair; the S-matrix restricted to it is the reduced S-matrix, and
the full S-matrix has block form [[S^, d_f S^], [d_f S^, S^]].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

from .cycmatrix import CycMatrix
from .cyclotomic import norm
from .galois import Perm, identity_perm, orbits_of, ratio_action_table
from .modular_data import (FusionRing, ModularData, ModularDataError, _is_invertible,
                           all_fusion_subcategories, build_sl2_adjoint, build_svec,
                           centralizer, deligne_product, is_modular_subcategory)
from .nt import lcm

SPLIT_RANK_LIMIT = 24


class NoFermion(ModularDataError):
    """No transparent fermion exists."""


class MultipleFermions(ModularDataError):
    """More than one nontrivial transparent object."""


class EpsilonMismatch(ModularDataError):
    """The two factors are super over different sVec categories."""


class NotSuperModular(ModularDataError):
    """An invariant of super-modular data fails."""


def _times(F: FusionRing, x: int, y: int) -> int | None:
    """The simple x * y when the product is simple."""
    prod = F.N[x, y]
    if prod.sum() != 1:
        return None
    return int(np.argmax(prod))


def detect_fermion(C: ModularData) -> tuple[int, int]:
    """(f, epsilon) for the unique nontrivial transparent object, which must be a fermion."""
    transparent = [x for x in range(1, C.rank) if C.transparency[x].all()]
    if not transparent:
        raise NoFermion("the Mueger center is trivial")
    if len(transparent) > 1:
        raise MultipleFermions(f"transparent objects {[C.labels[x] for x in transparent]}")
    f = transparent[0]
    d = C.dims[f]
    if d == 1:
        eps = 1
    elif d == -1:
        eps = -1
    else:
        raise NoFermion("the transparent object is not invertible")
    if _times(C.fusion, f, f) != 0:
        raise NoFermion("f * f is not the unit")
    theta = C.theta(f)
    if theta != -eps:
        raise NoFermion("the transparent object is a boson")
    return f, eps


def basic_subset(C: ModularData, fermion: int, alternate: bool = False) -> list[int]:
    """Unit first, then one representative per pair {X, fX}, kept closed under duality.

    By default the representative with the smaller index is preferred;
    ``alternate`` prefers the other one (except for the unit's pair).
    """
    F = C.fusion
    partner = [_times(F, fermion, x) for x in range(C.rank)]
    if any(p is None or p == x for x, p in enumerate(partner)):
        raise NotSuperModular("f * X must be simple and different from X")
    dual = C.dual_perm
    chosen: list[int] = []
    done: set[int] = set()
    for x in range(C.rank):
        if x in done:
            continue
        pair = sorted((x, partner[x]))
        rep = pair[1] if alternate and x != 0 else pair[0]
        # a pair whose members are dual to each other cannot be made dual-closed
        picks = [rep] if dual[rep] in pair else [rep, dual[rep]]
        for y in picks:
            chosen.append(y)
            done.update((y, partner[y]))
    return sorted(chosen, key=lambda y: (y != 0, y))


class SuperModularData:
    def __init__(self, underlying: ModularData, fermion: int | None = None,
                 basic: Sequence[int] | None = None):
        if fermion is None:
            fermion, eps = detect_fermion(underlying)
        else:
            d = underlying.dims[fermion]
            eps = 1 if d == 1 else -1
        self.underlying = underlying
        self.fermion = fermion
        self.epsilon = eps
        self.basic = list(basic) if basic is not None else basic_subset(underlying, fermion)
        self.reduced_S = underlying.S.submatrix(self.basic, self.basic)
        F = underlying.fusion
        self.partner = [_times(F, fermion, x) for x in range(underlying.rank)]

    @property
    def labels(self) -> tuple[str, ...]:
        return self.underlying.labels

    @property
    def pi_labels(self) -> list[str]:
        return [self.labels[x] for x in self.basic]

    @property
    def rank(self) -> int:
        return self.underlying.rank

    def invariant_failures(self) -> list[str]:
        C, f = self.underlying, self.fermion
        bad = []
        if _times(C.fusion, f, f) != 0:
            bad.append("f * f = 1")
        if not C.transparency[f].all():
            bad.append("f transparent")
        if any(p is None or p == x for x, p in enumerate(self.partner)):
            bad.append("f * X differs from X")
        covered = set(self.basic) | {self.partner[x] for x in self.basic}
        if len(covered) != C.rank or len(self.basic) * 2 != C.rank:
            bad.append("Irr = Pi and f Pi")
        if not self.block_form_holds():
            bad.append("block form")
        if not _is_invertible(self.reduced_S):
            bad.append("reduced S invertible")
        return bad

    def block_form_holds(self) -> bool:
        order = self.basic + [self.partner[x] for x in self.basic]
        S = self.underlying.S.submatrix(order, order)
        Sh = self.reduced_S
        e = Sh.scale(self.epsilon)
        n = len(self.basic)
        blocks = [[Sh, e], [e, Sh]]
        return all(S.submatrix(range(i * n, (i + 1) * n), range(j * n, (j + 1) * n)) == blocks[i][j]
                   for i in range(2) for j in range(2))

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "fermion": self.labels[self.fermion],
            "pi_labels": self.pi_labels,
            "reduced_S": [[x.to_json()["coefficients"] for x in row]
                          for row in self.reduced_S.to_lists()],
            "conductor": self.underlying.conductor,
        }


def build_sl2_super(k: int, l: int) -> SuperModularData:
    """Adjoint data at level 4k+2; the fermion is V_{4k+2}, Pi = {V_{2j} : j <= k}."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if gcd(l, 8 * (k + 1)) != 1:
        raise ValueError(f"l = {l} is not a unit modulo {8 * (k + 1)}")
    C = build_sl2_adjoint(4 * k + 2, l, allow_even=True)
    return SuperModularData(C, 2 * k + 1, list(range(k + 1)))


def svec_data(eps: int) -> SuperModularData:
    return SuperModularData(build_svec(eps), 1, [0])


def split_super(D: ModularData, eps: int) -> SuperModularData:
    """D x sVec_eps, with Pi = Irr(D) x {1}."""
    C = deligne_product(D, build_svec(eps))
    return SuperModularData(C, 1, [2 * x for x in range(D.rank)])


def svec_product(A: SuperModularData, B: SuperModularData) -> SuperModularData:
    """A x_sVec B on objects (X, Y), X in Irr(A), Y in Pi_B; fermion (f_A, 1)."""
    if A.epsilon != B.epsilon:
        raise EpsilonMismatch("both factors must be over the same sVec")
    CA, CB = A.underlying, B.underlying
    pi_b = B.basic
    nb = len(pi_b)
    pos_b = {y: j for j, y in enumerate(pi_b)}
    m = lcm(CA.conductor, CB.conductor)
    SB = B.reduced_S
    S = CA.S.promote(m).kron(SB.promote(m))
    fa, fb = m // CA.conductor, m // CB.conductor
    theta = [ea * fa + CB.theta_exponents[y] * fb for ea in CA.theta_exponents for y in pi_b]
    labels = [f"({a},{CB.labels[y]})" for a in CA.labels for y in pi_b]

    def index(x: int, y: int) -> int:
        if y in pos_b:
            return x * nb + pos_b[y]
        return A.partner[x] * nb + pos_b[B.partner[y]]

    dual = [index(CA.dual_perm[x], CB.dual_perm[y]) for x in range(CA.rank) for y in pi_b]
    NA, NB = CA.fusion.N, CB.fusion.N
    NBp = NB[np.ix_(pi_b, pi_b, pi_b)]
    NBf = NB[np.ix_(pi_b, pi_b, [B.partner[y] for y in pi_b])]
    NAf = NA[:, :, A.partner]
    N = np.einsum("ace,bdf->abcdef", NA, NBp) + np.einsum("ace,bdf->abcdef", NAf, NBf)
    r = CA.rank * nb
    fusion = FusionRing(N.reshape(r, r, r), dual)
    C = ModularData(labels, m, S, theta, dual, fusion)
    basic = [index(x, y) for x in A.basic for y in pi_b]
    return SuperModularData(C, index(A.fermion, pi_b[0]), basic)


# Galois action on Pi ------------------------------------------------------------------

@dataclass
class SuperGaloisProfile:
    ambient_modulus: int
    action_table: dict[int, Perm]
    group_order: int
    orbits: list[list[int]]  # positions in Pi
    transitive: bool
    regular: bool


def _reduced_ratio(C: SuperModularData) -> CycMatrix:
    Sh = C.reduced_S
    n = Sh.shape[0]
    first = [Sh[0, j] for j in range(n)]
    if any(x.is_zero() for x in first):
        raise NotSuperModular("reduced S has a zero in its first row")
    inv = CycMatrix.from_entries([[x.inverse() for x in first]], Sh.m)
    return Sh.hadamard(inv)


def super_galois_orbits(C: SuperModularData, check_independence: bool = True) -> SuperGaloisProfile:
    cache = C.__dict__
    if "_profile" in cache:
        return cache["_profile"]
    M = lcm(C.underlying.conductor, C.underlying.ord_T)
    table = ratio_action_table(_reduced_ratio(C), M)
    perms = set(table.values())
    n = len(C.basic)
    orbits = orbits_of(perms, n)
    ident = identity_perm(n)
    regular = len(orbits) == 1 and all(p == ident or all(p[x] != x for x in range(n)) for p in perms)
    profile = SuperGaloisProfile(M, table, len(perms), orbits, len(orbits) == 1, regular)
    if check_independence:
        alt = SuperModularData(C.underlying, C.fermion, basic_subset(C.underlying, C.fermion, True))
        other = super_galois_orbits(alt, check_independence=False)
        if _pair_partition(C, orbits) != _pair_partition(alt, other.orbits):
            raise ArithmeticError("orbits depend on the choice of basic subset")
    cache["_profile"] = profile
    return profile


def _pair_partition(C: SuperModularData, orbits: list[list[int]]) -> set[frozenset[int]]:
    key = [min(x, C.partner[x]) for x in range(C.rank)]
    return {frozenset(key[C.basic[i]] for i in orb) for orb in orbits}


def is_super_transitive(C: SuperModularData) -> bool:
    return super_galois_orbits(C).transitive


# subcategories --------------------------------------------------------------------------

def _is_super_sub(C: ModularData, D: frozenset[int], f: int) -> bool:
    """D contains f and its transparent objects within D are exactly 1 and f."""
    if f not in D:
        return False
    idx = sorted(D)
    block = C.transparency[np.ix_(idx, idx)]
    center = {idx[i] for i in range(len(idx)) if block[i].all()}
    return center == {0, f}


def is_s_simple(C: SuperModularData) -> bool:
    U, f = C.underlying, C.fermion
    if all(d == 1 or d == -1 for d in U.dims):
        return False
    full = frozenset(range(U.rank))
    for D in all_fusion_subcategories(U):
        if f in D and D not in (frozenset({0, f}), full) and _is_super_sub(U, D, f):
            return False
    return True


def split_check(C: SuperModularData) -> frozenset[int] | None | str:
    """A modular subcategory D with Irr = D and f D, None if there is none.

    Returns "undetermined" above the search limit.
    """
    U, f = C.underlying, C.fermion
    if U.rank > SPLIT_RANK_LIMIT:
        return "undetermined"
    half = U.rank // 2
    for D in all_fusion_subcategories(U):
        if len(D) != half or f in D:
            continue
        if {C.partner[x] for x in D} | D != set(range(U.rank)):
            continue
        if is_modular_subcategory(U, D):
            return D
    return None


def super_factorization(C: SuperModularData) -> list[frozenset[int]]:
    """Supports of s-simple factors: minimal super-modular subcategories split off by centralizers."""
    U, f = C.underlying, C.fermion
    base = frozenset({0, f})
    subs = [D for D in all_fusion_subcategories(U) if D != base and _is_super_sub(U, D, f)]
    remaining = frozenset(range(U.rank))
    factors = []
    while remaining != base:
        cands = [D for D in subs if D <= remaining]
        if not cands:
            raise ModularDataError("no super-modular subcategory left to split off")
        pick = min(cands, key=lambda D: (len(D), sorted(D)))
        factors.append(pick)
        remaining = centralizer(U, pick) & remaining
    size = 1
    for D in factors:
        size *= len(D) // 2
    if size != U.rank // 2:
        raise ModularDataError("super factors do not multiply to the rank")
    return factors


# theorem checks --------------------------------------------------------------------------

def super_structure_checks(C: SuperModularData) -> dict[str, bool]:
    prof = super_galois_orbits(C)
    U = C.underlying
    Sh = C.reduced_S
    entries = [Sh[i, j] for i in range(Sh.shape[0]) for j in range(Sh.shape[1])]
    out = {"transitive": prof.transitive}
    out["reduced S totally real"] = all(x == x.conj() for x in entries)
    out["reduced S entries are units"] = all(abs(norm(x)) == 1 for x in entries if not x.is_zero())
    dims = [U.dims[x] for x in C.basic]
    out["distinct squared dimensions on Pi"] = len({(d * d).key() for d in dims}) == len(dims)
    D = U.global_dim
    ident = identity_perm(len(C.basic))
    out["dim(C) has trivial stabilizer"] = all(
        p == ident for a, p in prof.action_table.items() if D.galois(a % U.conductor) == D)
    out["group order = |Pi|"] = prof.group_order == len(C.basic)
    unit_orbit = {p[0] for p in prof.action_table.values()}
    out["dimensions in the unit orbit are units"] = all(abs(norm(dims[i])) == 1 for i in unit_orbit)
    ok = True
    for Dsub in all_fusion_subcategories(U):
        if len(Dsub) == 1:
            continue
        if not (is_modular_subcategory(U, Dsub) or _is_super_sub(U, Dsub, C.fermion)):
            ok = False
            break
    out["fusion subcategories modular or super-modular"] = ok
    return out


def verify_super_theorems(kmax: int, ls: Sequence[int] = (1,), bound: int = 8) -> dict:
    """Transitivity iff k + 1 is a power of 2, and structure checks for transitive cases."""
    if kmax > bound:
        raise ValueError(f"kmax = {kmax} exceeds the bound {bound}")
    rows = []
    ok = True
    for k in range(1, kmax + 1):
        expected = (k + 1) & k == 0
        for l in ls:
            C = build_sl2_super(k, l)
            trans = is_super_transitive(C)
            row = {"k": k, "l": l, "transitive": trans, "expected": expected}
            if trans:
                checks = super_structure_checks(C)
                row["checks"] = checks
                ok = ok and all(checks.values())
            ok = ok and trans == expected
            rows.append(row)
    products = []
    for (k1, l1), (k2, l2) in itertools.combinations([(1, 1), (1, 3), (3, 1)], 2):
        P = svec_product(build_sl2_super(k1, l1), build_sl2_super(k2, l2))
        sizes = sorted(len(D) for D in super_factorization(P))
        good = sizes == sorted([2 * (k1 + 1), 2 * (k2 + 1)])
        products.append({"factors": [[k1, l1], [k2, l2]], "recovered_sizes": sizes, "ok": good})
        ok = ok and good
    return {"ok": ok, "levels": rows, "products": products}
