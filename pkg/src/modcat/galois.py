"""Galois action on simple objects.

Each unit residue a modulo the ambient modulus sends the ratio matrix
R[X, Y] = S[X, Y] / d_Y to itself up to a column permutation; that
permutation is sigma-hat_a.  The group is stored as the permutation image of
(Z/M)^x, which is faithful on Q(S).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
import numpy as np

from .cycmatrix import CycMatrix
from .cyclotomic import norm
from .modular_data import ModularData, ModularDataError
from .nt import lcm, lift_unit, units

Perm = tuple[int, ...]


class NoMatch(ModularDataError):
    """A Galois image column matches no column, or more than one."""


def compose(p: Perm, q: Perm) -> Perm:
    """(p o q)[y] = p[q[y]]."""
    return tuple(p[y] for y in q)


def identity_perm(r: int) -> Perm:
    return tuple(range(r))


def ambient_modulus(C: ModularData) -> int:
    return lcm(C.conductor, C.ord_T)


def ratio_matrix(C: ModularData) -> CycMatrix:
    cache = C.__dict__
    if "_ratio" not in cache:
        if any(d.is_zero() for d in C.dims):
            raise NoMatch("a quantum dimension vanishes")
        inv = CycMatrix.from_entries([[d.inverse() for d in C.dims]], C.conductor)
        cache["_ratio"] = C.S.hadamard(inv)
    return cache["_ratio"]


def _column_keys(mat: CycMatrix) -> list[bytes]:
    num = mat.num if mat.num.dtype != object else mat.num.astype(str)
    return [np.ascontiguousarray(num[:, j]).tobytes() + str(mat.den).encode() for j in range(mat.shape[1])]


def _match(mat: CycMatrix, base_keys: list[bytes]) -> Perm:
    index: dict[bytes, int] = {}
    for j, k in enumerate(base_keys):
        if k in index:
            raise NoMatch("two columns of the ratio matrix coincide")
        index[k] = j
    out = []
    for k in _column_keys(mat):
        if k not in index:
            raise NoMatch("Galois image of a column matches no column")
        out.append(index[k])
    if len(set(out)) != len(out):
        raise NoMatch("Galois action is not a permutation")
    return tuple(out)


def galois_permutation(C: ModularData, a: int) -> Perm:
    """sigma-hat_a as a tuple p with p[Y] = sigma-hat_a(Y).

    ``a`` only needs to be a unit modulo the conductor of Q(S); it is then
    lifted to the ambient modulus.
    """
    M = ambient_modulus(C)
    if gcd(a, M) != 1:
        d = galois_conductor(C)
        if gcd(a, d) != 1:
            raise ValueError(f"{a} is not a unit modulo {d}")
        return action_table(C)[lift_unit(a, d, M) % M]
    R = ratio_matrix(C)
    keys = C.__dict__.setdefault("_ratio_keys", _column_keys(R))
    return _match(R.galois(a % C.conductor), keys)


def _generators(M: int) -> list[int]:
    """A generating set of (Z/M)^x, chosen greedily in increasing order."""
    gens: list[int] = []
    span = {1 % M}
    for a in units(M):
        if a in span:
            continue
        gens.append(a)
        frontier = list(span)
        while frontier:
            nxt = []
            for x in frontier:
                y = x * a % M
                if y not in span:
                    span.add(y)
                    nxt.append(y)
            frontier = nxt
        if len(span) == len(units(M)):
            break
    return gens


def ratio_action_table(R: CycMatrix, M: int) -> dict[int, Perm]:
    """Column permutations induced by every unit mod M (M a multiple of R.m)."""
    keys = _column_keys(R)
    r = R.shape[1]
    table: dict[int, Perm] = {1 % M: identity_perm(r)}
    for g in _generators(M):
        pg = _match(R.galois(g % R.m), keys)
        frontier = list(table.items())
        while frontier:
            nxt = []
            for a, p in frontier:
                b = a * g % M
                if b not in table:
                    table[b] = compose(pg, p)
                    nxt.append((b, table[b]))
            frontier = nxt
    return dict(sorted(table.items()))


def action_table(C: ModularData) -> dict[int, Perm]:
    """sigma-hat_a for every unit a, assembled from generators via the homomorphism."""
    cache = C.__dict__
    if "_action_table" not in cache:
        cache["_action_table"] = ratio_action_table(ratio_matrix(C), ambient_modulus(C))
    return cache["_action_table"]


def galois_conductor(C: ModularData) -> int:
    """Smallest d dividing the ambient modulus with Q(S) inside Q(zeta_d)."""
    M = ambient_modulus(C)
    table = action_table(C)
    ident = identity_perm(C.rank)
    for d in (d for d in range(1, M + 1) if M % d == 0):
        if all(p == ident for a, p in table.items() if a % d == 1 % d):
            return d
    return M


def orbits_of(perms, r: int) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for x in range(r):
        if x in seen:
            continue
        orb = sorted({p[x] for p in perms})
        seen.update(orb)
        out.append(orb)
    return out


@dataclass(frozen=True)
class GaloisProfile:
    labels: tuple[str, ...]
    ambient_modulus: int
    action_table: dict[int, Perm]
    group_order: int
    orbits: list[list[int]]
    transitive: bool
    regular: bool
    h2_group: frozenset[Perm] = field(default_factory=frozenset)

    def to_json(self) -> dict:
        return {
            "group_order": self.group_order,
            "orbits": [[self.labels[i] for i in orb] for orb in self.orbits],
            "transitive": self.transitive,
            "regular": self.regular,
            "h2_order": len(self.h2_group),
        }


def galois_group(C: ModularData, with_h2: bool = True) -> GaloisProfile:
    table = action_table(C)
    perms = set(table.values())
    r = C.rank
    orbits = orbits_of(perms, r)
    transitive = len(orbits) == 1
    ident = identity_perm(r)
    regular = transitive and all(
        p == ident or all(p[x] != x for x in range(r)) for p in perms)
    h2 = characteristic_two_group(C) if with_h2 else frozenset()
    return GaloisProfile(C.labels, ambient_modulus(C), table, len(perms), orbits,
                         transitive, regular, h2)


def is_transitive(C: ModularData) -> bool:
    return len(orbits_of(set(action_table(C).values()), C.rank)) == 1


def check_regularity(C: ModularData) -> bool:
    return galois_group(C, with_h2=False).regular


def _omega2(n: int) -> list[int]:
    return [a for a in units(n) if a * a % n == 1 % n]


def h2_from_order(C: ModularData) -> frozenset[Perm]:
    """Image of the elementary 2-subgroup of (Z/N)^x, N = ord(T), 4 not dividing N."""
    N, M = C.ord_T, ambient_modulus(C)
    table = action_table(C)
    return frozenset(table[lift_unit(a, N, M) % M] for a in _omega2(N))


def h2_from_level(C: ModularData, n: int) -> frozenset[Perm]:
    """Image of the elementary 2-subgroup of (Z/n)^x for a lift of level n.

    Q(S) lies in Q(zeta_n) and Q(zeta_M), so any compatible lift acts correctly.
    """
    M = ambient_modulus(C)
    big = lcm(n, M)
    table = action_table(C)
    return frozenset(table[lift_unit(a, n, big) % M] for a in _omega2(n))


def characteristic_two_group(C: ModularData, method: str = "auto") -> frozenset[Perm]:
    """H_C as a set of permutations.

    ``method`` is "order" (needs 4 not dividing ord(T)), "level" (uses the
    lowest-level lift) or "auto" (order when possible, cross-checked by level).
    """
    N = C.ord_T
    if method == "order":
        if N % 4 == 0:
            raise ValueError("the ord(T) route needs 4 not dividing ord(T)")
        return h2_from_order(C)
    from .sl2z import lift_levels

    n = min(lift_levels(C))
    by_level = h2_from_level(C, n)
    if method == "level" or N % 4 == 0:
        return by_level
    by_order = h2_from_order(C)
    if by_order != by_level:
        raise ArithmeticError("characteristic 2-group differs between the two routes")
    return by_order


def transitive_structure_checks(C: ModularData) -> dict[str, bool]:
    """Exact structural consequences of transitivity (meaningful only if transitive)."""
    r = C.rank
    table = action_table(C)
    checks: dict[str, bool] = {"transitive": is_transitive(C)}
    # one residue per simple: sigma-hat_a(1) = X
    rep_of: dict[int, int] = {}
    for a, p in table.items():
        rep_of.setdefault(p[0], a)
    d = C.dims
    ok = len(rep_of) == r
    if ok:
        for x in range(r):
            for y in range(r):
                lhs = C.S[x, y]
                rhs = d[y].galois(rep_of[x] % C.conductor) * d[x]
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
    checks["S from dimensions"] = ok
    checks["self-dual"] = C.dual_perm == identity_perm(r)
    squares = [x * x for x in d]
    checks["distinct squared dimensions"] = len({s.key() for s in squares}) == r
    F = C.fusion
    invertible = [x for x in range(r) if F.N[x, C.dual_perm[x]].sum() == 1]
    checks["no nontrivial invertibles"] = invertible == [0]
    D = C.global_dim
    ident = identity_perm(r)
    checks["dim(C) has trivial stabilizer"] = all(
        p == ident for a, p in table.items() if D.galois(a % C.conductor) == D)
    checks["dimensions are units"] = all(abs(norm(x)) == 1 for x in d)
    return checks


def orbit_count(C: ModularData) -> int:
    return len(orbits_of(set(action_table(C).values()), C.rank))


def group_order(C: ModularData) -> int:
    return len(set(action_table(C).values()))
