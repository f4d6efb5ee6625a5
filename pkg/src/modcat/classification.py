"""Checks of the structure theorems for transitive modular data, and the catalog.

Every transitive modular category is a Deligne product of adjoint sl2 data
A_{p-2,l} over distinct primes p > 3; the catalog enumerates those products
by N = ord(T).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclotomic import root_exponent
from .galois import characteristic_two_group, group_order, is_transitive, orbit_count
from .modular_data import (ModularData, all_fusion_subcategories, anomaly, build_sl2_adjoint,
                           data_equivalent, deligne_power, is_modular_subcategory, is_prime,
                           prime_factorization, restrict, trivial_data)
from .nt import factorize, is_squarefree, units
from .sl2z import is_irreducible, is_minimal, lift_projective

DEFAULT_MAX_N = 40
RESOURCE_BOUND = 400


class ResourceBoundError(ValueError):
    """The requested enumeration exceeds the configured bound."""


def prime_family(p: int, l: int) -> ModularData:
    """A_{p-2,l}: the adjoint data whose twists have order p."""
    return build_sl2_adjoint(p - 2, l)


def verify_transitivity_theorems(C: ModularData, lifts: bool = True) -> dict[str, bool]:
    N = C.ord_T
    primes = [p for p, _ in factorize(N)]
    out = {"transitive": is_transitive(C)}
    out["ord(T) odd"] = N % 2 == 1
    out["ord(T) square-free"] = is_squarefree(N)
    out["prime factors of ord(T) exceed 3"] = all(p > 3 for p in primes)
    out["H_C trivial"] = len(characteristic_two_group(C)) == 1
    if lifts:
        reps = lift_projective(C)
        out["lifts satisfy relations"] = reps[0].relations_hold()
        out["lifts minimal"] = all(is_minimal(r) is not None for r in reps)
        out["lifts irreducible"] = all(is_irreducible(r) for r in reps)
    subs_ok = True
    for D in all_fusion_subcategories(C):
        if len(D) in (1, C.rank):
            continue
        if not (is_modular_subcategory(C, D) and is_transitive(restrict(C, D))):
            subs_ok = False
            break
    out["fusion subcategories modular and transitive"] = subs_ok
    return out


@dataclass
class ProductReport:
    group_orders: tuple[int, int, int]
    degree: Fraction
    orbits: int
    orbits_a: int
    orbits_b: int

    @property
    def ok(self) -> bool:
        return self.degree.denominator == 1 and self.orbits == self.degree

    @property
    def bound_ok(self) -> bool:
        return self.orbits_a * self.orbits_b <= self.orbits


def product_transitivity(A: ModularData, B: ModularData) -> ProductReport:
    """[F:Q] = |G_A||G_B| / |G_AB| against the observed orbit count of A x B."""
    AB = deligne_power(A, B)
    ga, gb, gab = group_order(A), group_order(B), group_order(AB)
    return ProductReport((ga, gb, gab), Fraction(ga * gb, gab), orbit_count(AB),
                         orbit_count(A), orbit_count(B))


@dataclass
class PrimeCatalogReport:
    p: int
    labels: list[int]
    prime: dict[int, bool]
    transitive: dict[int, bool]
    anomalies: dict[int, Fraction]
    pairwise_inequivalent: bool
    anomalies_distinct: bool
    anomaly_orders: dict[int, int]

    @property
    def ok(self) -> bool:
        return (all(self.prime.values()) and all(self.transitive.values())
                and self.pairwise_inequivalent and self.anomalies_distinct
                and all(o in (self.p, 2 * self.p) for o in self.anomaly_orders.values()))


def check_prime_transitive_catalog(p: int) -> PrimeCatalogReport:
    ls = units(2 * p)
    cats = {l: prime_family(p, l) for l in ls}
    prime = {l: is_prime(C) for l, C in cats.items()}
    trans = {l: is_transitive(C) for l, C in cats.items()}
    alphas = {l: root_exponent(anomaly(C, 1)) for l, C in cats.items()}
    inequivalent = all(data_equivalent(cats[a], cats[b]) is None
                       for a, b in itertools.combinations(ls, 2))
    distinct = len(set(alphas.values())) == len(ls)
    orders = {l: a.denominator for l, a in alphas.items()}
    return PrimeCatalogReport(p, ls, prime, trans, alphas, inequivalent, distinct, orders)


@dataclass
class FactorizationReport:
    factors: list[frozenset[int]]
    factors_prime: bool
    factors_transitive: bool
    order_independent: bool

    @property
    def ok(self) -> bool:
        return self.factors_prime and self.factors_transitive and self.order_independent


def unique_factorization_check(C: ModularData, seeds=range(10)) -> FactorizationReport:
    factors = prime_factorization(C)
    subs = [restrict(C, D) for D in factors]
    reference = set(factors)
    same = True
    for seed in seeds:
        order = list(range(C.rank))
        random.Random(seed).shuffle(order)
        if set(prime_factorization(C, order)) != reference:
            same = False
    return FactorizationReport(factors, all(is_prime(D) for D in subs),
                               all(is_transitive(D) for D in subs), same)


@dataclass
class CatalogEntry:
    N: int
    primes: tuple[int, ...]
    ls: tuple[int, ...]
    rank: int
    anomaly: Fraction  # alpha_1 = exp(2 pi i * anomaly)
    data: ModularData = field(repr=False, compare=False)

    def to_json(self) -> dict:
        return {"N": self.N, "primes": list(self.primes), "l": list(self.ls),
                "rank": self.rank, "anomaly": str(self.anomaly)}

    def csv_row(self) -> list[str]:
        return [str(self.N), " ".join(map(str, self.primes)), " ".join(map(str, self.ls)),
                str(self.rank), str(self.anomaly)]


CSV_HEADER = ["N", "primes", "l", "rank", "anomaly"]


def admissible_orders(maxN: int) -> list[int]:
    return [N for N in range(1, maxN + 1)
            if is_squarefree(N) and all(p > 3 for p, _ in factorize(N))]


def expected_count(N: int) -> int:
    """Number of inequivalent transitive data with ord(T) = N: prod over p | N of (p - 1)."""
    out = 1
    for p, _ in factorize(N):
        out *= p - 1
    return out


def classify_transitive(maxN: int = DEFAULT_MAX_N, bound: int = RESOURCE_BOUND) -> list[CatalogEntry]:
    if maxN > bound:
        raise ResourceBoundError(f"maxN = {maxN} exceeds the bound {bound}")
    catalog: list[CatalogEntry] = []
    for N in admissible_orders(maxN):
        primes = tuple(p for p, _ in factorize(N))
        kept: list[CatalogEntry] = []
        for ls in itertools.product(*(units(2 * p) for p in primes)):
            parts = [prime_family(p, l) for p, l in zip(primes, ls)]
            C = deligne_power(*parts) if parts else trivial_data()
            if not is_transitive(C) or C.ord_T != N:
                continue
            alpha = root_exponent(anomaly(C, 1)) if C.rank > 1 else Fraction(0)
            entry = CatalogEntry(N, primes, tuple(ls), C.rank, alpha, C)
            if any(_same_class(entry, other) for other in kept):
                continue
            kept.append(entry)
        catalog.extend(kept)
    catalog.sort(key=lambda e: (e.N, e.ls))
    return catalog


def _theta_multiset(C: ModularData) -> tuple[Fraction, ...]:
    return tuple(sorted(Fraction(e, C.conductor) for e in C.theta_exponents))


def _same_class(a: CatalogEntry, b: CatalogEntry) -> bool:
    if a.anomaly != b.anomaly or _theta_multiset(a.data) != _theta_multiset(b.data):
        return False
    return data_equivalent(a.data, b.data) is not None
