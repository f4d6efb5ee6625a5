from fractions import Fraction

import numpy as np
import pytest

from modcat.classification import prime_family
from modcat.cycmatrix import CycMatrix
from modcat.galois import galois_permutation
from modcat.modular_data import build_pointed, build_sl2, cyclic_quadratic_form, trivial_data
from modcat.nt import legendre, phi2, units
from modcat.sl2z import (MultiplicityError, ShapeError, SignedPermutationMatrix, chi_rep,
                         commutant_dimension, direct_sum, epsilon_signs, eta_rep, g_sigma,
                         g_sigma_category_check, is_irreducible, is_minimal,
                         isotypic_decomposition, lift_levels, lift_projective,
                         minimal_decomposition, rep_from_descriptor, reps_equivalent,
                         sqrt_global_dim, tensor_rep)


@pytest.fixture(scope="module")
def fib_lifts():
    return lift_projective(prime_family(5, 1))


def test_fibonacci_lifts(fib_lifts):
    assert len(fib_lifts) == 12
    assert [r.level for r in fib_lifts] == [60, 30, 20, 15, 60, 10, 60, 15, 20, 30, 60, 5]
    assert lift_levels(prime_family(5, 1)) == [r.level for r in fib_lifts]
    for rho in fib_lifts:
        assert rho.relations_hold()
        assert is_minimal(rho) is not None
        assert is_irreducible(rho)
        assert reps_equivalent(rho, rep_from_descriptor(is_minimal(rho))) is not None


def test_sqrt_global_dim_is_positive():
    C = prime_family(7, 1)
    r = sqrt_global_dim(C)
    assert r * r == C.global_dim and r.sign() == 1


@pytest.mark.parametrize("p", [5, 7, 11, 13])
@pytest.mark.parametrize("j", [1, -1])
def test_eta_representations(p, j):
    rho = eta_rep(p, j)
    assert rho.relations_hold() and rho.level == p and rho.dim == (p - 1) // 2
    desc = is_minimal(rho)
    assert desc is not None and desc.factors[0][2] == j
    assert all(legendre(e, p) == j for e in rho.t_exponents)
    assert is_irreducible(rho)


def test_eta_types_are_inequivalent():
    assert reps_equivalent(eta_rep(7, 1), eta_rep(7, -1)) is None


@pytest.mark.parametrize("k", range(12))
def test_chi_reps(k):
    rho = chi_rep(k)
    assert rho.relations_hold() and rho.dim == 1


def test_trivial_data_lifts_are_characters():
    lifts = lift_projective(trivial_data())
    assert sorted(r.level for r in lifts) == sorted(
        12 // np.gcd(k, 12) for k in range(12))


@pytest.mark.parametrize("n,l,l0,expected", [
    (35, 1, 0, ((5, 3, -1), (7, 3, -1))),
    (5, 1, 0, ((5, 1, 1),)),
    (60, 1, 5, ((5, 3, -1),)),
])
def test_minimal_decomposition(n, l, l0, expected):
    desc = minimal_decomposition(n, l)
    assert desc.factors == expected and desc.l0 == l0
    assert desc.d * np.prod([p for p, _, _ in desc.factors]) == n


def test_minimal_decomposition_rejects_bad_levels():
    with pytest.raises(ShapeError):
        minimal_decomposition(8, 1)
    with pytest.raises(ShapeError):
        minimal_decomposition(25, 1)
    with pytest.raises(ValueError):
        minimal_decomposition(10, 5)


def test_tensor_and_sum():
    a, b = eta_rep(5, 1), eta_rep(7, -1)
    t = tensor_rep(a, b)
    assert t.relations_hold() and t.level == 35 and t.dim == phi2(35)
    assert is_minimal(t) is not None and is_irreducible(t)
    d = direct_sum(a, b)
    assert d.relations_hold() and not is_irreducible(d)
    assert commutant_dimension(d) == 2


def test_reducible_with_repeated_spectrum():
    a = eta_rep(5, 1)
    with pytest.raises(MultiplicityError):
        reps_equivalent(direct_sum(a, a), direct_sum(a, a))
    assert commutant_dimension(direct_sum(a, a)) == 4


@pytest.mark.parametrize("p", [5, 7])
def test_g_sigma(p, fib_lifts):
    C = prime_family(p, 1)
    for rho in lift_projective(C)[:4]:
        gs = {a: g_sigma(rho, a) for a in units(rho.level)}
        for a, g in gs.items():
            assert g_sigma_category_check(rho, a)
            assert g.signs == epsilon_signs(rho, a)
            assert SignedPermutationMatrix.from_matrix(g.matrix()) == g
        n = rho.level
        for a in list(gs)[:4]:
            for b in list(gs)[:4]:
                assert np.array_equal(gs[a].matrix() @ gs[b].matrix(), gs[a * b % n].matrix())


def test_isotypic_decomposition_pointed():
    C = build_pointed([5], cyclic_quadratic_form(5, 1, 5), 5)
    rho = lift_projective(C)[0]
    comps = isotypic_decomposition(rho, C)
    assert sorted(c.dimension for c in comps) == [2, 3]
    assert all(c.invariant for c in comps)


def test_isotypic_decomposition_transitive_is_single(fib_lifts):
    comps = isotypic_decomposition(fib_lifts[0])
    assert [c.dimension for c in comps] == [2]


def test_semion_lifts():
    lifts = lift_projective(build_sl2(1, 1))
    assert all(r.relations_hold() for r in lifts)


def test_spectrum_fractions(fib_lifts):
    rho = fib_lifts[-1]
    assert rho.level == 5
    assert all(isinstance(x, Fraction) and x.denominator in (1, 5) for x in rho.spectrum())


def test_eta_five_spectrum_and_galois_symmetry():
    rho = eta_rep(5, 1)
    assert rho.t_exponents == (1, 4)
    for a in units(5):
        g_sigma(rho, a)  # raises unless sigma(s) = g s and sigma^2(t) = g t g^-1
