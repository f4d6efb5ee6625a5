import math

import pytest
from hypothesis import given, strategies as st

from modcat.nt import (cyclotomic_polynomial, euler_phi, factorize, is_prime, is_squarefree,
                       legendre, lift_unit, multiplicative_order, phi2, units)
from oracle import brute_legendre, brute_phi2


@given(st.integers(1, 3000))
def test_factorize_roundtrip(n):
    prod = 1
    for p, e in factorize(n):
        assert is_prime(p)
        prod *= p**e
    assert prod == n


@given(st.integers(1, 400))
def test_phi_and_units(n):
    assert euler_phi(n) == len(units(n)) == sum(math.gcd(a, n) == 1 for a in range(n))


@given(st.integers(1, 400))
def test_phi2_matches_brute_force(n):
    assert phi2(n) == brute_phi2(n)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23])
def test_legendre_matches_brute_force(p):
    assert all(legendre(a, p) == brute_legendre(a, p) for a in range(-p, 2 * p))


def test_squarefree():
    assert [n for n in range(1, 20) if is_squarefree(n)] == [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19]


@given(st.integers(2, 200), st.integers(1, 6))
def test_lift_unit(n, k):
    M = n * k
    for a in units(n):
        b = lift_unit(a, n, M)
        assert b % n == a and math.gcd(b, M) == 1


@given(st.integers(2, 200))
def test_multiplicative_order(n):
    for a in units(n)[:5]:
        o = multiplicative_order(a, n)
        assert pow(a, o, n) == 1 % n
        assert all(pow(a, d, n) != 1 % n for d in range(1, o))


@pytest.mark.parametrize("m,coeffs", [
    (1, (-1, 1)), (2, (1, 1)), (4, (1, 0, 1)), (5, (1, 1, 1, 1, 1)),
    (6, (1, -1, 1)), (12, (1, 0, -1, 0, 1)),
])
def test_cyclotomic_polynomial_small(m, coeffs):
    assert tuple(cyclotomic_polynomial(m)) == coeffs


@given(st.integers(1, 120))
def test_cyclotomic_polynomial_degree(m):
    assert len(cyclotomic_polynomial(m)) - 1 == euler_phi(m)
