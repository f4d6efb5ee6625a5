import pytest

from modcat.classification import prime_family
from modcat.galois import (action_table, ambient_modulus, characteristic_two_group, compose, galois_conductor,
                           galois_group, galois_permutation, is_transitive, orbit_count,
                           transitive_structure_checks)
from modcat.modular_data import (build_pointed, build_sl2, cyclic_quadratic_form, deligne_power,
                                 trivial_data)
from modcat.nt import units


@pytest.fixture(scope="module")
def fib():
    return prime_family(5, 1)


def test_fibonacci_profile(fib):
    prof = galois_group(fib).to_json()
    assert prof == {"group_order": 2, "orbits": [["V0", "V2"]], "transitive": True,
                    "regular": True, "h2_order": 1}


def test_small_residues_lift_through_conductor(fib):
    assert galois_conductor(fib) == 5
    assert galois_permutation(fib, 2) == (1, 0)
    assert galois_permutation(fib, 1) == (0, 1)
    with pytest.raises(ValueError):
        galois_permutation(fib, 5)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_action_is_a_homomorphism(p):
    C = prime_family(p, 1)
    table = action_table(C)
    mod = ambient_modulus(C)
    assert set(table) == set(units(mod))
    for a in list(table)[:6]:
        for b in list(table)[:6]:
            assert table[a * b % mod] == compose(table[a], table[b])
    assert all(galois_permutation(C, a) == table[a] for a in list(table)[:6])


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_prime_family_structure(p):
    C = prime_family(p, 1)
    prof = galois_group(C)
    assert prof.transitive and prof.regular and prof.group_order == (p - 1) // 2
    assert all(transitive_structure_checks(C).values())


def test_non_transitive_examples():
    C = build_sl2(3, 1)
    assert not is_transitive(C)
    assert not transitive_structure_checks(C)["no nontrivial invertibles"]
    assert orbit_count(trivial_data()) == 1


def test_product_orbit_counts(fib):
    assert orbit_count(deligne_power(fib, prime_family(7, 1))) == 1
    assert orbit_count(deligne_power(fib, prime_family(5, 3))) == 2


def test_characteristic_two_group():
    z5 = build_pointed([5], cyclic_quadratic_form(5, 1, 5), 5)
    assert len(characteristic_two_group(z5)) == 2
    assert characteristic_two_group(z5, "order") == characteristic_two_group(z5, "level")
    semion = build_sl2(1, 1)
    assert len(characteristic_two_group(semion)) == 1
    assert galois_group(z5).to_json()["group_order"] == 4
