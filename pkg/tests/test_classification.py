import pytest

from modcat.classification import (CSV_HEADER, ResourceBoundError, admissible_orders,
                                   check_prime_transitive_catalog, classify_transitive,
                                   expected_count, prime_family, product_transitivity,
                                   unique_factorization_check, verify_transitivity_theorems)
from modcat.modular_data import build_sl2, deligne_power


def test_admissible_orders():
    assert admissible_orders(40) == [1, 5, 7, 11, 13, 17, 19, 23, 29, 31, 35, 37]


@pytest.mark.parametrize("N,count", [(1, 1), (5, 4), (7, 6), (35, 24), (385, 240)])
def test_expected_count(N, count):
    assert expected_count(N) == count


def test_small_catalog():
    cat = classify_transitive(7)
    assert [e.N for e in cat] == [1] + [5] * 4 + [7] * 6
    assert len({(e.N, e.anomaly) for e in cat}) == len(cat)
    assert all(len(e.csv_row()) == len(CSV_HEADER) for e in cat)
    assert cat[0].to_json() == {"N": 1, "primes": [], "l": [], "rank": 1, "anomaly": "0"}


def test_catalog_is_deterministic():
    a = [e.to_json() for e in classify_transitive(13)]
    b = [e.to_json() for e in classify_transitive(13)]
    assert a == b


def test_resource_bound():
    with pytest.raises(ResourceBoundError):
        classify_transitive(1000)


@pytest.mark.parametrize("p", [5, 7])
def test_prime_catalog(p):
    rep = check_prime_transitive_catalog(p)
    assert rep.ok and len(rep.labels) == p - 1


def test_theorems_on_transitive_product():
    C = deligne_power(prime_family(5, 1), prime_family(7, 1))
    checks = verify_transitivity_theorems(C)
    assert all(checks.values()), checks


def test_theorems_fail_on_semion():
    checks = verify_transitivity_theorems(build_sl2(1, 1), lifts=False)
    assert not checks["transitive"] and not checks["ord(T) odd"]


def test_product_laws():
    fib = prime_family(5, 1)
    rep = product_transitivity(fib, prime_family(7, 1))
    assert rep.ok and rep.orbits == 1 and rep.bound_ok
    rep = product_transitivity(fib, prime_family(5, 3))
    assert rep.ok and rep.orbits == 2


def test_unique_factorization():
    C = deligne_power(prime_family(5, 1), prime_family(7, 3))
    rep = unique_factorization_check(C, seeds=range(4))
    assert rep.ok and sorted(len(D) for D in rep.factors) == [2, 3]
