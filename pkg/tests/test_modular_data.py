import json

import numpy as np
import pytest

from modcat.cyclotomic import E
from modcat.cycmatrix import CycMatrix
from modcat.modular_data import (FusionRing, ModularData, all_fusion_subcategories, anomaly,
                                 build_pointed, build_sl2, build_sl2_adjoint, build_svec,
                                 centralizer, cyclic_quadratic_form, data_equivalent,
                                 deligne_power, deligne_product, fp_dims, gauss_sum,
                                 is_modular_subcategory, is_prime, prime_factorization, restrict,
                                 sl2_fusion_rule, tensor_generated, trivial_data, validate_modular,
                                 verlinde_fusion)
from modcat.nt import units
from oracle import adjoint_s, sl2_s, verlinde

SQRT5 = E(5) - E(5, 2) - E(5, 3) + E(5, 4)
PHI = (1 + SQRT5) / 2


@pytest.fixture(scope="module")
def fib():
    return build_sl2_adjoint(3, 1)


def test_fibonacci_exact(fib):
    assert fib.S == CycMatrix.from_entries([[1, PHI], [PHI, -1]])
    assert list(fib.fusion.N[1, 1]) == [1, 1]
    assert fib.ord_T == 5
    assert validate_modular(fib).ok


SL2_CASES = [(k, l) for k in range(1, 9) for l in units(2 * (k + 2))[:3]]


@pytest.mark.parametrize("k,l", SL2_CASES)
def test_sl2_against_float_oracle(k, l):
    C = build_sl2(k, l)
    S = sl2_s(k, l)
    assert np.allclose(C.S.numeric(), S, atol=1e-9)
    assert np.allclose(C.fusion.N, verlinde(S), atol=1e-9)
    closed = np.array([[[sl2_fusion_rule(k, a, b, c) for c in range(k + 1)]
                        for b in range(k + 1)] for a in range(k + 1)])
    assert np.array_equal(C.fusion.N, closed)
    rep = validate_modular(C)
    assert rep.ok and not rep.warnings


@pytest.mark.parametrize("k,l", [(3, 1), (5, 3), (7, 1), (9, 5), (11, 1)])
def test_adjoint_against_float_oracle(k, l):
    C = build_sl2_adjoint(k, l)
    assert np.allclose(C.S.numeric(), adjoint_s(k, l), atol=1e-9)
    assert validate_modular(C).ok


def test_even_adjoint_requires_flag():
    with pytest.raises(ValueError):
        build_sl2_adjoint(4, 1)
    C = build_sl2_adjoint(4, 1, allow_even=True)
    assert C.fusion_known and C.fusion.check() == []


def test_svec_is_not_modular():
    rep = validate_modular(build_svec(1))
    assert not rep.ok and "det S nonzero" in rep.failures


def test_pointed_z5():
    C = build_pointed([5], cyclic_quadratic_form(5, 1, 5), 5)
    assert C.rank == 5 and validate_modular(C).ok
    assert all(d == 1 for d in C.dims)
    assert C.fusion.product(1, 2) == {3: 1} or C.fusion.N[1, 2, 3] == 1


def test_pointed_degenerate_form():
    from modcat.modular_data import DegenerateForm
    with pytest.raises(DegenerateForm):
        build_pointed([2], [0, 0], 2)


def test_fusion_ring_axioms_detect_errors():
    N = np.zeros((2, 2, 2), dtype=np.int64)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = 1
    N[1, 1, 1] = 1  # missing unit summand
    assert FusionRing(N, [0, 1]).check()


def test_json_roundtrip_is_stable(fib):
    C = deligne_product(fib, build_sl2(2, 1))
    text = C.dumps()
    again = ModularData.from_json(json.loads(text))
    assert again.dumps() == text
    assert again.S == C.S and again.theta_exponents == C.theta_exponents


def test_deligne_product_kron(fib):
    B = build_sl2(2, 1)
    C = deligne_product(fib, B)
    assert C.S == fib.S.kron(B.S)
    assert np.array_equal(C.fusion.N, fib.fusion.kron(B.fusion).N)
    assert validate_modular(C).ok


def test_subcategories_and_factorization(fib):
    FF = deligne_power(fib, fib)
    subs = all_fusion_subcategories(FF)
    assert len(subs) == 4
    assert tensor_generated(FF, 3) == frozenset(range(4))
    factors = prime_factorization(FF)
    assert sorted(map(sorted, factors)) == [[0, 1], [0, 2]]
    assert centralizer(FF, [0, 1]) == frozenset({0, 2})
    assert is_modular_subcategory(FF, frozenset({0, 1}))
    assert is_prime(fib) and not is_prime(FF)


def test_restrict_to_subcategory(fib):
    FF = deligne_power(fib, fib)
    D = restrict(FF, [0, 2])
    assert data_equivalent(D, fib) is not None


def test_data_equivalence_detects_permutation_and_galois():
    A = build_sl2_adjoint(5, 1)
    perm = [0, 2, 1]
    B = ModularData([A.labels[i] for i in perm], A.conductor,
                    A.S.permute(perm), [A.theta_exponents[i] for i in perm])
    assert data_equivalent(A, B) is not None
    assert data_equivalent(A, build_sl2_adjoint(5, 3)) is None


def test_gauss_sum_and_anomaly(fib):
    tau = gauss_sum(fib, 1)
    val = complex(tau)
    assert abs(val - (1 + complex(PHI) ** 2 * np.exp(2j * np.pi * 2 / 5))) < 1e-9
    a = complex(anomaly(fib, 1))
    assert abs(a - val / val.conjugate()) < 1e-9
    assert anomaly(trivial_data(), 1) == 1


def test_fp_dims(fib):
    golden = (1 + 5**0.5) / 2
    dims = fp_dims(fib)
    assert dims.values[1] == pytest.approx(golden) and dims.realizer == 1
    other = fp_dims(build_sl2_adjoint(3, 3))
    assert other.values[1] == pytest.approx(golden) and other.realizer == 3


def test_verlinde_rejects_singular():
    from modcat.modular_data import ModularDataError
    with pytest.raises(ModularDataError):
        verlinde_fusion(build_svec(1))
