from fractions import Fraction

import numpy as np
from hypothesis import given, strategies as st

from modcat.cyclotomic import Cyc, E
from modcat.cycmatrix import CycMatrix, field_conductor
from modcat.linalg import determinant, kernel, rank

M = 12


@st.composite
def matrices(draw, n=3, m=M):
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            coeffs = draw(st.lists(st.integers(-3, 3), min_size=m, max_size=m))
            row.append(Cyc.from_coefficients(m, coeffs))
        rows.append(row)
    return CycMatrix.from_entries(rows, m)


def naive_product(a: CycMatrix, b: CycMatrix) -> list[list[Cyc]]:
    A, B = a.to_lists(), b.to_lists()
    n, k, c = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(c):
            s = Cyc.zero(a.m)
            for t in range(k):
                s = s + A[i][t] * B[t][j]
            row.append(s)
        out.append(row)
    return out


@given(matrices(), matrices())
def test_matmul_matches_entrywise(a, b):
    assert (a @ b).to_lists() == naive_product(a, b)


@given(matrices(), matrices(), matrices())
def test_matmul_associative_and_distributive(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)
    assert a @ (b + c) == a @ b + a @ c


@given(matrices())
def test_identity_and_transpose(a):
    one = CycMatrix.identity(3, M)
    assert one @ a == a and a @ one == a
    assert (a.T.T) == a


@given(matrices(), st.sampled_from([5, 7, 11]))
def test_galois_is_entrywise_and_multiplicative(a, g):
    assert a.galois(g).to_lists() == [[x.galois(g) for x in row] for row in a.to_lists()]
    assert (a @ a).galois(g) == a.galois(g) @ a.galois(g)


@given(matrices(n=2), matrices(n=2))
def test_kron(a, b):
    k = a.kron(b)
    for i in range(4):
        for j in range(4):
            assert k[i, j] == a[i // 2, j // 2] * b[i % 2, j % 2]


@given(matrices())
def test_determinant_multiplicative(a):
    b = a.galois(5)
    assert determinant(a @ b) == determinant(a) * determinant(b)


@given(matrices())
def test_kernel_vectors_are_annihilated(a):
    rows = a.to_lists()
    singular = CycMatrix.from_entries([rows[0], rows[1], [x + y for x, y in zip(rows[0], rows[1])]], M)
    assert rank(singular) <= 2
    assert determinant(singular).is_zero()
    for v in kernel(singular):
        for row in singular.to_lists():
            total = Cyc.zero(M)
            for x, y in zip(row, v):
                total = total + x * y
            assert total.is_zero()


def test_integer_entries_and_numeric():
    mat = CycMatrix.from_ints([[1, -2], [0, 3]], 5)
    assert np.array_equal(mat.integer_entries(), [[1, -2], [0, 3]])
    assert CycMatrix.from_entries([[E(5)]]).integer_entries() is None
    half = CycMatrix.from_fractions([[Fraction(1, 2)]])
    assert half.integer_entries() is None
    assert np.allclose(mat.numeric(), [[1, -2], [0, 3]])


def test_field_conductor():
    sqrt5 = E(5) - E(5, 2) - E(5, 3) + E(5, 4)
    mat = CycMatrix.from_entries([[1, sqrt5]], 60)
    assert field_conductor(mat) == 5
    assert field_conductor(CycMatrix.from_ints([[1, 2]], 12)) == 1
    assert field_conductor(CycMatrix.from_entries([[E(4)]], 24)) == 4
