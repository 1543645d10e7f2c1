import itertools

import pytest

from monmorita.algkit import (
    AlgebraError, AlgebraMap, FiniteAlgebra, algebra_iso_by_reindex, check_algebra,
    check_algebra_map, cyclic_group_table, diagonal_algebra, enveloping_algebra,
    ground_algebra, group_algebra, identity_map, matrix_algebra, opposite_algebra,
    product_group_table, tensor_algebras, transpose_map, truncated_polynomial_algebra,
)
from monmorita.exactfield import QQ, Field

GF7 = Field(7)
V4 = product_group_table(cyclic_group_table(2), cyclic_group_table(2))


def naive_constants(A):
    """Structure constants recomputed from the product of basis columns."""
    n = A.dim
    return [[[A.product(i, j)[k, 0] for k in range(n)] for j in range(n)] for i in range(n)]


def constructors():
    return [
        ground_algebra(QQ), matrix_algebra(QQ, 1), matrix_algebra(QQ, 2), matrix_algebra(GF7, 3),
        diagonal_algebra(QQ, 5), group_algebra(QQ, V4), group_algebra(GF7, cyclic_group_table(3)),
        truncated_polynomial_algebra(QQ, 3), enveloping_algebra(matrix_algebra(QQ, 2)),
        opposite_algebra(matrix_algebra(QQ, 2)),
    ]


@pytest.mark.parametrize("A", constructors(), ids=lambda A: A.name)
def test_constructors_pass_checker(A):
    assert check_algebra(A).ok


def test_matrix_units():
    A = matrix_algebra(QQ, 2)
    assert A.dim == 4
    assert A.mult(A.basis(1), A.basis(2)) == A.basis(0)
    assert A.mult(A.basis(2), A.basis(1)) == A.basis(3)
    assert A.mult(A.basis(1), A.basis(1)).is_zero()
    assert matrix_algebra(QQ, 1).same_structure(ground_algebra(QQ))
    with pytest.raises(AlgebraError):
        matrix_algebra(QQ, 0)


def test_group_algebras():
    assert group_algebra(QQ, [[0]]).same_structure(ground_algebra(QQ))
    Z2 = group_algebra(QQ, cyclic_group_table(2))
    assert Z2.mult(Z2.basis(1), Z2.basis(1)) == Z2.basis(0)
    K = group_algebra(QQ, V4)
    assert K.dim == 4 and K.is_commutative()
    with pytest.raises(AlgebraError):
        group_algebra(QQ, [[0, 1], [1, 1]])


def test_diagonal():
    D = diagonal_algebra(QQ, 2)
    assert D.mult(D.basis(0), D.basis(1)).is_zero()
    assert diagonal_algebra(QQ, 1).same_structure(ground_algebra(QQ))


def test_broken_triple_reported():
    A = truncated_polynomial_algebra(QQ, 3)
    c = A.constants()
    c[1][2] = [0, 1, 0]   # x * x^2 := x instead of 0
    bad = FiniteAlgebra.from_constants(QQ, c, [1, 0, 0])
    rep = check_algebra(bad)
    assert not rep.ok and rep.failures() == ["alg.associative"]
    i, j, l = rep.items["alg.associative"]["witness"]
    # the witness is a genuine failing triple
    lhs = bad.mult(bad.mult(bad.basis(i), bad.basis(j)), bad.basis(l))
    rhs = bad.mult(bad.basis(i), bad.mult(bad.basis(j), bad.basis(l)))
    assert lhs != rhs


def test_constants_roundtrip():
    for A in constructors():
        assert A.constants() == naive_constants(A)


def test_tensor_examples():
    D2 = diagonal_algebra(QQ, 2)
    T = tensor_algebras(D2, D2)
    assert T.same_structure(diagonal_algebra(QQ, 4))
    A = matrix_algebra(QQ, 2)
    assert tensor_algebras(A, ground_algebra(QQ)).same_structure(A)
    E = tensor_algebras(opposite_algebra(A), A)
    assert E.dim == 16 and check_algebra(E).ok


def test_tensor_associative_up_to_reindex():
    A, B, C = diagonal_algebra(QQ, 2), truncated_polynomial_algebra(QQ, 2), matrix_algebra(QQ, 2)
    left = tensor_algebras(tensor_algebras(A, B), C)
    right = tensor_algebras(A, tensor_algebras(B, C))
    # both orderings are (a, b, c) row-major, so the reindex is the identity
    assert algebra_iso_by_reindex(left, right, list(range(left.dim)))


def test_opposite():
    K = group_algebra(QQ, V4)
    assert opposite_algebra(K).same_structure(K)
    A = matrix_algebra(QQ, 2)
    assert opposite_algebra(opposite_algebra(A)).same_structure(A)
    Aop = opposite_algebra(A)
    assert Aop.mult(A.basis(1), A.basis(2)) == A.basis(3)


def test_algebra_maps():
    A = matrix_algebra(QQ, 2)
    assert check_algebra_map(identity_map(A)).ok
    zero = AlgebraMap(A, A, QQ.zeros(4, 4))
    assert check_algebra_map(zero).failures() == ["algmap.unital"]
    t = transpose_map(QQ, 2)
    assert check_algebra_map(t).ok
    assert not check_algebra_map(t, anti=False).ok
    # transpose as a genuine algebra map Mat_2^op -> Mat_2
    assert check_algebra_map(AlgebraMap(opposite_algebra(A), A, t.matrix)).ok


def test_transpose_iso_all_sizes():
    for n in (1, 2, 3):
        A = matrix_algebra(GF7, n)
        t = transpose_map(GF7, n)
        assert check_algebra_map(AlgebraMap(opposite_algebra(A), A, t.matrix)).ok


def test_centre():
    assert matrix_algebra(QQ, 2).centre().cols == 1
    assert group_algebra(QQ, V4).centre().cols == 4
    assert diagonal_algebra(QQ, 3).centre().cols == 3
