from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from monmorita.exactfield import (
    QQ, Field, FieldError, invert, kernel_basis, kron, rref, solve,
)


GF7 = Field(7)


def reference_rref(rows, p=None):
    """Textbook Gauss-Jordan on Python lists (Fractions or ints mod p)."""
    if p is None:
        m = [[Fraction(x) for x in r] for r in rows]
        inv = lambda x: 1 / x
        norm = lambda x: x
    else:
        m = [[x % p for x in r] for r in rows]
        inv = lambda x: pow(x, p - 2, p)
        norm = lambda x: x % p
    nr = len(m)
    nc = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(nc):
        k = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        s = inv(m[r][c])
        m[r] = [norm(x * s) for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [norm(a - f * b) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


small = st.integers(min_value=-5, max_value=5)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_identity_rref():
    R, piv, rank = rref(QQ.eye(3))
    assert R == QQ.eye(3) and piv == [0, 1, 2] and rank == 3


def test_zero_rref():
    R, piv, rank = rref(QQ.zeros(2, 4))
    assert R.is_zero() and piv == [] and rank == 0


def test_gf7_rref_by_hand():
    R, piv, rank = rref(GF7.matrix([[2, 4], [3, 6]]))
    assert R == GF7.matrix([[1, 2], [0, 0]]) and rank == 1


def test_kernel_examples():
    assert kernel_basis(QQ.eye(4)).cols == 0
    assert kernel_basis(QQ.zeros(2, 3)).cols == 3
    K = kernel_basis(QQ.matrix([[1, 1]]))
    assert K.cols == 1 and K[0, 0] == -K[1, 0] != 0


def test_solve_examples():
    b = QQ.matrix([[1, 2], [3, 4], [5, 6]])
    assert solve(QQ.eye(3), b) == b
    assert solve(QQ.zeros(2, 2), QQ.matrix([[1], [0]])) is None
    A = QQ.matrix([[1, 2], [2, 4]])
    X = solve(A, QQ.matrix([[3], [6]]))
    assert X is not None and (A @ X - QQ.matrix([[3], [6]])).is_zero()
    with pytest.raises(ValueError):
        solve(A, QQ.zeros(3, 1))


def test_invert_examples():
    assert invert(QQ.eye(3)) == QQ.eye(3)
    swap = QQ.matrix([[0, 1], [1, 0]])
    assert invert(swap) == swap
    assert invert(GF7.matrix([[1, 1], [0, 1]])) == GF7.matrix([[1, 6], [0, 1]])
    assert invert(QQ.matrix([[1, 2], [2, 4]])) is None
    with pytest.raises(ValueError):
        invert(QQ.zeros(2, 3))


def test_scalar_serialisation():
    assert QQ.format(Fraction(6, -4)) == "-3/2"
    assert QQ.format(4) == "4"
    assert QQ("10/4") == QQ(Fraction(5, 2))
    assert GF7.format(-1) == "6"
    assert GF7("1/2") == GF7(4)
    with pytest.raises(FieldError):
        Field(8)
    with pytest.raises(FieldError):
        Field(2**31 + 11)
    assert Field.parse("GF:7") == GF7 and Field.parse("Q") == QQ


def test_kron_indexing():
    a = QQ.matrix([[1, 2], [3, 4]])
    b = QQ.matrix([[0, 1], [1, 0]])
    k = kron(a, b)
    for i in range(2):
        for j in range(2):
            for r in range(2):
                for s in range(2):
                    assert k[2 * i + r, 2 * j + s] == a[i, j] * b[r, s]


@pytest.mark.parametrize("field,p", [(QQ, None), (GF7, 7), (Field(2), 2)])
@given(rows=matrices())
@settings(max_examples=60, deadline=None)
def test_rref_matches_reference(field, p, rows):
    R, piv, rank = rref(field.matrix(rows))
    ref, ref_piv = reference_rref(rows, p)
    assert piv == ref_piv and rank == len(piv)
    assert R == field.matrix(ref)


@pytest.mark.parametrize("field", [QQ, GF7])
@given(rows=matrices(6, 6))
@settings(max_examples=60, deadline=None)
def test_rank_nullity_and_idempotence(field, rows):
    M = field.matrix(rows)
    R, piv, rank = rref(M)
    assert rref(R)[0] == R
    K = kernel_basis(M)
    assert K.cols + rank == M.cols
    assert (M @ K).is_zero()
    assert K.rank() == K.cols


@pytest.mark.parametrize("field", [QQ, GF7])
@given(rows=matrices(5, 5), rhs=st.lists(small, min_size=5, max_size=5))
@settings(max_examples=60, deadline=None)
def test_solve_substitutes_back(field, rows, rhs):
    A = field.matrix(rows)
    b = field.column(rhs[:A.rows])
    X = solve(A, b)
    if X is not None:
        assert (A @ X - b).is_zero()
    else:
        # unsolvable exactly when appending b raises the rank
        aug = field.matrix([r + [v] for r, v in zip(rows, rhs)])
        assert aug.rank() > A.rank()


@given(a=st.integers(-10**30, 10**30), b=st.integers(1, 10**30), c=st.integers(-10**30, 10**30))
def test_rational_arithmetic_is_exact(a, b, c):
    x = QQ(Fraction(a, b))
    y = QQ(c)
    assert Fraction(int((x * y).p), int((x * y).q)) == Fraction(a, b) * c


@given(a=st.integers(-10**6, 10**6), b=st.integers(-10**6, 10**6))
def test_prime_field_matches_integers(a, b):
    p = 2**31 - 1
    F = Field(p)
    assert int(F(a) * F(b)) == (a * b) % p
    assert int(F(a) + F(b)) == (a + b) % p
