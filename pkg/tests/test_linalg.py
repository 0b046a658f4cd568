from fractions import Fraction

import numpy as np
import pytest
from flint import fmpq
from hypothesis import given, strategies as st

from fihom.linalg import (PrimeField, RationalField, field_from_spec, field_to_json, image_basis,
                          kernel_basis, quotient_basis, rank, rref, solve, sparse_rank)

from oracle import rank as oracle_rank

F7, F101, QQ = PrimeField(7), PrimeField(101), RationalField()


def q_array(rows):
    return QQ.array(rows)


def as_lists(A):
    return [[Fraction(int(x.p), int(x.q)) if isinstance(x, fmpq) else int(x) for x in row]
            for row in A]


@st.composite
def matrices(draw, field, max_dim=20):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    if field.characteristic:
        elem = st.integers(0, field.p - 1)
    else:
        elem = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    # mixing in zeros makes rank deficiency common
    vals = draw(st.lists(st.one_of(st.just(0), elem), min_size=r * c, max_size=r * c))
    rows = [vals[i * c:(i + 1) * c] for i in range(r)]
    if r == 0 or c == 0:
        return field.zeros(r, c)
    return field.array(rows)


# -- examples --------------------------------------------------------------------

@pytest.mark.parametrize("F", [F7, QQ])
def test_rref_identity(F):
    R, piv, rk = rref(F.eye(3), F)
    assert piv == [0, 1, 2] and rk == 3
    assert F.equal(R, F.eye(3))


@pytest.mark.parametrize("F", [F7, QQ])
def test_rref_zero(F):
    R, piv, rk = rref(F.zeros(2, 4), F)
    assert piv == [] and rk == 0 and F.is_zero(R)


def test_rank_dependent_rows_mod7():
    assert rank(F7.array([[1, 2], [2, 4]]), F7) == 1


@pytest.mark.parametrize("F", [F7, QQ])
def test_kernel_trivial_cases(F):
    assert kernel_basis(F.eye(4), F).shape == (4, 0)
    assert kernel_basis(F.zeros(2, 3), F).shape == (3, 3)


def test_kernel_of_sum_functional_over_q():
    A = q_array([[1, 1]])
    K = kernel_basis(A, QQ)
    assert K.shape == (2, 1)
    assert QQ.is_zero(QQ.matmul(A, K))
    assert K[0, 0] == -K[1, 0] != 0


def test_quotient_basis_examples():
    assert quotient_basis(F7.zeros(3, 0), 3, F7) == [0, 1, 2]
    assert quotient_basis(F7.array([[1], [0]]), 2, F7) == [1]
    S = q_array([[1], [1], [0]])
    idx = quotient_basis(S, 3, QQ)
    assert idx == [1, 2]
    full = np.concatenate([S, QQ.eye(3)[:, idx]], axis=1)
    assert rank(full, QQ) == 3


def test_quotient_basis_rejects_dependent_columns():
    with pytest.raises(ValueError):
        quotient_basis(F7.array([[1, 2], [1, 2]]), 2, F7)


def test_field_serialisation():
    assert F7.to_str(F7.element(-4)) == "3"
    assert QQ.to_str(QQ.element("-7/2")) == "-7/2"
    assert F7.element("1/2") == 4
    assert field_from_spec(field_to_json(F101)) == F101
    assert field_from_spec("q") == QQ
    with pytest.raises(ValueError):
        PrimeField(9)


# -- properties ------------------------------------------------------------------

@pytest.mark.parametrize("F", [F7, F101, QQ], ids=str)
@given(data=st.data())
def test_rank_nullity(F, data):
    A = data.draw(matrices(F))
    assert rank(A, F) + kernel_basis(A, F).shape[1] == A.shape[1]
    K = kernel_basis(A, F)
    assert F.is_zero(F.matmul(A, K))


@pytest.mark.parametrize("F", [F7, QQ], ids=str)
@given(data=st.data())
def test_rank_matches_fraction_oracle(F, data):
    A = data.draw(matrices(F))
    if A.size == 0:
        return
    assert rank(A, F) == oracle_rank(as_lists(A), F.characteristic or None)


@pytest.mark.parametrize("F", [F7, QQ], ids=str)
@given(data=st.data())
def test_rref_idempotent(F, data):
    A = data.draw(matrices(F))
    R, piv, rk = rref(A, F)
    R2, piv2, _ = rref(R, F)
    assert piv == piv2 and F.equal(R, R2)


@given(a=st.fractions(max_denominator=10**6).filter(bool), b=st.fractions().filter(bool))
def test_rational_arithmetic_exact(a, b):
    x, y = QQ.element(a), QQ.element(b)
    assert x * QQ.inv(x) == 1
    assert (x / y) * (y / x) == 1


@pytest.mark.parametrize("F", [F101, QQ], ids=str)
@given(data=st.data())
def test_solve_consistent_systems(F, data):
    A = data.draw(matrices(F, max_dim=12))
    if A.shape[1] == 0:
        return
    coords = data.draw(st.lists(st.integers(-3, 3), min_size=A.shape[1], max_size=A.shape[1]))
    x0 = F.array([[v] for v in coords])
    b = F.matmul(A, x0)
    x = solve(A, b, F)
    assert x is not None and F.equal(F.matmul(A, x), b)


def test_solve_inconsistent_returns_none():
    assert solve(F7.array([[1, 0], [1, 0]]), F7.array([[1], [2]]), F7) is None


def test_image_basis_spans_column_space():
    A = F7.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    B = image_basis(A, F7)
    assert B.shape[1] == rank(A, F7) == 2
    assert rank(np.concatenate([A, B], axis=1), F7) == 2


@st.composite
def sparse_matrices(draw, field):
    r = draw(st.integers(1, 60))
    c = draw(st.integers(1, 60))
    nnz = draw(st.integers(0, 2 * max(r, c)))
    A = field.zeros(r, c)
    for _ in range(nnz):
        i, j = draw(st.integers(0, r - 1)), draw(st.integers(0, c - 1))
        v = draw(st.integers(-3, 3))
        A[i, j] = field.element(v)
    return A


@pytest.mark.parametrize("F", [F7, F101, QQ], ids=str)
@given(data=st.data())
def test_sparse_rank_agrees_with_dense(F, data):
    A = data.draw(sparse_matrices(F))
    assert sparse_rank(A, F) == F.rank(A) == oracle_rank(as_lists(A), F.characteristic or None)


def test_sparse_rank_dense_fallback():
    rng = np.random.default_rng(0)
    A = rng.integers(0, 101, (260, 240))
    A[rng.random(A.shape) < 0.93] = 0     # sparse enough to start sparse, fills in later
    assert sparse_rank(A, F101) == F101.rank(A)


@given(data=st.data())
def test_rational_matmul_sparse_paths(data):
    r, k, c = (data.draw(st.integers(1, 30)) for _ in range(3))
    dens = data.draw(st.sampled_from([0.05, 0.5]))
    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
    def rand(shape):
        vals = (rng.random(shape) < dens) * rng.integers(-5, 6, shape)
        return QQ.array([[Fraction(int(v), 3) for v in row] for row in vals])
    a, b = rand((r, k)), rand((k, c))
    assert QQ.equal(QQ.matmul(a, b), a.dot(b))
