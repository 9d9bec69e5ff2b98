import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import from_lists, naive_add, naive_matmul, naive_power, to_lists
from strategies import matrices, same_size
from tropattack import (
    DimensionError,
    InputError,
    MatrixPair,
    PowerMode,
    TropMatrix,
    adjoint_power,
    adjoint_product,
    semidirect_power,
    semidirect_product,
)
from tropattack.semidirect import message_from_pair


def _series(A, n):
    # A ⊕ A^2 ⊕ ... ⊕ A^n with naive products
    X = to_lists(A)
    acc = X
    for k in range(2, n + 1):
        acc = naive_add(acc, naive_power(X, k))
    return from_lists(acc)


def test_adjoint_power_bounds():
    A = TropMatrix([[1]])
    assert adjoint_power(A, 1) == A
    with pytest.raises(InputError):
        adjoint_power(A, 0)
    with pytest.raises(DimensionError):
        adjoint_product(A, TropMatrix([[1, 2], [3, 4]]))


def test_pair_validation():
    with pytest.raises(DimensionError):
        MatrixPair(TropMatrix([[1]]), TropMatrix([[1, 2], [3, 4]]))
    p = MatrixPair(TropMatrix([[1]]), TropMatrix([[2]]))
    q = p * p
    assert q.first == TropMatrix([[3]]) and q.second == TropMatrix([[4]])
    with pytest.raises(InputError):
        semidirect_power(p, 0)


@given(same_size(3, rational=True))
def test_adjoint_associative(triple):
    A, B, C = triple
    assert adjoint_product(adjoint_product(A, B), C) == adjoint_product(A, adjoint_product(B, C))


@given(same_size(3))
def test_adjoint_distributes_over_sum(triple):
    A, B, C = triple
    # A ∘ (B ⊕ C) = (A ∘ B) ⊕ (A ∘ C)
    assert adjoint_product(A, B | C) == adjoint_product(A, B) | adjoint_product(A, C)


@given(matrices(max_d=4), st.integers(1, 12))
def test_adjoint_power_is_power_series(A, n):
    assert adjoint_power(A, n) == _series(A, n)


@given(same_size(6))
def test_semidirect_associative(mats):
    p, q, r = (MatrixPair(mats[i], mats[i + 1]) for i in (0, 2, 4))
    assert semidirect_product(semidirect_product(p, q), r) == semidirect_product(p, semidirect_product(q, r))


@given(same_size(2), st.integers(1, 10))
def test_closed_form_matches_inductive(pair, k):
    p = MatrixPair(*pair)
    assert semidirect_power(p, k, PowerMode.CLOSED_FORM) == semidirect_power(p, k, PowerMode.INDUCTIVE)


@given(same_size(2), st.integers(2, 9))
def test_message_against_naive_chain(pair, k):
    M, H = pair
    # first component of (M,H)^k by repeated naive semidirect products
    m, h = to_lists(M), to_lists(H)
    a = m
    for _ in range(k - 1):
        a = naive_add(naive_add(naive_add(a, m), h), naive_matmul(a, h))
    assert message_from_pair(M, H, k) == from_lists(a)
