import pytest
from hypothesis import assume, given

from oracles import from_lists, naive_power, to_lists
from strategies import matrices
from tropattack import (
    InputError,
    TropMatrix,
    b_matrix,
    build_csr_from_cycle,
    csr_expansion_residual,
    csr_term,
    find_critical_cycle,
    max_cycle_mean,
    wielandt_threshold,
)
from tropattack.csr import apply_s_power, s_power
from tropattack.matrix import mat_mul, mat_pow
from tropattack.scalar import NEG_INF

N = "-inf"
F4 = TropMatrix([[1, 7, 2, 5], [-1, 0, 2, 4], [3, 4, 2, 2], [-5, -10, 10, 0]])


def test_rejects_non_critical_cycle():
    with pytest.raises(InputError):
        build_csr_from_cycle(F4, (0, 1))
    with pytest.raises(InputError):
        build_csr_from_cycle(F4, (1, 0, 2, 3))


def test_s_power_shortcut_matches_products():
    csr = build_csr_from_cycle(F4, (0, 1, 3, 2))
    P = TropMatrix.identity(4)
    for r in range(9):
        assert s_power(csr, r) == mat_mul(TropMatrix.identity(4), P)
        assert apply_s_power(csr, csr.C, r) == mat_mul(csr.C, P)
        P = mat_mul(P, csr.S)


def test_cycle_period_is_its_length():
    csr = build_csr_from_cycle(F4, (2, 3))
    assert csr.period == 2
    assert csr_term(csr, 5, include_R=False) == apply_s_power(csr, csr.C, 1)
    with pytest.raises(InputError):
        csr_term(csr, -1)


def test_b_matrix_removes_nodes():
    B = b_matrix(F4, {0, 2}).B
    assert B[0, 1] is NEG_INF and B[1, 0] is NEG_INF and B[3, 2] is NEG_INF
    assert B[1, 3] == 4
    with pytest.raises(InputError):
        b_matrix(F4, {7})


def test_threshold_guard():
    assert wielandt_threshold(4) == 10
    with pytest.raises(InputError):
        csr_expansion_residual(F4, 9)


def test_expansion_on_a_reducible_matrix():
    # critical loop at node 0, a slower cycle through 1 and 2
    F = TropMatrix([[2, 0, N], [N, N, 1], [N, 0, N]])
    for t in range(wielandt_threshold(3), 12):
        lhs, rhs = csr_expansion_residual(F, t)
        assert lhs == rhs
        assert lhs == from_lists(naive_power(to_lists(F), t))


@given(matrices(min_d=2, max_d=5))
def test_expansion_holds_past_threshold(F):
    lam = max_cycle_mean(F)
    assume(lam is not NEG_INF)
    cycle = find_critical_cycle(F, lam)
    t0 = wielandt_threshold(F.rows)
    for t in range(t0, t0 + 2 * cycle.length):
        lhs, rhs = csr_expansion_residual(F, t, cycle)
        assert lhs == rhs


@given(matrices(min_d=2, max_d=4, rational=True))
def test_expansion_with_rational_entries(F):
    lam = max_cycle_mean(F)
    assume(lam is not NEG_INF)
    t = wielandt_threshold(F.rows) + 1
    lhs, rhs = csr_expansion_residual(F, t)
    assert lhs == rhs == mat_pow(F, t)
