from fractions import Fraction

import pytest
from hypothesis import assume, given

from oracles import brute_critical_arcs, brute_lambda, from_lists, series_plus, to_lists
from strategies import matrices
from tropattack import (
    NEG_INF,
    CriticalCycle,
    InputError,
    SpectrumError,
    TropMatrix,
    critical_arcs,
    critical_components,
    find_critical_cycle,
    is_critical_cycle,
    kleene_star,
    max_cycle_mean,
    metric_matrix,
)
from tropattack.spectral import is_irreducible, spectral_summary, strongly_connected_components

N = "-inf"

# values below were produced by exhaustive cycle enumeration (tests/oracles.py)
TWO_LOOPS = TropMatrix([[N, 3, N, 1], [0, N, 2, N], [N, N, N, 5], [-2, N, 1, N]])
NEGATIVE = TropMatrix([[-1, -3, N], [2, N, -4], [N, 0, -2]])


def test_frozen_cycle_means():
    assert max_cycle_mean(TWO_LOOPS) == 3
    assert critical_arcs(TWO_LOOPS) == {(2, 3), (3, 2)}
    assert max_cycle_mean(TropMatrix([[N, "1/2", N], [N, N, 1], [-1, N, N]])) == Fraction(1, 6)
    assert max_cycle_mean(NEGATIVE) == Fraction(-1, 2)


def test_frozen_metric_matrix():
    assert metric_matrix(NEGATIVE) == TropMatrix([[-1, -3, -7], [2, -1, -4], [2, 0, -2]])
    assert kleene_star(NEGATIVE) == TropMatrix([[0, -3, -7], [2, 0, -4], [2, 0, 0]])


def test_acyclic_and_errors():
    A = TropMatrix([[N, 1], [N, N]])
    assert max_cycle_mean(A) is NEG_INF
    with pytest.raises(SpectrumError):
        find_critical_cycle(A)
    with pytest.raises(SpectrumError):
        metric_matrix(TropMatrix([[1]]))


def test_scc_and_irreducibility():
    assert strongly_connected_components(TWO_LOOPS) == [[0, 1, 2, 3]]
    assert is_irreducible(TWO_LOOPS)
    assert not is_irreducible(TropMatrix([[0, 1], [N, 0]]))


def test_critical_cycle_search_is_deterministic():
    c = find_critical_cycle(TWO_LOOPS)
    assert c == CriticalCycle((2, 3))
    assert str(c) == "(3 4)"
    assert is_critical_cycle(TWO_LOOPS, c)
    assert not is_critical_cycle(TWO_LOOPS, (0, 1))
    assert not is_critical_cycle(TWO_LOOPS, (0, 2))


def test_cycle_validation():
    with pytest.raises(InputError):
        CriticalCycle(())
    with pytest.raises(InputError):
        CriticalCycle((1, 2, 1))


def test_critical_components_split():
    # two disjoint zero loops joined by weaker arcs
    F = TropMatrix([[N, 0, -1, N], [0, N, N, N], [N, N, N, 0], [-5, N, 0, N]])
    assert critical_components(F) == [frozenset({0, 1}), frozenset({2, 3})]
    s = spectral_summary(F)
    assert s.lambda_ == 0 and s.is_irreducible


@given(matrices(max_d=5))
def test_cycle_mean_matches_enumeration(A):
    lam = brute_lambda(to_lists(A))
    got = max_cycle_mean(A)
    if lam is None:
        assert got is NEG_INF
    else:
        assert got == lam
        assert critical_arcs(A) == brute_critical_arcs(to_lists(A))
        c = find_critical_cycle(A)
        assert is_critical_cycle(A, c)


@given(matrices(max_d=5, rational=True))
def test_metric_matrix_matches_series(A):
    lam = max_cycle_mean(A)
    if lam is not NEG_INF and lam > 0:
        with pytest.raises(SpectrumError):
            metric_matrix(A)
        return
    assert metric_matrix(A) == from_lists(series_plus(to_lists(A)))


@given(matrices(max_d=5, finite=True))
def test_similarity_preserves_spectrum(A):
    assume(A.rows > 1)
    d = A.rows
    scale = TropMatrix([[k if i == j else N for j in range(d)] for i, k in enumerate(range(-d, d, 2))])
    inv = TropMatrix([[-k if i == j else N for j in range(d)] for i, k in enumerate(range(-d, d, 2))])
    B = inv @ A @ scale
    assert max_cycle_mean(B) == max_cycle_mean(A)
    assert critical_arcs(B) == critical_arcs(A)
