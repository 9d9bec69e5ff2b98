import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import same_size
from tropattack import (
    DimensionError,
    InputError,
    MatrixPair,
    PowerMode,
    ProtocolInstance,
    TropMatrix,
    derive_shared_key_from_exponent,
    kleene_star,
    max_cycle_mean,
    order_implications_check,
    run_protocol,
    semidirect_power,
)
from tropattack import golden as g
from tropattack.protocol import key_long_form
from tropattack.scalar import NEG_INF


def test_kleene_case_transcript():
    c = g.KLEENE_CASE
    tr = run_protocol(ProtocolInstance(c.M, c.H, c.m, c.n))
    assert tr.A == tr.B == tr.K_a == tr.K_b == c.K


def test_disclog_case_transcript():
    c = g.DISCLOG_CASE
    tr = run_protocol(ProtocolInstance(c.M, c.H, c.m, c.n))
    assert tr.A == c.A and tr.B == c.B and tr.key == c.K
    assert tr.K_a[0, 0] == 241
    assert tr.B == tr.A.shift(6)


def test_key_from_one_exponent():
    c = g.DISCLOG_CASE
    # n > m, so the key needs Alice's exponent
    assert derive_shared_key_from_exponent(c.A, c.B, c.H, m=15) == c.K
    assert derive_shared_key_from_exponent(c.A, c.B, c.H, m=15, n=16) == c.K
    with pytest.raises(InputError):
        derive_shared_key_from_exponent(c.A, c.B, c.H, n=16)
    with pytest.raises(InputError):
        derive_shared_key_from_exponent(c.A, c.B, c.H)


def test_instance_validation():
    A = TropMatrix([[1]])
    with pytest.raises(InputError):
        ProtocolInstance(A, A, 0, 3)
    with pytest.raises(DimensionError):
        ProtocolInstance(A, TropMatrix([[1, 2], [3, 4]]), 1, 1)


def test_exponent_one_sends_m():
    c = g.DISCLOG_CASE
    tr = run_protocol(ProtocolInstance(c.M, c.H, 1, 4))
    assert tr.A == c.M
    assert derive_shared_key_from_exponent(tr.A, tr.B, c.H, m=1) == tr.K_a


exps = st.integers(1, 12)


@given(same_size(2, max_d=4), exps, exps)
def test_keys_agree_and_formulas_hold(pair, m, n):
    M, H = pair
    tr = run_protocol(ProtocolInstance(M, H, m, n))
    assert tr.K_a == tr.K_b
    assert tr.A == semidirect_power(MatrixPair(M, H), m, PowerMode.INDUCTIVE).first
    assert tr.K_a == semidirect_power(MatrixPair(M, H), m + n).first
    assert derive_shared_key_from_exponent(tr.A, tr.B, H, m, n) == tr.K_a
    assert key_long_form(tr.A, tr.B, H, m) == tr.K_a
    assert order_implications_check(tr.A, tr.B, m, n)
    if m == n:
        assert tr.A == tr.B


@given(same_size(2, max_d=4), st.data())
def test_easy_case_key_is_sum_of_messages(pair, data):
    M, H = pair
    d = H.rows
    lam = max_cycle_mean(H)
    if lam is not NEG_INF and lam > 0:
        return
    m = data.draw(st.integers(d + 1, d + 6))
    n = data.draw(st.integers(d + 1, d + 6))
    tr = run_protocol(ProtocolInstance(M, H, m, n))
    star = (M | H) @ kleene_star(H)
    assert tr.K_a == tr.A | tr.B == star
