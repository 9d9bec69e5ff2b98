"""Hypothesis strategies for tropical scalars and matrices."""

from fractions import Fraction

from hypothesis import strategies as st

from tropattack import TropMatrix

small_ints = st.integers(min_value=-20, max_value=20)
rationals = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 4))


def entries(neg_inf_prob=True, rational=False):
    base = rationals if rational else small_ints
    return st.one_of(st.none(), base) if neg_inf_prob else base


def _build(rows):
    return TropMatrix([["-inf" if x is None else x for x in r] for r in rows])


@st.composite
def matrices(draw, d=None, min_d=1, max_d=5, finite=False, rational=False):
    if d is None:
        d = draw(st.integers(min_d, max_d))
    el = entries(not finite, rational)
    rows = draw(st.lists(st.lists(el, min_size=d, max_size=d), min_size=d, max_size=d))
    return _build(rows)


@st.composite
def same_size(draw, count, min_d=1, max_d=4, finite=False, rational=False):
    d = draw(st.integers(min_d, max_d))
    return tuple(draw(matrices(d=d, finite=finite, rational=rational)) for _ in range(count))
