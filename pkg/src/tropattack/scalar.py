"""Max-plus scalars: exact rationals plus the absorbing element ``NEG_INF``."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Union

from .errors import InputError


@total_ordering
class _NegInf:
    """The tropical zero. Compares below every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __str__(self):
        return "-inf"

    def __eq__(self, other):
        return other is self or (isinstance(other, float) and other == float("-inf"))

    def __lt__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(float("-inf"))

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()

TropScalar = Union[Fraction, _NegInf]


def is_neg_inf(x) -> bool:
    return x is NEG_INF


def as_scalar(x) -> TropScalar:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``-inf`` spellings."""
    if x is NEG_INF or x is None:
        return NEG_INF
    if isinstance(x, bool):
        raise InputError(f"not a tropical scalar: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x == float("-inf"):
            return NEG_INF
        if x != x or x in (float("inf"),):
            raise InputError(f"not a tropical scalar: {x!r}")
        if not x.is_integer():
            raise InputError(f"non-integral float {x!r} is ambiguous; pass a Fraction or 'p/q'")
        return Fraction(int(x))
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("-inf", "-infinity", "-∞", "neginf"):
            return NEG_INF
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a tropical scalar: {x!r}") from None
    try:
        import numbers

        if isinstance(x, numbers.Integral):
            return Fraction(int(x))
    except TypeError:
        pass
    raise InputError(f"not a tropical scalar: {x!r}")


def oplus(a, b) -> TropScalar:
    a, b = as_scalar(a), as_scalar(b)
    if a is NEG_INF:
        return b
    if b is NEG_INF:
        return a
    return max(a, b)


def otimes(a, b) -> TropScalar:
    a, b = as_scalar(a), as_scalar(b)
    if a is NEG_INF or b is NEG_INF:
        return NEG_INF
    return a + b


def scalar_power(a, k) -> TropScalar:
    """``a`` to the tropical power ``k`` (ordinary multiplication by ``k``)."""
    a = as_scalar(a)
    k = Fraction(k)
    if a is NEG_INF:
        if k > 0:
            return NEG_INF
        if k == 0:
            return Fraction(0)
        raise InputError("NEG_INF has no negative powers")
    return a * k


def inverse(a) -> Fraction:
    a = as_scalar(a)
    if a is NEG_INF:
        raise InputError("NEG_INF is not invertible")
    return -a


def format_scalar(a) -> str:
    a = as_scalar(a)
    if a is NEG_INF:
        return "-inf"
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
