"""Dense max-plus matrices with exact rational entries.

A matrix is stored as an ``int64`` numerator array together with one
positive denominator shared by every entry, so ``A[i, j] == num[i, j] / den``.
``-inf`` is encoded by the sentinel ``NEG`` in the numerator array. The pair
is kept canonical (``gcd`` of the denominator and all finite numerators is 1),
which makes equality a plain array comparison.

Finite numerators are confined to ``[-LIMIT, LIMIT]``; any operation that
would leave that range raises ``OverflowError`` instead of wrapping.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, InputError
from .scalar import NEG_INF, as_scalar, format_scalar

NEG = np.int64(-(2**62))
LIMIT = 2**59
_CUT = -(2**61)
# bound on the temporary (rows x inner x cols) block built by mat_mul
_CHUNK_ELEMS = 1 << 21


def _check_range(num: np.ndarray) -> None:
    fin = num[num != NEG]
    if fin.size and (int(fin.max()) > LIMIT or int(fin.min()) < -LIMIT):
        raise OverflowError("max-plus entry magnitude exceeds the exact int64 range")


def _scale(num: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return num
    fin = num != NEG
    if fin.any():
        peak = int(np.abs(num[fin]).max())
        if peak * factor > LIMIT:
            raise OverflowError("common denominator too large for exact int64 arithmetic")
    out = num * np.int64(factor)
    out[~fin] = NEG
    return out


class TropMatrix:
    """Immutable rectangular matrix over the max-plus semiring.

    Construct from nested rows of ints, ``Fraction``s, ``"p/q"`` strings or
    any ``-inf`` spelling (``"-inf"``, ``None``, ``float('-inf')``,
    ``NEG_INF``)::

        >>> A = TropMatrix([[1, "-inf"], [0, 2]])
        >>> (A @ A)[0, 0]
        Fraction(2, 1)
    """

    __slots__ = ("_num", "_den")

    def __init__(self, rows):
        if isinstance(rows, TropMatrix):
            self._num, self._den = rows._num, rows._den
            return
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise DimensionError("a matrix needs at least one row and one column")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        vals = [[as_scalar(x) for x in r] for r in rows]
        den = 1
        for r in vals:
            for x in r:
                if x is not NEG_INF:
                    den = math.lcm(den, x.denominator)
        num = np.full((len(vals), ncols), NEG, dtype=np.int64)
        for i, r in enumerate(vals):
            for j, x in enumerate(r):
                if x is not NEG_INF:
                    v = x.numerator * (den // x.denominator)
                    if abs(v) > LIMIT:
                        raise OverflowError("entry magnitude exceeds the exact int64 range")
                    num[i, j] = v
        self._set(num, den)

    def _set(self, num: np.ndarray, den: int) -> None:
        if den != 1:
            fin = num != NEG
            g = int(np.gcd.reduce(num[fin])) if fin.any() else 0
            g = math.gcd(g, den)
            if g > 1:
                num = num // np.int64(g)
                num[~fin] = NEG
                den //= g
            elif not fin.any():
                den = 1
        num.setflags(write=False)
        self._num = num
        self._den = int(den)

    @classmethod
    def _raw(cls, num: np.ndarray, den: int = 1) -> "TropMatrix":
        obj = cls.__new__(cls)
        obj._set(np.ascontiguousarray(num, dtype=np.int64), den)
        return obj

    # constructors -----------------------------------------------------

    @classmethod
    def identity(cls, d: int) -> "TropMatrix":
        num = np.full((d, d), NEG, dtype=np.int64)
        np.fill_diagonal(num, 0)
        return cls._raw(num)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "TropMatrix":
        """The all-zeros matrix E."""
        return cls._raw(np.zeros((rows, rows if cols is None else cols), dtype=np.int64))

    @classmethod
    def neg_inf(cls, rows: int, cols: int | None = None) -> "TropMatrix":
        """The all ``-inf`` matrix (tropical zero)."""
        return cls._raw(np.full((rows, rows if cols is None else cols), NEG, dtype=np.int64))

    @classmethod
    def from_integers(cls, arr, neg_mask=None) -> "TropMatrix":
        """Build from an integer array; entries where ``neg_mask`` is true become ``-inf``."""
        num = np.array(arr, dtype=np.int64, copy=True)
        if num.ndim != 2 or 0 in num.shape:
            raise DimensionError("expected a non-empty 2-D array")
        _check_range(num if neg_mask is None else np.where(neg_mask, 0, num))
        if neg_mask is not None:
            num[np.asarray(neg_mask, dtype=bool)] = NEG
        return cls._raw(num)

    # accessors --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self._num.shape

    @property
    def rows(self) -> int:
        return self._num.shape[0]

    @property
    def cols(self) -> int:
        return self._num.shape[1]

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def numerators(self) -> np.ndarray:
        """Read-only numerator array (``NEG`` marks ``-inf``)."""
        return self._num

    def finite_mask(self) -> np.ndarray:
        return self._num != NEG

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        v = self._num[i, j]
        if np.ndim(v):
            raise TypeError("use submatrix() for slices")
        return NEG_INF if v == NEG else Fraction(int(v), self._den)

    def to_rows(self) -> list[list]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def submatrix(self, rows=None, cols=None) -> "TropMatrix":
        num = self._num
        if rows is not None:
            num = num[np.asarray(list(rows), dtype=int), :]
        if cols is not None:
            num = num[:, np.asarray(list(cols), dtype=int)]
        return TropMatrix._raw(num.copy(), self._den)

    @property
    def T(self) -> "TropMatrix":
        return TropMatrix._raw(self._num.T.copy(), self._den)

    def __eq__(self, other):
        if not isinstance(other, TropMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self._den == other._den
            and bool(np.array_equal(self._num, other._num))
        )

    def __hash__(self):
        return hash((self.shape, self._den, self._num.tobytes()))

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(x) for x in r) for r in self.to_rows())
        return f"TropMatrix([{body}])"

    def __str__(self):
        cells = [[format_scalar(x) for x in r] for r in self.to_rows()]
        w = max(len(c) for r in cells for c in r)
        return "\n".join(" ".join(c.rjust(w) for c in r) for r in cells)

    # operator sugar: | is tropical sum, @ is tropical product
    def __or__(self, other):
        return mat_add(self, other)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __pow__(self, t):
        return mat_pow(self, t)

    def shift(self, c) -> "TropMatrix":
        """``c`` ⊗ A: add the scalar ``c`` to every finite entry."""
        return scalar_mul(c, self)


def _common(a: TropMatrix, b: TropMatrix) -> tuple[np.ndarray, np.ndarray, int]:
    if a._den == b._den:
        return a._num, b._num, a._den
    den = math.lcm(a._den, b._den)
    return _scale(a._num, den // a._den), _scale(b._num, den // b._den), den


def mat_add(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    """Entrywise maximum."""
    if A.shape != B.shape:
        raise DimensionError(f"cannot add {A.shape} and {B.shape}")
    a, b, den = _common(A, B)
    return TropMatrix._raw(np.maximum(a, b), den)


def mat_sum(mats: Iterable[TropMatrix]) -> TropMatrix:
    it = iter(mats)
    acc = next(it)
    for m in it:
        acc = mat_add(acc, m)
    return acc


def _mm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, k = a.shape
    m = b.shape[1]
    bt = np.ascontiguousarray(b.T)
    step = max(1, _CHUNK_ELEMS // max(1, k * m))
    if step >= n:
        out = (a[:, None, :] + bt[None, :, :]).max(axis=2)
    else:
        out = np.empty((n, m), dtype=np.int64)
        for s in range(0, n, step):
            out[s : s + step] = (a[s : s + step, None, :] + bt[None, :, :]).max(axis=2)
    out[out < _CUT] = NEG
    _check_range(out)
    return out


def mat_mul(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    """``(A ⊗ B)[i, j] = max_k A[i, k] + B[k, j]``."""
    if A.cols != B.rows:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    a, b, den = _common(A, B)
    return TropMatrix._raw(_mm(a, b), den)


def mat_pow(A: TropMatrix, t: int) -> TropMatrix:
    """Tropical power by repeated squaring; ``A^0`` is the identity."""
    if not A.is_square():
        raise DimensionError(f"power of a non-square {A.shape} matrix")
    t = int(t)
    if t < 0:
        raise InputError("negative matrix power")
    result = None
    base = A
    while t:
        if t & 1:
            result = base if result is None else mat_mul(result, base)
        t >>= 1
        if t:
            base = mat_mul(base, base)
    return TropMatrix.identity(A.rows) if result is None else result


def scalar_mul(c, A: TropMatrix) -> TropMatrix:
    """``c ⊗ A``. ``-inf ⊗ A`` is the all ``-inf`` matrix."""
    c = as_scalar(c)
    if c is NEG_INF:
        return TropMatrix.neg_inf(*A.shape)
    den = math.lcm(A._den, c.denominator)
    num = _scale(A._num, den // A._den)
    shift = c.numerator * (den // c.denominator)
    if abs(shift) > LIMIT:
        raise OverflowError("scalar magnitude exceeds the exact int64 range")
    fin = num != NEG
    out = num.copy()
    out[fin] += np.int64(shift)
    _check_range(out)
    return TropMatrix._raw(out, den)


class Order(enum.Enum):
    EQ = "EQ"
    LT = "LT"
    GT = "GT"
    INCOMPARABLE = "INCOMPARABLE"
    # weak relations; never the strongest one, so mat_partial_order skips them
    LE = "LE"
    GE = "GE"


def mat_partial_order(A: TropMatrix, B: TropMatrix) -> Order:
    """Strongest entrywise relation between ``A`` and ``B``.

    Returns EQ, LT (A <= B, A != B), GT, or INCOMPARABLE. LE and GE are
    implied by EQ/LT and EQ/GT respectively; see ``leq``/``geq``.
    """
    if A.shape != B.shape:
        raise DimensionError(f"cannot compare {A.shape} and {B.shape}")
    a, b, _ = _common(A, B)
    le = bool((a <= b).all())
    ge = bool((a >= b).all())
    if le and ge:
        return Order.EQ
    if le:
        return Order.LT
    if ge:
        return Order.GT
    return Order.INCOMPARABLE


def leq(A: TropMatrix, B: TropMatrix) -> bool:
    return mat_partial_order(A, B) in (Order.EQ, Order.LT)


def geq(A: TropMatrix, B: TropMatrix) -> bool:
    return mat_partial_order(A, B) in (Order.EQ, Order.GT)


def diag(values: Sequence) -> TropMatrix:
    d = len(values)
    rows = [[values[i] if i == j else NEG_INF for j in range(d)] for i in range(d)]
    return TropMatrix(rows)
