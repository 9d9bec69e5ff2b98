"""Key exchange built on semidirect powers of a public matrix pair.

Alice and Bob share public ``(M, H)``. Alice sends ``A``, the first
component of ``(M, H)^m``; Bob sends ``B`` from ``(M, H)^n``. Each side then
forms the first component of ``(M, H)^(m+n)`` from the other's message.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionError, InputError, ProtocolInvariantError
from .matrix import Order, TropMatrix, mat_add, mat_mul, mat_partial_order, mat_pow
from .semidirect import adjoint_power, message_from_pair


@dataclass(frozen=True)
class ProtocolInstance:
    M: TropMatrix
    H: TropMatrix
    m: int
    n: int

    def __post_init__(self):
        if not self.M.is_square() or self.M.shape != self.H.shape:
            raise DimensionError("M and H must be square matrices of one size")
        if self.m < 1 or self.n < 1:
            raise InputError("secret exponents must be positive")


@dataclass(frozen=True)
class Transcript:
    A: TropMatrix
    B: TropMatrix
    K_a: TropMatrix
    K_b: TropMatrix

    @property
    def key(self) -> TropMatrix:
        return self.K_a


def run_protocol(inst: ProtocolInstance) -> Transcript:
    M, H, m, n = inst.M, inst.H, inst.m, inst.n
    A = message_from_pair(M, H, m)
    B = message_from_pair(M, H, n)
    Hm = adjoint_power(H, m)
    Hn = adjoint_power(H, n)
    K_a = mat_add(mat_add(mat_add(A, B), Hm), mat_mul(B, Hm))
    K_b = mat_add(mat_add(mat_add(A, B), Hn), mat_mul(A, Hn))
    if K_a != K_b:
        raise ProtocolInvariantError("Alice's and Bob's keys differ")
    return Transcript(A, B, K_a, K_b)


def key_long_form(A: TropMatrix, B: TropMatrix, H: TropMatrix, m: int) -> TropMatrix:
    """``A ⊕ B ⊕ H^∘m ⊕ B ⊗ H^∘m`` (what Alice computes knowing ``m``)."""
    Hm = adjoint_power(H, m)
    return mat_add(mat_add(mat_add(A, B), Hm), mat_mul(B, Hm))


def derive_shared_key_from_exponent(
    A: TropMatrix,
    B: TropMatrix,
    H: TropMatrix,
    m: int | None = None,
    n: int | None = None,
) -> TropMatrix:
    """Shared key from the two messages and one secret exponent.

    With ``F = I ⊕ H``: ``A ⊗ F^n`` if ``m > n``, ``B ⊗ F^m`` if ``n > m`` and
    ``A ⊗ F^n ⊕ H ⊗ F^(n-1)`` if ``m = n``. When only one exponent is given,
    the comparison of ``A`` and ``B`` decides the case (``A > B`` forces
    ``m > n`` and so on); ``A = B`` is treated as ``m = n``.
    """
    if m is None and n is None:
        raise InputError("at least one secret exponent is required")
    F = mat_add(TropMatrix.identity(H.rows), H)
    if m is not None and n is not None:
        case = "m>n" if m > n else "n>m" if n > m else "m=n"
    else:
        rel = mat_partial_order(A, B)
        if rel is Order.GT:
            case = "m>n"
        elif rel is Order.LT:
            case = "n>m"
        elif rel is Order.EQ:
            case = "m=n"
            if n is None:
                n = m
        else:
            raise InputError("messages are incomparable; both exponents are needed")
    if case == "m>n":
        if n is None:
            raise InputError("m > n: the key needs Bob's exponent n")
        return mat_mul(A, mat_pow(F, n))
    if case == "n>m":
        if m is None:
            raise InputError("n > m: the key needs Alice's exponent m")
        return mat_mul(B, mat_pow(F, m))
    return mat_add(mat_mul(A, mat_pow(F, n)), mat_mul(H, mat_pow(F, n - 1)))


def order_implications_check(A: TropMatrix, B: TropMatrix, m: int, n: int) -> bool:
    """Check that message order and exponent order agree.

    ``m > n`` implies ``A >= B`` (and symmetrically), while ``A > B``
    implies ``m > n`` (and symmetrically).
    """
    rel = mat_partial_order(A, B)
    ok = True
    if m > n:
        ok &= rel in (Order.GT, Order.EQ)
    if n > m:
        ok &= rel in (Order.LT, Order.EQ)
    if rel is Order.GT:
        ok &= m > n
    if rel is Order.LT:
        ok &= n > m
    return bool(ok)
