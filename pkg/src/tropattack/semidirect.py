"""Adjoint product and the semidirect product of matrix pairs."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DimensionError, InputError
from .matrix import TropMatrix, mat_add, mat_mul, mat_pow


@dataclass(frozen=True)
class MatrixPair:
    first: TropMatrix
    second: TropMatrix

    def __post_init__(self):
        if not (self.first.is_square() and self.second.is_square()):
            raise DimensionError("pair entries must be square")
        if self.first.shape != self.second.shape:
            raise DimensionError(f"pair shapes differ: {self.first.shape} vs {self.second.shape}")

    def __iter__(self):
        yield self.first
        yield self.second

    def __mul__(self, other):
        return semidirect_product(self, other)


class PowerMode(enum.Enum):
    INDUCTIVE = "inductive"
    CLOSED_FORM = "closed-form"


def _same_square(*mats: TropMatrix) -> None:
    shape = mats[0].shape
    if shape[0] != shape[1] or any(m.shape != shape for m in mats):
        raise DimensionError("operands must be square matrices of one size")


def adjoint_product(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    """``A ∘ B = A ⊕ B ⊕ A ⊗ B``."""
    _same_square(A, B)
    return mat_add(mat_add(A, B), mat_mul(A, B))


def adjoint_power(A: TropMatrix, n: int) -> TropMatrix:
    """``A ∘ ... ∘ A`` (n factors), i.e. ``A ⊕ A^2 ⊕ ... ⊕ A^n``.

    Uses square-and-multiply on ∘, which is valid because ∘ is associative.
    """
    if n < 1:
        raise InputError("adjoint power needs n >= 1")
    result = None
    base = A
    while n:
        if n & 1:
            result = base if result is None else adjoint_product(result, base)
        n >>= 1
        if n:
            base = adjoint_product(base, base)
    return result


def semidirect_product(p: MatrixPair, q: MatrixPair) -> MatrixPair:
    """``(M, G)(A, H) = (M ⊕ A ⊕ H ⊕ M ⊗ H, G ∘ H)``."""
    M, G = p
    A, H = q
    _same_square(M, G, A, H)
    first = mat_add(mat_add(mat_add(M, A), H), mat_mul(M, H))
    return MatrixPair(first, adjoint_product(G, H))


def message_from_pair(M: TropMatrix, H: TropMatrix, k: int) -> TropMatrix:
    """First component of ``(M, H)^k`` via ``(M ⊗ (I ⊕ H) ⊕ H) ⊗ (I ⊕ H)^(k-2)``."""
    if k < 1:
        raise InputError("semidirect power needs k >= 1")
    _same_square(M, H)
    if k == 1:
        return M
    F = mat_add(TropMatrix.identity(H.rows), H)
    V = mat_add(mat_mul(M, F), H)
    return V if k == 2 else mat_mul(V, mat_pow(F, k - 2))


def semidirect_power(p: MatrixPair, k: int, mode: PowerMode = PowerMode.CLOSED_FORM) -> MatrixPair:
    if k < 1:
        raise InputError("semidirect power needs k >= 1")
    if k == 1:
        return p
    if mode is PowerMode.CLOSED_FORM:
        M, H = p
        return MatrixPair(message_from_pair(M, H, k), adjoint_power(H, k))
    result = None
    base = p
    while k:
        if k & 1:
            result = base if result is None else semidirect_product(result, base)
        k >>= 1
        if k:
            base = semidirect_product(base, base)
    return result
