"""Cycle-based CSR terms for large tropical matrix powers.

For a critical cycle ``Z`` of ``F`` with ``λ = λ(F)``, put
``U = ((λ^- ⊗ F)^l)^+`` with ``l = len(Z)``. ``C`` keeps the columns of ``U``
indexed by ``Z``, ``R`` keeps its rows indexed by ``Z`` and ``S`` keeps the
arcs of ``Z`` in ``λ^- ⊗ F``. Past the Wielandt threshold ``(d-1)^2 + 1``::

    F^t = λ^t ⊗ C S^(t mod l) R  ⊕  B^t

where ``B`` is ``F`` with the critical component of ``Z`` deleted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError, SpectrumError
from .matrix import LIMIT, NEG, TropMatrix, _scale, mat_add, mat_mul, mat_pow, scalar_mul
from .scalar import NEG_INF, TropScalar
from .spectral import (
    CriticalCycle,
    critical_component,
    find_critical_cycle,
    is_critical_cycle,
    max_cycle_mean,
    metric_matrix,
    normalize,
)


@dataclass(frozen=True)
class CsrTriple:
    C: TropMatrix
    S: TropMatrix
    R: TropMatrix
    lambda_: TropScalar
    cycle: CriticalCycle
    # normalised weight of arc cycle.nodes[k] -> cycle.nodes[k+1]
    weights: tuple[Fraction, ...]

    @property
    def period(self) -> int:
        return self.cycle.length


@dataclass(frozen=True)
class BMatrix:
    B: TropMatrix
    removed_nodes: frozenset


def build_csr_from_cycle(F: TropMatrix, cycle: CriticalCycle, lam: TropScalar | None = None) -> CsrTriple:
    if lam is None:
        lam = max_cycle_mean(F)
    if lam is NEG_INF:
        raise SpectrumError("CSR terms need a cycle: λ(F) is -inf")
    if not isinstance(cycle, CriticalCycle):
        cycle = CriticalCycle(tuple(cycle))
    if not is_critical_cycle(F, cycle, lam):
        raise InputError(f"cycle {cycle} is not critical for this matrix")
    d = F.rows
    G = normalize(F, lam)
    # metric_matrix raises SpectrumError if lam was not the true cycle mean
    Um = metric_matrix(mat_pow(G, cycle.length))
    U = Um.numerators
    on = np.zeros(d, dtype=bool)
    on[list(cycle.nodes)] = True
    C = U.copy()
    C[:, ~on] = NEG
    R = U.copy()
    R[~on, :] = NEG
    S = np.full((d, d), NEG, dtype=np.int64)
    weights = []
    for i, j in cycle.arcs():
        S[i, j] = G.numerators[i, j]
        weights.append(G[i, j])
    return CsrTriple(
        TropMatrix._raw(C, Um.denominator),
        TropMatrix._raw(S, G.denominator),
        TropMatrix._raw(R, Um.denominator),
        lam,
        cycle,
        tuple(weights),
    )


def apply_s_power(csr: CsrTriple, X: TropMatrix, r: int) -> TropMatrix:
    """``X ⊗ S^r`` as a column permutation plus per-column shifts.

    Only columns of ``X`` indexed by the cycle contribute; the result is
    ``-inf`` outside the cycle columns.
    """
    nodes = csr.cycle.nodes
    l = len(nodes)
    r %= l
    prefix = [Fraction(0)]
    for w in csr.weights + csr.weights:
        prefix.append(prefix[-1] + w)
    shifts = [prefix[k + r] - prefix[k] for k in range(l)]
    den = X.denominator
    for s in shifts:
        den = math.lcm(den, s.denominator)
    x = _scale(X.numerators, den // X.denominator)
    out = np.full(x.shape, NEG, dtype=np.int64)
    for k in range(l):
        col = x[:, nodes[k]]
        fin = col != NEG
        shift = shifts[k].numerator * (den // shifts[k].denominator)
        if abs(shift) > LIMIT:
            raise OverflowError("cycle weight exceeds the exact int64 range")
        out[:, nodes[(k + r) % l]] = np.where(fin, col + np.int64(shift), NEG)
    return TropMatrix._raw(out, den)


def s_power(csr: CsrTriple, r: int) -> TropMatrix:
    d = csr.S.rows
    return apply_s_power(csr, TropMatrix.identity(d), r)


def csr_term(csr: CsrTriple, t: int, include_R: bool = True) -> TropMatrix:
    """``C S^(t mod l) R`` (or ``C S^(t mod l)`` when ``include_R`` is false)."""
    if t < 0:
        raise InputError("negative CSR exponent")
    cs = apply_s_power(csr, csr.C, t % csr.period)
    return mat_mul(cs, csr.R) if include_R else cs


def b_matrix(F: TropMatrix, removed) -> BMatrix:
    """``F`` with every row and column in ``removed`` set to ``-inf``."""
    removed = frozenset(int(v) for v in removed)
    if any(v < 0 or v >= F.rows for v in removed):
        raise InputError(f"node index out of range for a {F.rows}-node matrix")
    num = F.numerators.copy()
    idx = list(removed)
    num[idx, :] = NEG
    num[:, idx] = NEG
    return BMatrix(TropMatrix._raw(num, F.denominator), removed)


def wielandt_threshold(d: int) -> int:
    return (d - 1) ** 2 + 1


def csr_expansion_residual(F: TropMatrix, t: int, cycle: CriticalCycle | None = None):
    """Both sides of the weak CSR expansion of ``F^t``: ``(F^t, λ^t C S R ⊕ B^t)``."""
    lam = max_cycle_mean(F)
    if lam is NEG_INF:
        raise SpectrumError("CSR expansion needs λ(F) > -inf")
    if t < wielandt_threshold(F.rows):
        raise InputError(f"t={t} is below the threshold {wielandt_threshold(F.rows)}")
    if cycle is None:
        cycle = find_critical_cycle(F, lam)
    csr = build_csr_from_cycle(F, cycle, lam)
    comp = critical_component(F, cycle, lam)
    lhs = mat_pow(F, t)
    periodic = scalar_mul(lam * t, csr_term(csr, t))
    rhs = mat_add(periodic, mat_pow(b_matrix(F, comp).B, t))
    return lhs, rhs
