"""Tropical discrete logarithm: recover ``t`` from ``A = V ⊗ F^t``.

Small exponents (up to ``(d-1)^2``) are caught directly. Beyond that the
columns of ``A`` indexed by a critical cycle ``Z`` satisfy

    A[:, i] = t*λ + (V ⊗ C S^(t mod l))[:, i]      for every i in Z,

so for each residue ``k`` we look for a constant offset ``μ`` between the two
sides and read off ``t = μ / λ``.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .csr import CsrTriple, apply_s_power, build_csr_from_cycle, wielandt_threshold
from .errors import DimensionError, NotFoundError, PeriodicAmbiguityError, SpectrumError
from .matrix import NEG, TropMatrix, _common, geq, mat_mul, mat_pow
from .scalar import NEG_INF, TropScalar
from .spectral import find_critical_cycle, is_irreducible, max_cycle_mean

log = logging.getLogger(__name__)


class DisclogBranch(enum.Enum):
    DIRECT_CATCH = "direct-catch"
    CSR_PERIODIC = "csr-periodic"


@dataclass(frozen=True)
class DisclogInstance:
    A: TropMatrix
    V: TropMatrix
    F: TropMatrix

    def __post_init__(self):
        if not self.F.is_square():
            raise DimensionError(f"F must be square, got {self.F.shape}")
        if self.V.cols != self.F.rows:
            raise DimensionError(f"V {self.V.shape} does not match F {self.F.shape}")
        if self.A.shape != self.V.shape:
            raise DimensionError(f"A {self.A.shape} and V {self.V.shape} differ in shape")


@dataclass(frozen=True)
class DisclogResult:
    t: int
    branch: DisclogBranch
    mu: TropScalar | None = None
    verified: bool = False


def _catch_linear(inst: DisclogInstance, limit: int) -> int | None:
    """Smallest ``t <= limit`` with ``V ⊗ F^t = A``.

    A single row is advanced one ⊗F per step (O(d^2) each); only exponents
    where that row matches are confirmed with the full product.
    """
    A, V, F = inst.A, inst.V, inst.F
    r = int(np.argmax(V.finite_mask().sum(axis=1)))
    row_a = A.submatrix(rows=[r])
    x = V.submatrix(rows=[r])
    full = V
    full_t = 0
    for t in range(limit + 1):
        if t:
            x = mat_mul(x, F)
        if x != row_a:
            continue
        full = mat_mul(full, mat_pow(F, t - full_t))
        full_t = t
        if full == A:
            return t
    return None


def _catch_monotone(inst: DisclogInstance, limit: int) -> int | None:
    """Binary search over the nondecreasing sequence ``V ⊗ F^t`` (needs F >= I)."""
    A, V, F = inst.A, inst.V, inst.F
    if geq(V, A):
        return 0 if V == A else None
    steps = [F]
    while (1 << len(steps)) <= limit:
        steps.append(mat_mul(steps[-1], steps[-1]))
    cur, X = 0, V
    # invariant: V ⊗ F^cur is not >= A
    for i in reversed(range(len(steps))):
        if cur + (1 << i) > limit:
            continue
        Y = mat_mul(X, steps[i])
        if not geq(Y, A):
            cur, X = cur + (1 << i), Y
    if cur + 1 > limit:
        return None
    Y = mat_mul(X, F)
    return cur + 1 if Y == A else None


def _column_offset(a: np.ndarray, w: np.ndarray):
    """The constant ``μ`` with ``a = μ + w`` entrywise, or None.

    ``-inf`` entries must coincide. Returns ``False`` when the columns are
    both entirely ``-inf`` (no information about ``μ``).
    """
    fa, fw = a != NEG, w != NEG
    if not np.array_equal(fa, fw):
        return None
    if not fa.any():
        return False
    diff = a[fa] - w[fw]
    if (diff != diff[0]).any():
        return None
    return int(diff[0])


def _periodic_search(inst: DisclogInstance, csr: CsrTriple, light: bool) -> tuple[int, Fraction] | None:
    A, V = inst.A, inst.V
    lam = csr.lambda_
    nodes = csr.cycle.nodes
    l = len(nodes)
    cols = nodes[:1] if light else nodes
    floor = wielandt_threshold(inst.F.rows)
    vc = mat_mul(V, csr.C)
    for k in range(l):
        W = apply_s_power(csr, vc, k)
        a, w, den = _common(A, W)
        mu = None
        ok = True
        for i in cols:
            off = _column_offset(a[:, i], w[:, i])
            if off is None:
                ok = False
                break
            if off is False:
                continue
            if mu is None:
                mu = off
            elif mu != off:
                ok = False
                break
        if not ok or mu is None:
            continue
        mu_q = Fraction(mu, den)
        t = mu_q / lam
        if t.denominator != 1:
            continue
        t = int(t)
        if t < floor or t % l != k:
            log.debug("offset %s at k=%d gives inconsistent t=%s", mu_q, k, t)
            continue
        return t, mu_q
    return None


def solve_disclog(
    inst: DisclogInstance,
    *,
    light: bool = False,
    monotone_accel: bool = False,
    full_verify: bool = True,
    catch_small: bool = True,
    csr: CsrTriple | None = None,
) -> DisclogResult:
    """Find ``t`` with ``inst.A = inst.V ⊗ inst.F^t``.

    ``light`` checks a single cycle column in the periodic search.
    ``monotone_accel`` replaces the small-exponent scan by a binary search;
    it is only used when ``F >= I``. ``catch_small=False`` skips that scan
    entirely (exponents up to ``(d-1)^2`` are then never reported).
    A precomputed ``csr`` for ``F`` may be passed to skip step 0.
    """
    F = inst.F
    lam = max_cycle_mean(F) if csr is None else csr.lambda_
    if lam is NEG_INF:
        raise SpectrumError("λ(F) = -inf: the powers of F vanish")
    if lam == 0:
        raise PeriodicAmbiguityError("λ(F) = 0: the power sequence is ultimately periodic")
    if csr is None:
        csr = build_csr_from_cycle(F, find_critical_cycle(F, lam), lam)

    limit = (F.rows - 1) ** 2
    if catch_small:
        if monotone_accel and geq(F, TropMatrix.identity(F.rows)):
            t = _catch_monotone(inst, limit)
        else:
            if monotone_accel:
                log.info("F is not >= I; falling back to the linear scan")
            t = _catch_linear(inst, limit)
        if t is not None:
            return DisclogResult(t, DisclogBranch.DIRECT_CATCH, None, True)

    found = _periodic_search(inst, csr, light)
    if found is None:
        raise NotFoundError("no exponent matches A = V ⊗ F^t")
    t, mu = found
    verified = False
    if full_verify:
        verified = mat_mul(inst.V, mat_pow(F, t)) == inst.A
        if not verified:
            log.warning("periodic search returned t=%d but V ⊗ F^t != A", t)
    return DisclogResult(t, DisclogBranch.CSR_PERIODIC, mu, verified)


def disclog_well_defined(V: TropMatrix, F: TropMatrix) -> bool | None:
    """Whether ``t -> V ⊗ F^t`` is injective, when that can be decided.

    True if V is finite, F irreducible and λ(F) != 0; False if V is finite,
    F irreducible and λ(F) = 0; None (undecided) otherwise.
    """
    if not bool(V.finite_mask().all()) or not is_irreducible(F):
        return None
    return max_cycle_mean(F) != 0


__all__ = [
    "DisclogBranch",
    "DisclogInstance",
    "DisclogResult",
    "disclog_well_defined",
    "solve_disclog",
]
