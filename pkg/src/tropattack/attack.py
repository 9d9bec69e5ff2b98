"""Eavesdropper key recovery from the public data ``(M, H, A, B)``."""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field

from .csr import build_csr_from_cycle
from .disclog import DisclogInstance, solve_disclog
from .errors import AttackFailure, NotFoundError, SpectrumError, TropError
from .matrix import Order, TropMatrix, mat_add, mat_mul, mat_partial_order
from .protocol import derive_shared_key_from_exponent, key_long_form
from .scalar import NEG_INF, TropScalar, format_scalar
from .spectral import find_critical_cycle, kleene_star, max_cycle_mean

log = logging.getLogger(__name__)


class AttackBranch(enum.Enum):
    EASY_KLEENE = "easy-kleene"
    TRIVIAL_MESSAGE = "trivial-message"
    SMALL_POWER = "small-power"
    DISCLOG = "disclog"


@dataclass(frozen=True)
class AttackResult:
    key: TropMatrix
    branch: AttackBranch
    m_recovered: int | None = None
    n_recovered: int | None = None
    elapsed: float = 0.0
    lambda_H: TropScalar = field(default=NEG_INF, compare=False)


def easy_case_key(M: TropMatrix, H: TropMatrix) -> TropMatrix:
    """``(M ⊕ H) ⊗ H*``, the stable message when ``λ(H) <= 0``."""
    lam = max_cycle_mean(H)
    if lam is not NEG_INF and lam > 0:
        raise SpectrumError(f"λ(H) = {format_scalar(lam)} > 0: H* does not exist")
    return mat_mul(mat_add(M, H), kleene_star(H))


def _needed(rel: Order) -> tuple[str, ...]:
    # which exponent the key formulas need, given how A compares to B
    if rel is Order.GT:
        return ("n",)
    if rel is Order.LT:
        return ("m",)
    if rel is Order.EQ:
        return ("n",)
    return ("m", "n")


def recover_key(
    M: TropMatrix,
    H: TropMatrix,
    A: TropMatrix,
    B: TropMatrix,
    *,
    light: bool = False,
    recover_both: bool = False,
) -> AttackResult:
    """Recover the shared key of a genuine transcript.

    Only the exponent required by the key formula is recovered unless
    ``recover_both`` is set; with both exponents the key is cross-checked
    against the long form ``A ⊕ B ⊕ H^∘m ⊕ B ⊗ H^∘m``.
    """
    start = time.perf_counter()
    d = H.rows
    lam = max_cycle_mean(H)
    F = mat_add(TropMatrix.identity(d), H)
    V = mat_add(mat_mul(M, F), H)
    rel = mat_partial_order(A, B)
    wanted = ("m", "n") if recover_both else _needed(rel)
    messages = {"m": A, "n": B}
    positive = lam is not NEG_INF and lam > 0

    def done(key, branch, exps):
        return AttackResult(
            key, branch, exps.get("m"), exps.get("n"), time.perf_counter() - start, lam
        )

    if not positive:
        star_key = easy_case_key(M, H)
        if A == star_key or B == star_key:
            return done(star_key, AttackBranch.EASY_KLEENE, {})
        powers = [V]
        for _ in range(d - 2):
            powers.append(mat_mul(powers[-1], F))

        def exponent(X):
            if X == M:
                return 1
            for l, P in enumerate(powers):
                if X == P:
                    return l + 2
            return None
    else:
        lam_f = max_cycle_mean(F)
        assert lam_f == lam, "λ(I ⊕ H) must equal λ(H) > 0"
        csr = build_csr_from_cycle(F, find_critical_cycle(F, lam_f), lam_f)

        def exponent(X):
            if X == M:
                return 1
            try:
                res = solve_disclog(
                    DisclogInstance(X, V, F),
                    light=light,
                    monotone_accel=True,
                    full_verify=False,
                    csr=csr,
                )
            except NotFoundError:
                return None
            return res.t + 2

    exps: dict[str, int] = {}
    for who in wanted:
        e = exponent(messages[who])
        if e is None:
            raise AttackFailure(
                f"could not recover exponent {who}",
                diagnostics={
                    "lambda_H": format_scalar(lam),
                    "order": rel.name,
                    "missing": who,
                    "recovered": dict(exps),
                    "d": d,
                },
            )
        exps[who] = e

    trivial = any(e == 1 for e in exps.values())
    if trivial:
        branch = AttackBranch.TRIVIAL_MESSAGE
    else:
        branch = AttackBranch.DISCLOG if positive else AttackBranch.SMALL_POWER

    try:
        key = derive_shared_key_from_exponent(A, B, H, exps.get("m"), exps.get("n"))
    except TropError as exc:
        raise AttackFailure(str(exc), diagnostics={"recovered": dict(exps)}) from exc
    if "m" in exps and "n" in exps:
        check = key_long_form(A, B, H, exps["m"])
        if check != key:
            raise AttackFailure(
                "key formula disagrees with the long form",
                diagnostics={"recovered": dict(exps), "order": rel.name},
            )
    log.debug("recovered %s via %s", exps, branch.value)
    return done(key, branch, exps)


__all__ = ["AttackBranch", "AttackResult", "easy_case_key", "recover_key"]
