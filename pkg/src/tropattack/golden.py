"""Two small worked instances with known outputs, used by ``selftest``.

``KLEENE_CASE`` has ``λ(H) = 0``, so every message has already stabilised
at ``(M ⊕ H) ⊗ H*``. ``DISCLOG_CASE`` has ``λ(H) = 6`` and needs the
discrete logarithm.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrix import TropMatrix

_ = None  # placeholder for -inf in the tables below


def _m(rows) -> TropMatrix:
    return TropMatrix([["-inf" if x is None else x for x in r] for r in rows])


@dataclass(frozen=True)
class WorkedCase:
    M: TropMatrix
    H: TropMatrix
    m: int
    n: int
    A: TropMatrix
    B: TropMatrix
    K: TropMatrix


KLEENE_CASE = WorkedCase(
    M=_m([[8, 7, 2], [10, 3, 6], [-10, -1, 3]]),
    H=_m([[0, -3, -5], [-1, -2, 2], [1, -3, -4]]),
    m=5,
    n=8,
    A=_m([[10, 7, 9], [10, 7, 9], [4, 1, 3]]),
    B=_m([[10, 7, 9], [10, 7, 9], [4, 1, 3]]),
    K=_m([[10, 7, 9], [10, 7, 9], [4, 1, 3]]),
)

# M[1][2] (0-based) must be 95; a value of 9 does not reproduce A or B
DISCLOG_CASE = WorkedCase(
    M=_m([[-75, -45, -69, 60], [83, 52, 95, -72], [27, 92, 92, -16], [87, 93, -3, 84]]),
    H=_m([[1, 7, 2, 5], [-1, -2, 2, 4], [3, 4, 2, 2], [-5, -10, 10, 0]]),
    m=15,
    n=16,
    A=_m([[145, 146, 148, 144], [176, 177, 179, 175], [175, 176, 178, 174], [176, 177, 179, 175]]),
    B=_m([[151, 152, 154, 150], [182, 183, 185, 181], [181, 182, 184, 180], [182, 183, 185, 181]]),
    K=_m([[241, 242, 244, 240], [272, 273, 275, 271], [271, 272, 274, 270], [272, 273, 275, 271]]),
)

# intermediate data for DISCLOG_CASE
DISCLOG_LAMBDA = 6
DISCLOG_F = _m([[1, 7, 2, 5], [-1, 0, 2, 4], [3, 4, 2, 2], [-5, -10, 10, 0]])
DISCLOG_V = _m([[55, 50, 70, 60], [98, 99, 97, 97], [95, 96, 94, 96], [92, 94, 95, 97]])
DISCLOG_CYCLE = (0, 1, 3, 2)  # 1-based (1 2 4 3)
DISCLOG_MU = 78
DISCLOG_S = _m([[_, 1, _, _], [_, _, _, -2], [-3, _, _, _], [_, _, 4, _]])
# C S^k R, the same for every k
DISCLOG_CSR_CONSTANT = _m([[0, 1, 3, -1], [-1, 0, 2, -2], [-3, -2, 0, -4], [1, 2, 4, 0]])
