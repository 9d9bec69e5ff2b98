"""Maximum cycle mean, critical graph, metric matrix and Kleene star."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DimensionError, InputError, SpectrumError
from .matrix import _CUT, NEG, TropMatrix, _check_range, _common, mat_add, scalar_mul
from .scalar import NEG_INF, TropScalar, inverse


@dataclass(frozen=True)
class CriticalCycle:
    """A cycle of the critical graph, as 0-based nodes in traversal order.

    The arcs are ``nodes[0] -> nodes[1] -> ... -> nodes[-1] -> nodes[0]``.
    """

    nodes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(v) for v in self.nodes))
        if not self.nodes:
            raise InputError("empty cycle")
        if len(set(self.nodes)) != len(self.nodes):
            raise InputError(f"cycle repeats a node: {self.one_based()}")

    @property
    def length(self) -> int:
        return len(self.nodes)

    def arcs(self) -> list[tuple[int, int]]:
        n = self.nodes
        return [(n[k], n[(k + 1) % len(n)]) for k in range(len(n))]

    def one_based(self) -> tuple[int, ...]:
        return tuple(v + 1 for v in self.nodes)

    def __str__(self):
        return "(" + " ".join(str(v) for v in self.one_based()) + ")"


@dataclass(frozen=True)
class SpectralSummary:
    lambda_: TropScalar
    critical_arcs: frozenset
    is_irreducible: bool


def _require_square(F: TropMatrix) -> None:
    if not F.is_square():
        raise DimensionError(f"expected a square matrix, got {F.shape}")


def strongly_connected_components(F: TropMatrix) -> list[list[int]]:
    """Node sets of the strongly connected components of the digraph of ``F``."""
    _require_square(F)
    n, labels = connected_components(
        csr_matrix(F.finite_mask()), directed=True, connection="strong"
    )
    comps: dict[int, list[int]] = {}
    for v, c in enumerate(labels):
        comps.setdefault(int(c), []).append(v)
    return sorted(comps.values())


def is_irreducible(F: TropMatrix) -> bool:
    _require_square(F)
    return len(strongly_connected_components(F)) == 1


def _karp(g: np.ndarray) -> Fraction | None:
    """Maximum cycle mean numerator of a strongly connected block (None if acyclic)."""
    n = g.shape[0]
    if n == 1:
        return None if g[0, 0] == NEG else Fraction(int(g[0, 0]))
    walks = np.full((n + 1, n), NEG, dtype=np.int64)
    walks[0, 0] = 0
    for k in range(1, n + 1):
        step = (walks[k - 1][:, None] + g).max(axis=0)
        step[step < _CUT] = NEG
        walks[k] = step
    best = None
    last = walks[n]
    for v in range(n):
        if last[v] == NEG:
            continue
        worst = None
        for k in range(n):
            if walks[k, v] == NEG:
                continue
            q = Fraction(int(last[v] - walks[k, v]), n - k)
            if worst is None or q < worst:
                worst = q
        if worst is not None and (best is None or worst > best):
            best = worst
    return best


def max_cycle_mean(F: TropMatrix) -> TropScalar:
    """Largest mean arc weight over all cycles, or ``NEG_INF`` if acyclic."""
    _require_square(F)
    num = F.numerators
    best = None
    for comp in strongly_connected_components(F):
        idx = np.asarray(comp)
        val = _karp(num[np.ix_(idx, idx)])
        if val is not None and (best is None or val > best):
            best = val
    if best is None:
        return NEG_INF
    return best / F.denominator


def metric_matrix(F: TropMatrix) -> TropMatrix:
    """``F ⊕ F^2 ⊕ ... ⊕ F^d``: heaviest walk weights, valid when λ(F) <= 0.

    Computed by Floyd-Warshall relaxation. A positive diagonal entry after any
    pivot exposes a positive cycle, which raises ``SpectrumError``.
    """
    _require_square(F)
    dist = F.numerators.copy()
    for k in range(dist.shape[0]):
        cand = dist[:, k, None] + dist[None, k, :]
        np.maximum(dist, cand, out=dist)
        dist[dist < _CUT] = NEG
        if (np.diagonal(dist) > 0).any():
            raise SpectrumError("metric matrix diverges: maximum cycle mean is positive")
    _check_range(dist)
    return TropMatrix._raw(dist, F.denominator)


def kleene_star(F: TropMatrix) -> TropMatrix:
    """``I ⊕ F^+``."""
    return mat_add(TropMatrix.identity(F.rows), metric_matrix(F))


def normalize(F: TropMatrix, lam: TropScalar) -> TropMatrix:
    """``lam^- ⊗ F``."""
    if lam is NEG_INF:
        raise SpectrumError("cannot normalise by NEG_INF")
    return scalar_mul(inverse(lam), F)


def _critical_mask(F: TropMatrix, lam=None) -> np.ndarray:
    if lam is None:
        lam = max_cycle_mean(F)
    if lam is NEG_INF:
        raise SpectrumError("no critical graph: the digraph is acyclic")
    g = normalize(F, lam)
    plus = metric_matrix(g)
    gn, pn, _ = _common(g, plus)
    fin = (gn != NEG) & (pn.T != NEG)
    return fin & (np.where(fin, gn + pn.T, 1) == 0)


def critical_arcs(F: TropMatrix, lam: TropScalar | None = None) -> frozenset:
    """Arcs ``(i, j)`` (0-based) lying on some cycle of mean ``λ(F)``."""
    _require_square(F)
    mask = _critical_mask(F, lam)
    return frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(mask)))


def critical_components(F: TropMatrix, lam=None) -> list[frozenset]:
    """Node sets of the strongly connected components of the critical graph."""
    _require_square(F)
    mask = _critical_mask(F, lam)
    nodes = mask.any(axis=1)
    _, labels = connected_components(csr_matrix(mask), directed=True, connection="strong")
    comps: dict[int, set] = {}
    for v in np.nonzero(nodes)[0]:
        comps.setdefault(int(labels[v]), set()).add(int(v))
    return sorted((frozenset(c) for c in comps.values()), key=min)


def find_critical_cycle(F: TropMatrix, lam=None) -> CriticalCycle:
    """Deterministic critical cycle.

    Walks from the lowest-indexed critical node along the lowest-indexed
    outgoing critical arc until a node repeats, then returns the loop.
    """
    _require_square(F)
    if lam is None:
        lam = max_cycle_mean(F)
    if lam is NEG_INF:
        raise SpectrumError("no critical cycle: the digraph is acyclic")
    mask = _critical_mask(F, lam)
    starts = np.nonzero(mask.any(axis=1))[0]
    v = int(starts[0])
    seen: dict[int, int] = {}
    path: list[int] = []
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = int(np.nonzero(mask[v])[0][0])
    return CriticalCycle(tuple(path[seen[v]:]))


def is_critical_cycle(F: TropMatrix, cycle, lam=None) -> bool:
    """True when every arc of ``cycle`` exists and the cycle mean equals ``λ(F)``."""
    _require_square(F)
    if not isinstance(cycle, CriticalCycle):
        cycle = CriticalCycle(tuple(cycle))
    if lam is None:
        lam = max_cycle_mean(F)
    if lam is NEG_INF or max(cycle.nodes) >= F.rows or min(cycle.nodes) < 0:
        return False
    total = Fraction(0)
    for i, j in cycle.arcs():
        w = F[i, j]
        if w is NEG_INF:
            return False
        total += w
    return total == lam * cycle.length


def critical_component(F: TropMatrix, cycle: CriticalCycle, lam=None) -> frozenset:
    """Nodes of the critical-graph component that contains ``cycle``."""
    if lam is None:
        lam = max_cycle_mean(F)
    if not is_critical_cycle(F, cycle, lam):
        raise InputError(f"cycle {cycle} is not critical")
    for comp in critical_components(F, lam):
        if cycle.nodes[0] in comp:
            return comp
    raise AssertionError("critical cycle outside every critical component")


def spectral_summary(F: TropMatrix) -> SpectralSummary:
    lam = max_cycle_mean(F)
    arcs = frozenset() if lam is NEG_INF else critical_arcs(F, lam)
    return SpectralSummary(lam, arcs, is_irreducible(F))


__all__ = [
    "CriticalCycle",
    "SpectralSummary",
    "critical_arcs",
    "critical_component",
    "critical_components",
    "find_critical_cycle",
    "is_critical_cycle",
    "is_irreducible",
    "kleene_star",
    "max_cycle_mean",
    "metric_matrix",
    "normalize",
    "spectral_summary",
    "strongly_connected_components",
]
