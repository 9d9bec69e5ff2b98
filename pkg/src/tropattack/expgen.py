"""Random instance generators and the batch experiment runner.

Every trial draws from its own PCG64 stream keyed by ``(seed, d, trial)``
through ``numpy.random.SeedSequence``, so serial and parallel runs produce
identical records.
"""

from __future__ import annotations

import csv
import enum
import json
import logging
import os
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .attack import recover_key
from .disclog import DisclogInstance, solve_disclog
from .errors import InputError, TropError
from .matrix import NEG, TropMatrix, mat_mul, mat_pow
from .protocol import ProtocolInstance, run_protocol
from .scalar import NEG_INF
from .spectral import max_cycle_mean

log = logging.getLogger(__name__)

DEFAULT_RANGE = (-100, 100)


class GenKind(enum.Enum):
    RANDOM_FINITE = "uniform"
    SPECIAL_THREE_COMPONENT = "special"

    @classmethod
    def parse(cls, value) -> "GenKind":
        if isinstance(value, cls):
            return value
        for k in cls:
            if value in (k.value, k.name):
                return k
        raise InputError(f"unknown matrix kind {value!r}")


@dataclass(frozen=True)
class GenSpec:
    d: int
    kind: GenKind = GenKind.SPECIAL_THREE_COMPONENT
    entry_range: tuple[int, int] = DEFAULT_RANGE
    seed: int = 0


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=tuple(keys))))


def _rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return make_rng(0 if seed_or_rng is None else int(seed_or_rng))


def gen_uniform_matrix(d: int, range=DEFAULT_RANGE, seed=None, cols: int | None = None) -> TropMatrix:
    """``d x cols`` matrix of i.i.d. integers uniform on the closed ``range``."""
    lo, hi = range
    if d < 1:
        raise InputError("dimension must be positive")
    if lo > hi:
        raise InputError(f"empty entry range [{lo}, {hi}]")
    rng = _rng(seed)
    data = rng.integers(lo, hi, size=(d, d if cols is None else cols), endpoint=True)
    return TropMatrix.from_integers(data)


@dataclass(frozen=True)
class SpecialParts:
    """Intermediate stages of the special-matrix recipe."""

    H: TropMatrix
    unscaled: TropMatrix
    pattern: np.ndarray  # True where the block skeleton has a 0
    blocks: tuple[tuple[int, int], ...]
    offset: int
    scaling: tuple[int, ...]


def block_sizes(d: int, rng: np.random.Generator) -> list[int]:
    """Sizes of the diagonal blocks; each is at least 2 so it can hold a cycle."""
    if d < 2:
        raise InputError("the special recipe needs d >= 2")
    if d < 4:
        return [d]
    if d < 6:
        return [2, d - 2]
    k1 = min(max(round(d / 3), 2), d - 4)
    k2 = int(rng.integers(k1 + 2, d - 2, endpoint=True))
    return [k1, k2 - k1, d - k2]


def _cyclic_block(s: int, rng: np.random.Generator) -> np.ndarray:
    # zero pattern with density 1/3, off-diagonal only, resampled until cyclic
    while True:
        mask = rng.random((s, s)) < 1 / 3
        np.fill_diagonal(mask, False)
        if not mask.any():
            continue
        num = np.where(mask, 0, NEG).astype(np.int64)
        if max_cycle_mean(TropMatrix._raw(num, 1)) is not NEG_INF:
            return mask


def special_parts(d: int, seed=None) -> SpecialParts:
    rng = _rng(seed)
    sizes = block_sizes(d, rng)
    pattern = np.zeros((d, d), dtype=bool)
    blocks = []
    start = 0
    for s in sizes:
        pattern[start:start + s, start:start + s] = _cyclic_block(s, rng)
        blocks.append((start, start + s))
        start += s
    fill = rng.integers(-100, -1, size=(d, d), endpoint=True)
    offset = int(rng.integers(1, 100, endpoint=True))
    pre = np.where(pattern, 0, fill) + offset
    scale = rng.integers(-100, 100, size=d, endpoint=True)
    H = pre - scale[:, None] + scale[None, :]
    return SpecialParts(
        TropMatrix.from_integers(H),
        TropMatrix.from_integers(pre),
        pattern,
        tuple(blocks),
        offset,
        tuple(int(x) for x in scale),
    )


def gen_special_matrix(spec, seed=None) -> TropMatrix:
    """Matrix with a planted critical graph of (usually) three components.

    Zero/-inf blocks with cycles sit on the diagonal, every -inf is then
    replaced by a value in [-100, -1], a positive offset is added to all
    entries and a random diagonal similarity hides the block structure.
    Accepts a ``GenSpec`` or a bare dimension.
    """
    if isinstance(spec, GenSpec):
        if spec.kind is not GenKind.SPECIAL_THREE_COMPONENT:
            raise InputError("gen_special_matrix needs kind SPECIAL_THREE_COMPONENT")
        d, seed = spec.d, spec.seed if seed is None else seed
    else:
        d = int(spec)
    return special_parts(d, seed).H


def gen_matrix(kind, d: int, rng, entry_range=DEFAULT_RANGE) -> TropMatrix:
    kind = GenKind.parse(kind)
    if kind is GenKind.RANDOM_FINITE:
        return gen_uniform_matrix(d, entry_range, rng)
    return special_parts(d, rng).H


def _positive_matrix(kind, d, rng) -> TropMatrix:
    # uniform draws occasionally have λ <= 0; redraw from the same stream
    while True:
        H = gen_matrix(kind, d, rng)
        lam = max_cycle_mean(H)
        if lam is not NEG_INF and lam > 0:
            return H


def secret_range(d: int) -> tuple[int, int]:
    return (d - 1) ** 2 + 1, d * d


@dataclass(frozen=True)
class ExperimentRecord:
    d: int
    trial: int
    seed: int
    kind: str
    success: bool
    branch: str
    elapsed_ms: float
    m: int
    n: int


@dataclass(frozen=True)
class DisclogRecord:
    d: int
    trial: int
    seed: int
    kind: str
    success: bool
    branch: str
    elapsed_ms: float
    t: int
    t_recovered: int | None


@dataclass(frozen=True)
class SummaryRow:
    d: int
    kind: str
    success_rate: float
    mean_ms: float
    max_ms: float


def _archive(archive_dir, name: str, payload: dict) -> None:
    if not archive_dir:
        return
    from .io import to_document

    os.makedirs(archive_dir, exist_ok=True)
    doc = {k: to_document(v) if isinstance(v, TropMatrix) else v for k, v in payload.items()}
    with open(os.path.join(archive_dir, name), "w") as fh:
        json.dump(doc, fh)


def attack_trial(task) -> ExperimentRecord:
    d, trial, seed, kind, archive_dir = task
    kind = GenKind.parse(kind)
    rng = make_rng(seed, d, trial)
    M = gen_uniform_matrix(d, DEFAULT_RANGE, rng)
    if kind is GenKind.RANDOM_FINITE:
        H = _positive_matrix(kind, d, rng)
    else:
        H = gen_matrix(kind, d, rng)
    lo, hi = secret_range(d)
    m, n = (int(x) for x in rng.integers(lo, hi, size=2, endpoint=True))
    tr = run_protocol(ProtocolInstance(M, H, m, n))
    branch = "error"
    start = time.perf_counter()
    try:
        res = recover_key(M, H, tr.A, tr.B)
        elapsed = time.perf_counter() - start
        success = res.key == tr.K_a
        branch = res.branch.value
    except TropError as exc:
        elapsed = time.perf_counter() - start
        success = False
        log.warning("attack failed d=%d trial=%d: %s", d, trial, exc)
    if not success:
        _archive(archive_dir, f"attack-{kind.value}-d{d}-t{trial}.json",
                 {"M": M, "H": H, "A": tr.A, "B": tr.B, "m": m, "n": n, "seed": seed})
    return ExperimentRecord(d, trial, seed, kind.value, success, branch, elapsed * 1e3, m, n)


def disclog_trial(task) -> DisclogRecord:
    d, trial, seed, kind, archive_dir = task
    kind = GenKind.parse(kind)
    rng = make_rng(seed, d, trial)
    V = gen_uniform_matrix(d, DEFAULT_RANGE, rng)
    F = _positive_matrix(kind, d, rng)
    lo, hi = secret_range(d)
    t = int(rng.integers(lo, hi, endpoint=True))
    A = mat_mul(V, mat_pow(F, t))
    got = None
    branch = "error"
    start = time.perf_counter()
    try:
        # planted t is past (d-1)^2, so the small-exponent scan is skipped
        res = solve_disclog(DisclogInstance(A, V, F), full_verify=False, catch_small=False)
        got = res.t
        branch = res.branch.value
    except TropError as exc:
        log.warning("disclog failed d=%d trial=%d: %s", d, trial, exc)
    elapsed = time.perf_counter() - start
    success = got == t
    if not success:
        _archive(archive_dir, f"disclog-{kind.value}-d{d}-t{trial}.json",
                 {"V": V, "F": F, "A": A, "t": t, "seed": seed})
    return DisclogRecord(d, trial, seed, kind.value, success, branch, elapsed * 1e3, t, got)


def _run(worker, dims, trials_per_dim, kind, seed, jobs, archive_dir):
    kind = GenKind.parse(kind)
    tasks = [(int(d), i, int(seed), kind.value, archive_dir) for d in dims for i in range(trials_per_dim)]
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(worker, tasks))
    else:
        records = [worker(t) for t in tasks]
    return records, summarize(records)


def run_trials(dims, trials_per_dim: int, kind, seed: int = 0, *, jobs: int = 1, archive_dir=None):
    """Full protocol plus attack per trial. Returns ``(records, summary)``."""
    return _run(attack_trial, dims, trials_per_dim, kind, seed, jobs, archive_dir)


def run_disclog_trials(dims, trials_per_dim: int, kind, seed: int = 0, *, jobs: int = 1, archive_dir=None):
    """Planted ``t`` per trial, solved by ``solve_disclog``. Returns ``(records, summary)``."""
    return _run(disclog_trial, dims, trials_per_dim, kind, seed, jobs, archive_dir)


def summarize(records) -> list[SummaryRow]:
    groups = defaultdict(list)
    for r in records:
        groups[(r.d, r.kind)].append(r)
    rows = []
    for (d, kind), rs in sorted(groups.items()):
        ms = [r.elapsed_ms for r in rs]
        rows.append(SummaryRow(
            d, kind, sum(r.success for r in rs) / len(rs), sum(ms) / len(ms), max(ms)
        ))
    return rows


def write_csv(rows, path_or_file) -> None:
    rows = list(rows)
    if not rows:
        raise InputError("nothing to write")
    names = [f.name for f in fields(rows[0])]
    own = isinstance(path_or_file, (str, os.PathLike))
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.DictWriter(fh, fieldnames=names, lineterminator="\n")
        w.writeheader()
        for r in rows:
            row = asdict(r)
            for k, v in row.items():
                if isinstance(v, float):
                    row[k] = f"{v:.3f}"
                elif isinstance(v, bool):
                    row[k] = int(v)
                elif v is None:
                    row[k] = ""
            w.writerow(row)
    finally:
        if own:
            fh.close()


RECORD_COLUMNS = tuple(f.name for f in fields(ExperimentRecord))
SUMMARY_COLUMNS = tuple(f.name for f in fields(SummaryRow))
