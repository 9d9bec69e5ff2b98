import io
import json

import numpy as np
import pytest

from tropattack import (
    GenKind,
    GenSpec,
    InputError,
    TropMatrix,
    critical_arcs,
    gen_special_matrix,
    gen_uniform_matrix,
    max_cycle_mean,
)
from tropattack.expgen import (
    RECORD_COLUMNS,
    SUMMARY_COLUMNS,
    block_sizes,
    make_rng,
    run_disclog_trials,
    run_trials,
    special_parts,
    summarize,
    write_csv,
)
from tropattack.io import from_document
from tropattack.spectral import critical_components, is_irreducible


def test_uniform_matrix():
    assert gen_uniform_matrix(3, (0, 0), 1) == TropMatrix.zeros(3)
    A = gen_uniform_matrix(100, seed=4)
    assert A.finite_mask().all() and is_irreducible(A)
    assert A == gen_uniform_matrix(100, seed=4)
    assert A != gen_uniform_matrix(100, seed=5)
    nums = A.numerators
    assert nums.min() >= -100 and nums.max() <= 100
    with pytest.raises(InputError):
        gen_uniform_matrix(3, (1, 0))


def test_special_matrix_is_deterministic():
    spec = GenSpec(12, GenKind.SPECIAL_THREE_COMPONENT, seed=9)
    assert gen_special_matrix(spec) == gen_special_matrix(spec)
    with pytest.raises(InputError):
        gen_special_matrix(GenSpec(5, GenKind.RANDOM_FINITE))
    with pytest.raises(InputError):
        gen_special_matrix(1)


@pytest.mark.parametrize("seed", range(25))
def test_special_matrix_structure(seed):
    p = special_parts(9, seed)
    assert max_cycle_mean(p.H) == p.offset > 0
    assert 1 <= p.offset <= 100
    assert all(-100 <= s <= 100 for s in p.scaling)
    assert p.unscaled.finite_mask().all() and is_irreducible(p.unscaled)
    # every block of the skeleton holds a cycle and has an empty diagonal
    for lo, hi in p.blocks:
        block = p.pattern[lo:hi, lo:hi]
        assert not block.diagonal().any()
        sub = TropMatrix.from_integers(np.zeros(block.shape, dtype=int), ~block)
        assert max_cycle_mean(sub) == 0
    assert not p.pattern[np.ix_(range(0, p.blocks[0][1]), range(p.blocks[0][1], 9))].any()
    assert len(critical_components(p.unscaled)) >= 3
    assert critical_arcs(p.H) == critical_arcs(p.unscaled)


def test_block_sizes():
    rng = make_rng(0)
    for d in range(6, 40):
        sizes = block_sizes(d, rng)
        assert len(sizes) == 3 and sum(sizes) == d and min(sizes) >= 2
    assert block_sizes(5, rng) == [2, 3]
    assert block_sizes(3, rng) == [3]
    with pytest.raises(InputError):
        block_sizes(1, rng)


def test_streams_are_independent_of_order():
    a = make_rng(3, 10, 4).integers(0, 1000, 5)
    make_rng(3, 10, 3).integers(0, 1000, 5)
    b = make_rng(3, 10, 4).integers(0, 1000, 5)
    assert (a == b).all()


def test_trials_and_summary():
    records, summary = run_trials([6, 8], 3, "special", seed=2)
    assert len(records) == 6 and all(r.success for r in records)
    assert [(s.d, s.success_rate) for s in summary] == [(6, 1.0), (8, 1.0)]
    again, _ = run_trials([6, 8], 3, "special", seed=2)
    assert [(r.m, r.n, r.branch) for r in records] == [(r.m, r.n, r.branch) for r in again]
    for r in records:
        assert 26 <= r.m <= 64 and r.branch == "disclog"
    assert run_trials([10], 0, "uniform") == ([], [])


def test_parallel_matches_serial():
    serial, _ = run_disclog_trials([7], 4, "uniform", seed=5)
    parallel, _ = run_disclog_trials([7], 4, "uniform", seed=5, jobs=2)
    key = lambda r: (r.d, r.trial, r.t, r.t_recovered, r.success)
    assert list(map(key, serial)) == list(map(key, parallel))


def test_csv_schema_is_stable():
    records, summary = run_trials([6], 2, "uniform", seed=1)
    buf = io.StringIO()
    write_csv(records, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "d,trial,seed,kind,success,branch,elapsed_ms,m,n"
    assert tuple(lines[0].split(",")) == RECORD_COLUMNS
    assert lines[1].startswith("6,0,1,uniform,1,")
    buf = io.StringIO()
    write_csv(summary, buf)
    assert buf.getvalue().splitlines()[0] == "d,kind,success_rate,mean_ms,max_ms"
    assert SUMMARY_COLUMNS == ("d", "kind", "success_rate", "mean_ms", "max_ms")
    assert summarize([]) == []


def test_failures_are_archived(tmp_path, monkeypatch):
    import tropattack.expgen as eg

    def broken(*a, **k):
        raise eg.TropError("forced")

    monkeypatch.setattr(eg, "recover_key", broken)
    records, summary = run_trials([6], 1, "uniform", seed=3, archive_dir=str(tmp_path))
    assert not records[0].success and records[0].branch == "error"
    assert summary[0].success_rate == 0
    (saved,) = tmp_path.iterdir()
    doc = json.loads(saved.read_text())
    assert from_document(doc["M"]).rows == 6 and doc["m"] == records[0].m
