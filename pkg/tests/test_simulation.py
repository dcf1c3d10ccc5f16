import numpy as np
import pytest

from hcsdr.optimizer import AnnealConfig
from hcsdr.simulation import (
    SUMMARY_COLUMNS,
    ExperimentGrid,
    data_seed,
    replications_csv,
    run_experiment,
    summary_csv,
    summary_table,
)

FAST = AnnealConfig(iterations=200)


def _grid(**kw):
    base = dict(models=("I", "III"), inits=("sir", "dr"), sample_sizes=(60,), replications=3,
                master_seed=5, anneal=FAST)
    base.update(kw)
    return ExperimentGrid(**base)


def test_summary_shape_and_rerun_identity():
    grid = _grid()
    a = run_experiment(grid)
    b = run_experiment(grid)
    assert summary_csv(a) == summary_csv(b)
    assert replications_csv(a) == replications_csv(b)
    lines = summary_csv(a).splitlines()
    assert lines[0].split(",") == list(SUMMARY_COLUMNS)
    assert len(lines) == 1 + 4
    c = a.cell("III", "dr", 60)
    assert c.reps == 3 and c.failures == 0
    assert 0 <= c.mean_hc <= 1 and c.sd_hc >= 0
    assert "III" in summary_table(a)


def test_single_replication_rerun_identical():
    grid = _grid(models=("II",), inits=("save",), replications=1)
    assert summary_csv(run_experiment(grid)) == summary_csv(run_experiment(grid))


def test_workers_do_not_change_results():
    grid = _grid(models=("I",), inits=("sir",))
    assert summary_csv(run_experiment(grid, workers=2)) == summary_csv(run_experiment(grid, workers=1))


def test_adding_cells_leaves_existing_cells_unchanged():
    def deltas(summary):
        return [(r.rep, r.delta_raw, r.delta_hc) for r in summary.replications if (r.model, r.init) == ("I", "sir")]

    small = run_experiment(_grid(models=("I",), inits=("sir",)))
    big = run_experiment(_grid(models=("I", "II"), inits=("dr", "sir")))
    assert deltas(small) == deltas(big)


def test_datasets_shared_across_initializers():
    grid = _grid()
    assert data_seed(grid, "I", "normal", 60, 0) == data_seed(grid, "I", "normal", 60, 0)
    assert data_seed(grid, "I", "normal", 60, 0) != data_seed(grid, "I", "normal", 60, 1)


def test_failures_are_recorded(recwarn):
    # two slices need at least four observations; n = 3 fails every replication
    grid = _grid(models=("I",), inits=("sir",), sample_sizes=(3,), n_slices=2)
    s = run_experiment(grid)
    cell = s.cell("I", "sir", 3)
    assert cell.failures == 3 and np.isnan(cell.mean_hc)
    assert all(r.error for r in s.replications)
    assert any("failed" in str(w.message) for w in recwarn.list)


def test_grid_validation():
    with pytest.raises(ValueError):
        ExperimentGrid(replications=0)
