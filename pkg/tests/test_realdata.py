import numpy as np
import pytest

from hcsdr.core import DataError, SeedSpec
from hcsdr.optimizer import AnnealConfig
from hcsdr.realdata import evaluate_real, jitter, read_table, select_columns, split_indices


def test_read_table_errors_name_the_line(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("a,b,y\n1,2,3\n4,x,6\n")
    with pytest.raises(DataError, match=r"d\.csv:3: non-numeric value 'x'"):
        read_table(f)
    f.write_text("a,b,y\n1,2,3\n4,5\n")
    with pytest.raises(DataError, match=r":3: expected 3 fields, found 2"):
        read_table(f)
    f.write_text("")
    with pytest.raises(DataError):
        read_table(f)


def test_select_columns():
    header = ["date", "a", "b", "price"]
    table = np.arange(12.0).reshape(3, 4)
    x, y, names = select_columns(header, table, "price", ["date"])
    assert names == ["a", "b"]
    np.testing.assert_array_equal(y, [3, 7, 11])
    with pytest.raises(DataError):
        select_columns(header, table, "cost")
    with pytest.raises(DataError):
        select_columns(header, table, "price", ["nope"])


def test_split_and_jitter():
    tr, te = split_indices(414, 300, SeedSpec(0))
    assert len(tr) == 300 and len(te) == 114 and not set(tr) & set(te)
    with pytest.raises(DataError):
        split_indices(50, 50, SeedSpec(0))
    x = np.ones((10, 2))
    assert np.array_equal(jitter(x, 0.0, SeedSpec(0)), x)
    assert np.array_equal(jitter(x, 0.1, SeedSpec(0)), jitter(x, 0.1, SeedSpec(0)))


def test_evaluate_real_is_deterministic():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((150, 4))
    y = np.exp(0.7 * (x[:, 0] + x[:, 1])) + 0.2 * rng.standard_normal(150)
    cfg = AnnealConfig(iterations=300)
    a = evaluate_real(x, y, 100, ("sir", "save"), seed=SeedSpec(3), anneal_cfg=cfg)
    b = evaluate_real(x, y, 100, ("sir", "save"), seed=SeedSpec(3), anneal_cfg=cfg)
    assert [(r.mse_raw, r.mse_hc) for r in a] == [(r.mse_raw, r.mse_hc) for r in b]
    assert [r.init for r in a] == ["sir", "save"]
    assert all(np.isfinite(r.mse_hc) for r in a)
