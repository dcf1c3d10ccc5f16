import json

import numpy as np
import pytest

from conftest import make_model_data
from hcsdr.cli import main
from hcsdr.core import UnitDirection
from hcsdr.evaluation import subspace_delta


def write_csv(path, d, names=None):
    names = names or [f"x{i + 1}" for i in range(d.p)]
    rows = [",".join(names + ["y"])]
    rows += [",".join(format(v, ".17g") for v in (*xr, yv)) for xr, yv in zip(d.x, d.y)]
    path.write_text("\n".join(rows) + "\n")
    return path


@pytest.fixture(scope="module")
def model3(tmp_path_factory):
    d, spec = make_model_data("III", n=400, seed=77)
    return write_csv(tmp_path_factory.mktemp("data") / "m3.csv", d), spec


def test_fit_recovers_model_three(model3, tmp_path, capsys):
    path, spec = model3
    out = tmp_path / "run"
    assert main(["fit", str(path), "--target", "y", "--init", "dr", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "hellinger:" in text and "evaluations:" in text
    v = UnitDirection.from_vector(np.loadtxt(out / "direction.txt"))
    assert subspace_delta(v, UnitDirection.from_vector(spec.eta)) <= 0.05
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "fit" and manifest["master_seed"] == 0
    assert manifest["config"]["anneal"]["iterations"] == 2000


def test_fit_with_file_start(model3, tmp_path, capsys):
    path, _ = model3
    start = tmp_path / "v.txt"
    start.write_text(" ".join(["2"] * 10))
    assert main(["fit", str(path), "--target", "y", "--init", f"file:{start}", "--anneal-iterations", "50"]) == 0
    text = capsys.readouterr().out
    assert "renormalized" in text and "initializer: user" in text
    start.write_text("1 0 0")
    assert main(["fit", str(path), "--target", "y", "--init", f"file:{start}"]) == 2


def test_malformed_csv_names_the_row(tmp_path, capsys):
    f = tmp_path / "bad.csv"
    f.write_text("a,b,y\n1,2,3\n4,5,6\n7,oops,9\n")
    assert main(["fit", str(f), "--target", "y"]) == 2
    assert "bad.csv:4" in capsys.readouterr().err


def test_usage_errors(model3, capsys):
    path, _ = model3
    assert main(["fit", str(path), "--target", "y", "--init", "pca"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["fit", str(path)])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--bogus"])
    assert exc.value.code == 1
    assert main(["simulate", "--predictors", "gamma"]) == 1
    assert main(["fit", str(path), "--target", "y", "--anneal-iterations", "0"]) == 1


def test_numeric_failure_exit_code(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.standard_normal(30)
    rows = ["a,b,y"] + [f"{v:.17g},{v:.17g},{w:.17g}" for v, w in zip(x, rng.standard_normal(30))]
    f = tmp_path / "sing.csv"
    f.write_text("\n".join(rows) + "\n")
    assert main(["fit", str(f), "--target", "y"]) == 3


@pytest.mark.parametrize("sub", ["fit", "simulate", "real", "show-config", "replay"])
def test_help_lists_defaults(sub, capsys):
    with pytest.raises(SystemExit) as exc:
        main([sub, "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    if sub in ("fit", "simulate", "real"):
        assert "--seed" in text and "default" in text and "--anneal-temp" in text


def test_show_config(capsys):
    assert main(["show-config"]) == 0
    text = capsys.readouterr().out
    assert "[anneal]" in text and "iterations = 2000" in text


SMALL_SIM = ["simulate", "--models", "I,III", "--inits", "sir,dr", "--n", "60", "--reps", "2",
             "--anneal-iterations", "200", "--seed", "3"]


def test_simulate_rerun_and_replay_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(SMALL_SIM + ["--out", str(a)]) == 0
    assert main(SMALL_SIM + ["--out", str(b)]) == 0
    assert (a / "summary.csv").read_bytes() == (b / "summary.csv").read_bytes()
    assert (a / "replications.csv").read_bytes() == (b / "replications.csv").read_bytes()
    first = (a / "summary.csv").read_bytes()
    assert main(["replay", str(a / "manifest.json")]) == 0
    assert (a / "summary.csv").read_bytes() == first
    assert "rate" in capsys.readouterr().out


def test_real_train_size_equal_to_n(model3, capsys):
    path, _ = model3
    assert main(["real", str(path), "--target", "y", "--train-size", "400"]) == 2
    assert "train_size" in capsys.readouterr().err


def test_real_runs_and_is_deterministic(model3, tmp_path, capsys):
    path, _ = model3
    args = ["real", str(path), "--target", "y", "--train-size", "300", "--init", "sir",
            "--anneal-iterations", "300"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "real.csv").read_bytes() == (tmp_path / "b" / "real.csv").read_bytes()
    assert "MSE: SDR-HC" in capsys.readouterr().out
