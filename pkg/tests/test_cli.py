"""
TEST: main.py - Layer 4 (CLI)

What we're testing:
    - fit twice with the same seed writes byte-identical model files
    - --lambda 0 fits the sample mean (train MSE = label variance)
    - --mode reweight reports normalized weights
    - Library errors exit 1 with a one-line "error[category]:" message
    - Bad flags exit 2 (argparse)
    - predict round trip against a saved model
    - experiment / cv / generate write files in the documented layouts

How to run:
    pytest tests/test_cli.py -v
"""

import json
import os
import sys

import numpy as np
import pandas as pd
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import main as cli
from datasets.csv_loader import load_csv, save_csv
from datasets.scenarios import sample_scenario
from trim.model_store import load_model

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


@pytest.fixture
def csv_path(tmp_path):
    data, _ = sample_scenario(1, 60, seed=3)
    path = str(tmp_path / "train.csv")
    save_csv(data, path)
    return path


def read_report(model_path):
    with open(os.path.splitext(model_path)[0] + ".report.json", "r", encoding="utf-8") as f:
        return json.load(f)


# =============================================================================
# TEST 1: fit
# =============================================================================

def test_fit_twice_is_byte_identical(tmp_path, csv_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    flags = ["--data", csv_path, "--trees", "3", "--lambda", "2", "--seed", "4"]
    assert cli.main(["fit", *flags, "--out", a]) == 0
    assert cli.main(["fit", *flags, "--out", b]) == 0
    with open(a, "rb") as fa, open(b, "rb") as fb:
        assert fa.read() == fb.read()


def test_zero_lifetime_fits_the_mean(tmp_path, csv_path):
    out = str(tmp_path / "m.json")
    assert cli.main(["fit", "--data", csv_path, "--lambda", "0", "--trees", "2", "--out", out]) == 0
    report = read_report(out)
    y = load_csv(csv_path, "y").y
    assert report["train_mse"] == pytest.approx(np.var(y), rel=1e-12)
    assert "degenerate_egop" in report["flags"]


def test_fit_report_fields(tmp_path, capsys):
    out = str(tmp_path / "m.json")
    assert cli.main(["fit", "--scenario", "2", "--n", "50", "--trees", "2", "--iters", "1", "--out", out]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed == read_report(out)
    assert printed["n"] == 50 and printed["d"] == 5
    assert printed["iterations"] == 1
    assert printed["wall_time_s"] >= 0


def test_reweight_reports_weights(tmp_path):
    out = str(tmp_path / "w.json")
    assert cli.main(["fit", "--scenario", "5", "--n", "80", "--trees", "3", "--mode", "reweight", "--out", out]) == 0
    report = read_report(out)
    assert report["mode"] == "reweight"
    assert sum(report["weights"]) == pytest.approx(1.0)
    assert len(report["split_counts"]) == 5
    assert load_model(out).weights is not None


def test_region_source(tmp_path):
    out = str(tmp_path / "r.json")
    assert cli.main(["fit", "--region", "Liberia", "--n", "40", "--trees", "2", "--iters", "1", "--out", out]) == 0
    assert read_report(out)["d"] == 8


# =============================================================================
# TEST 2: Errors
# =============================================================================

def test_missing_csv_exits_one(tmp_path, capsys):
    code = cli.main(["fit", "--data", str(tmp_path / "absent.csv"), "--out", str(tmp_path / "m.json")])
    assert code == 1
    lines = capsys.readouterr().err.splitlines()
    assert any(line.startswith("error[dataset]:") for line in lines)


def test_invalid_config_exits_one(tmp_path, csv_path, capsys):
    assert cli.main(["fit", "--data", csv_path, "--trees", "0", "--out", str(tmp_path / "m.json")]) == 1
    assert any(line.startswith("error[config]:") for line in capsys.readouterr().err.splitlines())


def test_bad_flag_exits_two():
    with pytest.raises(SystemExit) as err:
        cli.main(["fit", "--trees", "many"])
    assert err.value.code == 2


def test_unknown_command_exits_two():
    with pytest.raises(SystemExit) as err:
        cli.main(["plant"])
    assert err.value.code == 2


# =============================================================================
# TEST 3: predict / egop
# =============================================================================

def test_predict_round_trip(tmp_path, csv_path, capsys):
    model_path = str(tmp_path / "m.json")
    cli.main(["fit", "--data", csv_path, "--trees", "3", "--out", model_path])
    capsys.readouterr()

    out = str(tmp_path / "pred.csv")
    assert cli.main(["predict", "--model", model_path, "--data", csv_path, "--target", "y", "--out", out]) == 0
    summary = json.loads(capsys.readouterr().out)
    predictions = pd.read_csv(out)["prediction"].to_numpy()
    data = load_csv(csv_path, "y")
    np.testing.assert_array_equal(predictions, load_model(model_path).predict(data.X))
    assert summary["mse"] == pytest.approx(read_report(model_path)["train_mse"])


def test_predict_without_target_reads_all_columns(tmp_path, csv_path):
    model_path = str(tmp_path / "m.json")
    cli.main(["fit", "--data", csv_path, "--trees", "2", "--out", model_path])
    inputs = str(tmp_path / "inputs.csv")
    pd.read_csv(csv_path).drop(columns=["y"]).to_csv(inputs, index=False, float_format="%.17g")
    out = str(tmp_path / "pred.csv")
    assert cli.main(["predict", "--model", model_path, "--data", inputs, "--out", out]) == 0
    assert len(pd.read_csv(out)) == 60


def test_egop_command(tmp_path, csv_path):
    out = str(tmp_path / "egop.json")
    assert cli.main(["egop", "--data", csv_path, "--trees", "3", "--out", out]) == 0
    with open(out, "r", encoding="utf-8") as f:
        payload = json.load(f)
    H = np.asarray(payload["egop"]["matrix"])
    A = np.asarray(payload["transform"])
    assert H.shape == A.shape == (5, 5)
    assert np.linalg.norm(A, axis=0).sum() == pytest.approx(5.0)


def test_egop_command_degenerate(tmp_path, csv_path):
    out = str(tmp_path / "egop.json")
    assert cli.main(["egop", "--data", csv_path, "--lambda", "0", "--out", out]) == 0
    with open(out, "r", encoding="utf-8") as f:
        payload = json.load(f)
    assert payload["transform"] is None
    assert payload["flags"] == ["degenerate_egop"]


# =============================================================================
# TEST 4: experiment / cv / generate
# =============================================================================

def test_experiment_matches_results_schema(tmp_path):
    out = str(tmp_path / "sc.csv")
    code = cli.main(["experiment", "subspace_convergence", "--scenario", "1", "--n", "50",
                     "--seed", "0", "--trees", "2", "--out", out])
    assert code == 0
    with open(os.path.join(FIXTURES, "results_schema.json"), "r", encoding="utf-8") as f:
        schema = json.load(f)["columns"]
    names = [column["name"] for column in schema]
    dtypes = {column["name"]: (str if column["dtype"] == "object" else column["dtype"]) for column in schema}

    frame = pd.read_csv(out, dtype=dtypes)
    assert list(frame.columns) == names
    assert len(frame) == 1
    row = frame.iloc[0]
    assert (row.experiment, row.scenario, row.method, row.metric) == (
        "subspace_convergence", "1", "proposed", "max_principal_angle")
    assert 0.0 <= row.value <= np.pi / 2


def test_cv_rows(tmp_path):
    out = str(tmp_path / "cv.csv")
    code = cli.main(["cv", "--scenario", "1", "--n", "40", "--folds", "2", "--repeats", "2",
                     "--trees", "2", "--out", out])
    assert code == 0
    frame = pd.read_csv(out)
    assert len(frame) == 2 * 2
    assert set(frame.method) == {"MF", "TrIM"}
    assert set(frame["lambda"]) <= {1.0, 2.0, 3.0, 4.0, 5.0}
    assert (frame.metric == "mean_test_mse").all()


def test_cv_bench_needs_data(capsys):
    assert cli.main(["experiment", "cv_bench"]) == 1
    assert any(line.startswith("error[config]:") for line in capsys.readouterr().err.splitlines())


def test_generate_writes_loadable_csv(tmp_path):
    out = str(tmp_path / "gen.csv")
    assert cli.main(["generate", "--scenario", "3", "--n", "25", "--seed", "1", "--out", out]) == 0
    data = load_csv(out, "y")
    expected, _ = sample_scenario(3, 25, seed=1)
    np.testing.assert_array_equal(data.X, expected.X)
    np.testing.assert_array_equal(data.y, expected.y)
