import json

import pandas as pd
import pytest

import cli
from kinetics import ConcentrationSet, solve_direct
from utils.config import RunConfig
from utils.io import load_measurements, save_measurements
from workflows.validate import cmd_validate


def _sign_flipped(k, tac, eps=1e-3):
    conc = solve_direct(k, tac, eps)
    return ConcentrationSet.from_arrays(conc.grid, -conc.c_t.values, conc.c_p.values, conc.c_u.values)


def test_validate_passes():
    report = cmd_validate(RunConfig(mode="validate", validate_cases=2, seed=1))
    assert report.passed, report.as_frame().to_string()
    names = set(report.as_frame()["check"])
    assert {"oracle_full", "oracle_lower", "oracle_upper", "oracle_diagonal", "mass_balance"} <= names


def test_validate_catches_a_broken_solver():
    report = cmd_validate(RunConfig(mode="validate", validate_cases=1), solver=_sign_flipped)
    assert not report.passed
    failed = set(report.as_frame().query("not passed")["check"])
    assert "oracle_full" in failed


def test_zero_input_gives_zero_deviation():
    report = cmd_validate(RunConfig(mode="validate", validate_cases=1, zero_tac=True))
    frame = report.as_frame()
    oracle = frame[frame["check"].str.startswith("oracle_")]
    assert (oracle["deviation"] == 0.0).all()
    assert report.passed


def test_cli_validate_exit_codes(monkeypatch, capsys):
    assert cli.main(["validate", "--cases", "1", "--seed", "2"]) == 0
    assert "oracle_full" in capsys.readouterr().out

    monkeypatch.setattr("workflows.validate.solve_direct", _sign_flipped)
    assert cli.main(["validate", "--cases", "1"]) == 1


def test_cli_simulate_writes_measurements(tmp_path):
    assert cli.main(["simulate", "--out", str(tmp_path), "--noise-scale", "0", "--seed", "3"]) == 0
    data = load_measurements(tmp_path / "measurements.csv")
    assert len(data) == 27


def test_cli_ensemble_writes_results(tmp_path, noisy_data):
    data_path = save_measurements(noisy_data, tmp_path / "measurements.csv")
    out = tmp_path / "results"
    argv = ["ensemble", "--data", str(data_path), "--runs", "2", "--max-iter", "3", "--out", str(out)]
    assert cli.main(argv) == 0
    strips = pd.read_csv(out / "strips.csv")
    assert strips.shape[1] == 2 * 2 + 3
    doc = json.loads((out / "runs.json").read_text())
    assert [run["seed"] for run in doc["runs"]] == [0, 1]
    assert doc["aco"]["max_iter"] == 3


def test_cli_fit_with_config_file(tmp_path, noisy_data):
    data_path = save_measurements(noisy_data, tmp_path / "measurements.csv")
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"mode": "fit", "data": str(data_path), "aco": {"max_iter": 2}, "seed": 4}))
    out = tmp_path / "fit"
    assert cli.main(["fit", "--config", str(config), "--out", str(out), "--preset", "real_data"]) == 0
    doc = json.loads((out / "runs.json").read_text())
    assert len(doc["runs"]) == 1
    assert doc["runs"][0]["seed"] == 4
    assert doc["aco"]["population_size"] == 25
    assert doc["aco"]["max_iter"] == 2


def test_runs_flag_replaces_config_seeds(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"mode": "ensemble", "data": "x.csv", "seeds": [7, 8, 9]}))
    args = cli.build_parser().parse_args(["ensemble", "--config", str(config), "--runs", "2", "--seed", "5"])
    run = cli.config_from_args(args)
    assert run.run_seeds() == (5, 6)


def test_aco_flags_reach_the_config():
    args = cli.build_parser().parse_args(
        ["fit", "--data", "x.csv", "--population", "25", "--xi", "0.65", "--upper-bound", "5", "--shared-init"]
    )
    run = cli.config_from_args(args)
    assert run.aco.population_size == 25 and run.aco.new_states == 13
    assert run.aco.xi == 0.65
    assert run.aco.bounds == ((0.0, 5.0),) * 6
    assert run.aco.shared_init


def test_lower_bound_keeps_the_preset_upper_bound():
    args = cli.build_parser().parse_args(["fit", "--data", "x.csv", "--lower-bound", "0.01", "--restarts", "0"])
    run = cli.config_from_args(args)
    assert run.aco.bounds == ((0.01, 1.0),) * 6
    assert run.aco.restarts == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["fit"],
        ["fit", "--data", "does-not-exist.csv"],
        ["simulate", "--noise-scale", "-1"],
        ["ensemble", "--data", "x.csv", "--population", "1"],
        ["fit", "--data", "x.csv", "--lower-bound", "2"],
        ["fit", "--data", "x.csv", "--restarts", "-1"],
    ],
)
def test_bad_input_exits_with_2(argv, capsys, tmp_path):
    assert cli.main(argv + ["--out", str(tmp_path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_usage_errors_exit_with_2():
    with pytest.raises(SystemExit) as info:
        cli.main(["plot"])
    assert info.value.code == 2
