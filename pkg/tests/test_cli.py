import json
import os

import pytest
import numpy as np
import pandas as pd

from stoch_cond.cli import main, build_parser, config_from_args, run, regenerate_golden
from stoch_cond.config import make_config
from stoch_cond.summary import weighted_quantiles

FIXTURE = os.path.join(os.path.dirname(__file__), "data", "commute_fixture.csv")


def run_main(out, *args):
    return main(["run", "--out", str(out)] + [str(a) for a in args])


def read_summary(out):
    with open(os.path.join(str(out), "summary.json")) as f:
        return json.load(f)


def test_conjugate_check_run(tmp_path, capsys):
    status = run_main(tmp_path, "--study", "conjugate-check", "--algorithm", "pmmh",
                      "--draws", 2000, "--seed", 3)
    assert status == 0
    assert capsys.readouterr().out.strip() == os.path.join(str(tmp_path), "summary.json")

    summary = read_summary(tmp_path)
    assert summary["study"] == "conjugate-check"
    assert summary["draws"] == 2000
    assert 0 < summary["acceptance_rate"] < 1
    x = summary["parameters"]["x"]
    assert set(x) == {"mean", "sd", "q2.5", "q25", "q50", "q75", "q97.5", "ess", "ess_tail",
                      "mcse_mean", "r_hat"}
    assert 0 < x["ess"] <= 2000
    assert abs(summary["chain_diagnostics"][0]["geweke_z"]["x"]) < 4
    assert x["mean"] == pytest.approx(summary["exact_posterior"]["mean"], abs=0.05)

    frame = pd.read_csv(os.path.join(str(tmp_path), "draws.csv"))
    assert list(frame.columns) == ["iteration", "weight", "x"]
    assert len(frame) == 2000


def test_quantiles_can_be_recomputed_from_draws(tmp_path):
    assert run_main(tmp_path, "--study", "conjugate-check", "--algorithm", "is",
                    "--particles", 500, "--seed", 2) == 0
    summary = read_summary(tmp_path)
    assert summary["chain_diagnostics"][0]["effective_sample_size"] > 0
    frame = pd.read_csv(os.path.join(str(tmp_path), "draws.csv"))
    assert frame["weight"].sum() == pytest.approx(1.0)
    quantiles = weighted_quantiles(frame["x"].to_numpy(), frame["weight"].to_numpy())
    x = summary["parameters"]["x"]
    expected = [x["q2.5"], x["q25"], x["q50"], x["q75"], x["q97.5"]]
    assert np.allclose(quantiles, expected, rtol=0, atol=1e-12)


def test_same_seed_same_bytes(tmp_path):
    args = ("--study", "conjugate-check", "--draws", 300, "--seed", 11, "--chains", 2)
    assert run_main(tmp_path / "a", *args) == 0
    assert run_main(tmp_path / "b", *args) == 0
    with open(str(tmp_path / "a" / "draws.csv"), "rb") as f:
        a = f.read()
    with open(str(tmp_path / "b" / "draws.csv"), "rb") as f:
        b = f.read()
    assert a == b

    frame = pd.read_csv(str(tmp_path / "a" / "draws.csv"))
    assert list(frame.columns[:2]) == ["chain", "iteration"]
    assert sorted(frame["chain"].unique()) == [0, 1]
    assert read_summary(tmp_path / "a")["chains"] == 2


def test_json_lines(tmp_path):
    assert run_main(tmp_path, "--study", "conjugate-check", "--draws", 50, "--format", "json") == 0
    with open(str(tmp_path / "draws.json")) as f:
        records = [json.loads(line) for line in f]
    assert len(records) == 50
    assert set(records[0]) == {"iteration", "weight", "x"}


def test_out_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("STOCH_COND_OUT", str(tmp_path))
    assert main(["run", "--study", "conjugate-check", "--draws", "20"]) == 0
    assert os.path.exists(str(tmp_path / "summary.json"))


def test_run_needs_a_study(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run", "--draws", "10"])
    assert info.value.code == 2
    assert "--study" in capsys.readouterr().err


def test_config_errors_exit_with_two(tmp_path, capsys):
    assert run_main(tmp_path, "--study", "conjugate-check", "--draws", 0) == 2
    assert "draws" in capsys.readouterr().err
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == 2

    path = tmp_path / "bad.cfg"
    path.write_text("warp = 9\n")
    assert main(["run", "--config", str(path)]) == 2
    assert not os.path.exists(str(tmp_path / "summary.json"))


def test_validate(tmp_path, capsys):
    path = tmp_path / "experiment.cfg"
    path.write_text("study = commute\nalgorithm = pmmh\nN = 1\n")
    assert main(["validate", "--config", str(path)]) == 2
    assert capsys.readouterr().out.startswith("N ")
    assert main(["validate", "--config", str(path), "--N", "8"]) == 0
    assert capsys.readouterr().out == ""


def test_config_file_with_overrides(tmp_path):
    path = tmp_path / "experiment.cfg"
    path.write_text("study = nypopu\ndraws = 100\n")
    args = build_parser().parse_args(["run", "--config", str(path), "--draws", "20", "--exact"])
    config = config_from_args(args)
    assert config.study == "nypopu"
    assert config.draws == 20
    assert config.exact is True


def test_commute_run_on_fixture(tmp_path):
    assert run_main(tmp_path, "--study", "commute", "--variant", "averaged", "--data", FIXTURE,
                    "--algorithm", "bbvi", "--iterations", 50, "--batch", 5,
                    "--draws", 100, "--seed", 1) == 0
    summary = read_summary(tmp_path)
    assert summary["variant"] == "averaged"
    assert summary["days"] == 30
    assert summary["rain_frequency"] == pytest.approx(0.2)
    assert set(summary["parameters"]) == {"p_f", "p_r", "p_t"}
    assert len(summary["chain_diagnostics"][0]["variational_mean"]) == 3


def test_nypopu_predictive_total(tmp_path):
    config = make_config(study="nypopu", algorithm="is", exact=True, particles=300, reps=500,
                         seed=5, out=str(tmp_path))
    summary = run(config)
    total = summary["predictive_total"]
    assert total["sample"] == 1
    assert total["q2.5"] < total["median"] < total["q97.5"]
    assert total["contains_true_total"] == (total["q2.5"] <= total["true_total"] <= total["q97.5"])


def test_inference_failure_exits_with_one(tmp_path, capsys):
    # a step this large sends the leapfrog integrator off to infinity
    status = run_main(tmp_path, "--study", "commute", "--days", 10, "--algorithm", "sghmc",
                      "--draws", 20, "--step-size", 1e6, "--friction", 0)
    assert status == 1
    assert "DivergenceError" in capsys.readouterr().err


def test_golden_regenerate(tmp_path, capsys):
    assert main(["golden", "regenerate", "--out", str(tmp_path), "--lake-sizes", "4", "6",
                 "--episodes", "4", "--days", "12"]) == 0
    printed = capsys.readouterr().out.split()
    assert printed == [str(tmp_path / name) for name in
                       ("commute.csv", "sailing_4.csv", "sailing_6.csv", "sailing_optimum.csv")]

    commute = pd.read_csv(str(tmp_path / "commute.csv"))
    assert list(commute.columns) == ["day", "rain", "duration", "intensity"]
    assert len(commute) == 12
    sailing = pd.read_csv(str(tmp_path / "sailing_6.csv"))
    assert list(sailing.columns) == ["episode", "wind_seed", "greedy_cost", "parametric_cost"]
    assert list(sailing["episode"]) == [1, 2, 3, 4]
    optimum = pd.read_csv(str(tmp_path / "sailing_optimum.csv"))
    assert list(optimum["lake_size"]) == [4, 6]
    assert optimum["optimal_cost"].is_monotonic_increasing

    again = regenerate_golden(str(tmp_path / "again"), days=12, lake_sizes=(4, 6), episodes=4)
    for path in again:
        with open(str(tmp_path / os.path.basename(path)), "rb") as f, open(path, "rb") as g:
            assert f.read() == g.read()


def test_sailing_run_evaluates_policies(tmp_path):
    assert run_main(tmp_path, "--study", "sailing", "--lake-size", 5, "--draws", 40, "--N", 4,
                    "--episodes", 30, "--seed", 2) == 0
    evaluation = read_summary(tmp_path)["policy_evaluation"]
    assert evaluation["lake_size"] == 5
    assert evaluation["episodes"] == 30
    assert 1 <= evaluation["unit_cost_mode"] <= 8
    assert "capped" not in evaluation["optimal"]
    for name in ("optimal", "inferred", "posterior", "greedy"):
        entry = evaluation[name]
        if "capped" not in entry:
            assert entry["lo"] <= entry["mean"] <= entry["hi"]
    assert evaluation["optimal_value"] > 0


def test_sghmc_run_reports_geweke(tmp_path):
    assert run_main(tmp_path, "--study", "commute", "--days", 10, "--algorithm", "sghmc",
                    "--draws", 200, "--seed", 4) == 0
    diagnostics = read_summary(tmp_path)["chain_diagnostics"][0]
    assert set(diagnostics["geweke_z"]) == {"p_f", "p_r", "p_t"}
    assert all(np.isfinite(z) for z in diagnostics["geweke_z"].values())


def test_multichain_summary(tmp_path):
    assert run_main(tmp_path, "--study", "conjugate-check", "--draws", 500, "--seed", 8,
                    "--chains", 3) == 0
    summary = read_summary(tmp_path)
    assert len(summary["chain_diagnostics"]) == 3
    x = summary["parameters"]["x"]
    assert 0 < x["ess"] <= 1500
    assert x["r_hat"] == pytest.approx(1.0, abs=0.1)


def test_help_says_chains_run_in_sequence():
    parser = build_parser()
    commands = next(a for a in parser._actions if a.dest == "command")
    text = " ".join(commands.choices["run"].format_help().split())
    assert "run one after another" in text


if __name__ == '__main__':
    r"""
    CommandLine:
        python tests/test_cli.py
    """
    pytest.main([__file__])
