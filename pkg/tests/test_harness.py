import filecmp
from dataclasses import replace
import json
from pathlib import Path

import numpy as np
import pytest

from mrtrend import ExperimentConfig, FourierTrend, Gamma, SdeParams, Summary, run_experiment
from mrtrend.harness import (PRESET_IDS, base_config, evaluate_preset, preset_configs,
                             read_csv_columns, reference_values, reproduce_table,
                             resolve_output_dir)

NUMERIC = ["config.json", "estimates.csv", "summary_alpha1.csv", "summary_alpha2.csv",
           "summary_sigma1.csv", "summary_sigma2.csv", "harmonics_summary.csv",
           "harmonics_median.csv", "rms.csv", "successive_rms.csv", "plot_data.csv",
           "diagnostics.json"]


def smoke(**kw):
    kw.setdefault("n_paths", 2)
    kw.setdefault("n_steps", 100)
    return base_config(**kw)


def test_smoke_artifacts(tmp_path):
    res = run_experiment(smoke(), output_dir=tmp_path / "run")
    out = res.output_dir
    for name in NUMERIC:
        assert (out / name).is_file(), name
    est = read_csv_columns(open(out / "estimates.csv"))
    assert list(est) == ["path_index", "alpha1", "sigma1", "alpha2", "sigma2", "rms_mu1",
                         "rms_mu2"]
    assert list(est["path_index"]) == [0.0, 1.0]
    plot = read_csv_columns(open(out / "plot_data.csv"))
    assert list(plot) == ["t", "mu", "mu_hat_mean", "mu_hat2_mean"]
    assert plot["t"].size == 101
    np.testing.assert_array_equal(plot["mu_hat_mean"], res.mu_hat_mean)


def test_every_csv_reads_back(tmp_path):
    res = run_experiment(smoke(n_paths=3), output_dir=tmp_path)
    out = res.output_dir
    for name in ("alpha1", "sigma1", "alpha2", "sigma2"):
        with open(out / f"summary_{name}.csv") as fh:
            assert Summary.from_csv(fh) == res.summaries[name]
    for name in NUMERIC:
        if name.endswith(".csv"):
            cols = read_csv_columns(open(out / name))
            assert cols and all(c.size for c in cols.values())
        else:
            json.loads((out / name).read_text())
    med = read_csv_columns(open(out / "harmonics_median.csv"))
    trend = FourierTrend.from_triples(zip(med["k"].astype(int), med["a"], med["phi"]))
    assert len(trend.harmonics) == 10
    succ = read_csv_columns(open(out / "successive_rms.csv"))
    np.testing.assert_array_equal(succ["L"], np.arange(7, 14))
    cfg = ExperimentConfig.from_json((out / "config.json").read_text())
    assert cfg == res.config


def test_reruns_are_byte_identical(tmp_path):
    cfg = smoke(n_paths=4)
    a = run_experiment(cfg, output_dir=tmp_path / "a").output_dir
    b = run_experiment(cfg, output_dir=tmp_path / "b", workers=3).output_dir
    match, mismatch, errors = filecmp.cmpfiles(a, b, NUMERIC, shallow=False)
    assert mismatch == [] and errors == []


def test_worker_count_does_not_change_results():
    cfg = smoke(n_paths=40, n_steps=200)
    r1 = run_experiment(cfg, write=False)
    r4 = run_experiment(cfg, workers=4, write=False)
    for name in ("alpha1", "sigma1", "alpha2", "sigma2", "rms_mu1", "rms_mu2"):
        np.testing.assert_array_equal(r1.column(name), r4.column(name))
    np.testing.assert_array_equal(r1.mu_hat2_mean, r4.mu_hat2_mean)


def test_seed_changes_results():
    a = run_experiment(smoke(), write=False)
    b = run_experiment(smoke(base_seed=1), write=False)
    assert not np.array_equal(a.column("alpha1"), b.column("alpha1"))


def test_config_json_forms():
    raw = {"sde": {"alpha": 20, "sigma": "11/10", "gamma": "1/2"}, "trend": "table1",
           "dt": "1/250", "n_steps": 500, "n_paths": 3,
           "smoother": {"kind": "hp", "lam": 400000}}
    cfg = ExperimentConfig.from_dict(raw)
    assert cfg.dt == 1 / 250 and cfg.sde.sigma == 1.1 and cfg.gamma is Gamma.HALF
    assert cfg.period == pytest.approx(2.0)
    assert ExperimentConfig.from_json(cfg.to_json()) == cfg


@pytest.mark.parametrize("raw", [
    {"trend": "table1"},
    {"sde": {"alpha": 20, "sigma": 1.1}, "bogus": 1},
    {"sde": {"alpha": -1, "sigma": 1.1}},
    {"sde": {"alpha": 20, "sigma": 1.1}, "trend_period": 3.0},
    {"sde": {"alpha": 20, "sigma": 1.1, "gamma": 1}, "x0": -1.0},
])
def test_invalid_configs(raw):
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict(raw)


def test_unit_period_needs_integer_cycles():
    assert base_config(trend_period=1.0).period == 1.0
    with pytest.raises(ValueError):
        base_config(n_steps=4001, trend_period=1.0)


def test_output_root_override(monkeypatch, tmp_path):
    monkeypatch.setenv("MRTREND_OUTPUT_ROOT", str(tmp_path))
    assert resolve_output_dir("run") == tmp_path / "run"
    assert resolve_output_dir("run", "other") == tmp_path / "other"
    assert resolve_output_dir("/abs") == Path("/abs")


def test_presets():
    assert set(PRESET_IDS) == set(reference_values()["tables"])
    t6 = preset_configs("table6")
    assert [c.dt for c in t6.values()] == [0.1, 0.02, 0.01]
    assert all(c.n_steps == 4000 for c in t6.values())
    b = preset_configs("appendixB")["base"]
    assert b.gamma is Gamma.ONE and b.smoother.lam == 400000.0
    c = preset_configs("appendixC", n_paths=5)["base"]
    assert (c.sde.alpha, c.sde.sigma, c.n_paths) == (23.0, 0.6, 5)
    with pytest.raises(ValueError):
        preset_configs("table9")


def test_reproduce_table_small(tmp_path):
    report = reproduce_table("table5", n_paths=3, output_dir=tmp_path)
    assert (tmp_path / "table5" / "report.txt").is_file()
    assert (tmp_path / "table5" / "estimates.csv").is_file()
    text = report.render()
    assert "rms2_order" in text and ("PASS" in text or "FAIL" in text)
    checks = read_csv_columns(open(tmp_path / "table5" / "checks.csv"))
    assert set(checks["status"]) <= {"pass", "fail"}


@pytest.mark.parametrize("preset", ["table2", "table3", "table4", "appendixB"])
def test_evaluate_preset_structure(preset):
    runs = {name: run_experiment(replace(cfg, n_steps=400), write=False)
            for name, cfg in preset_configs(preset, n_paths=2).items()}
    report = evaluate_preset(preset, runs)
    assert report.checks
    assert report.citation
