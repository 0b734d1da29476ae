import csv
import json

import numpy
import pytest

import sddpc


def _config(**sections):
    cfg = sddpc.harness.load("paper-sec5")
    for name, values in sections.items():
        cfg = cfg.replace(name, **values)
    return cfg


def _read(filename):
    with open(filename, newline="") as f:
        return list(csv.DictReader(f))


def test_thread_count(monkeypatch):
    monkeypatch.delenv("DDPC_THREADS", raising=False)
    assert sddpc.harness._montecarlo.thread_count() == 1
    monkeypatch.setenv("DDPC_THREADS", "3")
    assert sddpc.harness._montecarlo.thread_count() == 3
    assert sddpc.harness._montecarlo.thread_count(2) == 2
    with pytest.raises(ValueError):
        sddpc.harness._montecarlo.thread_count(0)


def test_variants_share_noise():
    cfg = _config(monte_carlo={"steps": 5})
    scenario = sddpc.harness.Scenario(cfg)
    results = sddpc.harness.run_variants(scenario, 0, 11)
    assert [entry["variant"] for entry in results] == list(sddpc.controller.VARIANTS)
    assert len({entry["digest"] for entry in results}) == 1
    assert all(entry["error"] is None for entry in results)

    # measured outputs of the warm-up coincide, so the first measurement does too
    first = [entry["log"].y[0] for entry in results]
    assert numpy.array_equal(first[0], first[1])
    assert numpy.array_equal(first[0], first[2])


def test_zero_noise_variants_agree():
    cfg = _config(
        noise={"sigma2": 0.0, "Sigma_w": [[0.0]], "w_bar": [0.0]},
        constraints={"output_lower": None, "output_upper": None},
        monte_carlo={"steps": 30},
    )
    scenario = sddpc.harness.Scenario(cfg)
    results = sddpc.harness.run_variants(scenario, 0, 0)
    logs = {entry["variant"]: entry["log"] for entry in results}
    ref = logs["n_ddpc"]
    assert ref.steps == 30
    for variant in ("kf_ddpc", "s_ddpc"):
        log = logs[variant]
        assert log.steps == 30
        assert numpy.max(numpy.abs(log.array("u") - ref.array("u"))) < 1.0e-5
        assert numpy.max(numpy.abs(log.array("y0") - ref.array("y0"))) < 1.0e-5


def test_montecarlo_artifacts(tmp_path):
    cfg = _config(monte_carlo={"runs": 2, "steps": 8})
    artifacts = sddpc.harness.run_montecarlo(cfg, tmp_path)
    assert artifacts.failures == []
    assert len(artifacts.rows) == 6

    for variant in sddpc.controller.VARIANTS:
        for run in range(2):
            assert (tmp_path / "runs" / f"{variant}_{run:03d}.csv").is_file()
    assert (tmp_path / "runs" / "s_ddpc_000_trace.csv").is_file()
    assert not (tmp_path / "runs" / "n_ddpc_000_trace.csv").exists()

    metrics = _read(tmp_path / "metrics.csv")
    assert len(metrics) == 6
    for run in ("0", "1"):
        digests = {row["noise_digest"] for row in metrics if row["run"] == run}
        assert len(digests) == 1
    assert [row["seed"] for row in metrics[:3]] == ["0", "0", "0"]

    aggregate = _read(tmp_path / "aggregate.csv")
    assert len(aggregate) == 12
    assert {row["metric"] for row in aggregate} == {"cost", "violation"}

    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["runs"] == 2
    assert summary["variants"]["s_ddpc"]["completed"] == 2

    back = sddpc.harness.loads((tmp_path / "scenario.json").read_text())
    assert back == cfg


def test_montecarlo_deterministic(tmp_path):
    cfg = _config(monte_carlo={"runs": 3, "steps": 6})
    sddpc.harness.run_montecarlo(cfg, tmp_path / "a", threads=1)
    sddpc.harness.run_montecarlo(cfg, tmp_path / "b", threads=2)
    for name in ("aggregate.csv", "metrics.csv"):
        a = (tmp_path / "a" / name).read_bytes()
        assert a == (tmp_path / "b" / name).read_bytes()
    a = (tmp_path / "a" / "runs" / "s_ddpc_002.csv").read_bytes()
    assert a == (tmp_path / "b" / "runs" / "s_ddpc_002.csv").read_bytes()


def test_report_matches_aggregate(tmp_path):
    cfg = _config(monte_carlo={"runs": 2, "steps": 8})
    sddpc.harness.run_montecarlo(cfg, tmp_path)
    sddpc.harness.report(tmp_path)

    aggregate = _read(tmp_path / "aggregate.csv")
    fig3 = _read(tmp_path / "fig3_boxplot.csv")
    assert len(fig3) == len(aggregate)
    expected = {(r["variant"], r["run"], r["metric"]): r["value"] for r in aggregate}
    for row in fig3:
        a = float(row["value"])
        b = float(expected[(row["variant"], row["run"], row["metric"])])
        assert abs(a - b) <= 1.0e-12 * max(1.0, abs(b))

    fig1 = _read(tmp_path / "fig1_trajectories.csv")
    assert len(fig1) == 3 * 8
    assert {row["variant"] for row in fig1} == set(sddpc.controller.VARIANTS)
    assert all(float(row["upper"]) == 1.25 for row in fig1)
    assert all(float(row["lower"]) == -0.25 for row in fig1)

    fig2 = _read(tmp_path / "fig2_filter.csv")
    assert {row["variant"] for row in fig2} == {"kf_ddpc", "s_ddpc"}
    assert len(fig2) == 2 * 8


def test_report_plot(tmp_path):
    pytest.importorskip("matplotlib")
    cfg = _config(monte_carlo={"runs": 1, "steps": 5})
    sddpc.harness.run_montecarlo(cfg, tmp_path)
    files = sddpc.harness.report(tmp_path, plot=True)
    assert all(path.is_file() for path in files)
    assert any(path.suffix == ".png" for path in files)


def test_constraint_satisfaction():
    cfg = _config(monte_carlo={"runs": 50, "steps": 100})
    scenario = sddpc.harness.Scenario(cfg)
    rows = []
    for run in range(cfg.monte_carlo.runs):
        rows += sddpc.harness.run_variants(scenario, run, run)
    assert all(entry["error"] is None for entry in rows)

    def median(variant, name):
        vals = [e["metrics"][name] for e in rows if e["variant"] == variant]
        return numpy.median(vals)

    n = median("n_ddpc", "total_violation")
    kf = median("kf_ddpc", "total_violation")
    s = median("s_ddpc", "total_violation")
    assert s < kf < n
    assert s < 0.1 * n
    assert median("s_ddpc", "per_step_violation_freq") <= 0.05
    for variant in ("kf_ddpc", "s_ddpc"):
        measured = median(variant, "measured_rmse")
        assert median(variant, "filter_rmse") <= 0.8 * measured


def test_expected_cost_identity():
    cfg = _config(monte_carlo={"steps": 40})
    scenario = sddpc.harness.Scenario(cfg)
    log = scenario.run("s_ddpc", seed=3)
    assert log.steps == 40
    cost = log.array("cost")
    check = log.array("expected_cost_check")
    solved = numpy.isfinite(cost)
    assert numpy.any(solved)
    scale = numpy.maximum(1.0, numpy.abs(cost[solved]))
    assert numpy.all(numpy.abs(check[solved]) <= 1.0e-8 * scale)
