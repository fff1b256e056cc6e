"""End-to-end smoke tests for the python bindings."""

import json
import math

import pytest

import vetl


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("vetl_smoke")


@pytest.fixture(scope="module")
def config_path(workdir):
    path = workdir / "config.json"
    path.write_text(
        json.dumps(
            {
                "provision": {
                    "onprem_cores": 2,
                    "buffer_bytes": 50_000_000,
                    "cloud_budget_credits": 20.0,
                    "uplink_bytes_per_s": 4_000_000,
                    "downlink_bytes_per_s": 8_000_000,
                },
                "horizon": {
                    "planned_interval_s": 3600,
                    "input_window_s": 7200,
                    "input_splits": 8,
                    "switch_period_s": 2.0,
                },
                "offline": {"train_stride_s": 300, "category_count": 3},
            }
        )
    )
    return str(path)


def test_presets_and_traces(workdir):
    model = vetl.preset_workload_model("default")
    assert model.config_count() == 5
    trace = vetl.generate_trace(model, 600.0, 7)
    assert len(trace.segments) == 300

    path = str(workdir / "roundtrip.csv")
    vetl.save_trace(trace, path)
    back = vetl.load_trace(path)
    assert len(back.segments) == len(trace.segments)
    assert back.segments[17].true_category == trace.segments[17].true_category

    quality = vetl.oracle_quality(model.config_by_id(2), trace.segments[0], model)
    assert 0.0 <= quality <= 1.0
    assert quality == vetl.oracle_quality(model.config_by_id(2), trace.segments[0], model)


def test_unknown_preset_raises():
    with pytest.raises(vetl.ValidationError):
        vetl.preset_workload_model("not-a-preset")


def test_cost_and_runtime_estimates():
    model = vetl.preset_workload_model("default")
    costs = [vetl.cost_of_config(model, model.config_by_id(i)) for i in range(5)]
    assert costs == sorted(costs)
    onprem = vetl.estimate_runtime(model, model.config_by_id(4), 0, 2, 4e6, 8e6)
    assert onprem > 0
    more_cores = vetl.estimate_runtime(model, model.config_by_id(4), 0, 4, 4e6, 8e6)
    assert more_cores <= onprem


def test_solve_knob_plan_histograms():
    alpha = vetl.solve_knob_plan(
        [0.6, 0.4], [[0.2, 0.9, 0.5], [0.4, 0.3, 0.8]], [1.0, 2.0, 3.0], 1e9
    )
    for row in alpha:
        assert math.isclose(sum(row), 1.0, abs_tol=1e-9)
    assert alpha[0][1] == pytest.approx(1.0)
    assert alpha[1][2] == pytest.approx(1.0)


def test_fit_and_ingest_pipeline(workdir, config_path):
    model = vetl.preset_workload_model("default")
    train = vetl.generate_trace(model, 28800.0, 7)
    train_path = str(workdir / "train.csv")
    vetl.save_trace(train, train_path)
    test_trace = vetl.generate_trace(model, 7200.0, 9)
    test_path = str(workdir / "test.csv")
    vetl.save_trace(test_trace, test_path)

    model_path = str(workdir / "model.json")
    vetl.fit(train_path, "preset:default", config_path, seed=7, out_path=model_path)
    fitted = vetl.load_fitted_model(model_path)
    assert fitted.category_count() == 3
    assert len(fitted.configs) >= 2
    assert fitted.config_cost_core_s == sorted(fitted.config_cost_core_s)

    report = vetl.ingest(test_path, model_path, "preset:default", config_path, seed=5)
    assert report["decision_count"] == 3600
    assert report["total_quality"] > 0
    assert report["buffer_high_water_bytes"] <= 50_000_000
    assert not report["infeasible"]
    assert len(report["timeline"]) >= 1

    again = vetl.ingest(test_path, model_path, "preset:default", config_path, seed=5)
    assert again["summary"] == report["summary"]

    # Baseline ordering sanity: the adaptive run beats the cheapest static.
    static = vetl.static_baseline(test_path, "preset:default", 0, config_path)
    assert report["total_quality"] >= static["total_quality"]
    optimum = vetl.optimum_baseline(
        test_path, "preset:default", report["total_work_core_s"]
    )
    assert optimum["total_quality"] >= report["total_quality"]


def test_classify_category():
    centers = vetl.ContentCategorySet()
    centers.centers = [[0.2, 0.5], [0.8, 0.9]]
    assert vetl.classify_category(0.45, 0, centers) == 0
    assert vetl.classify_category(0.75, 0, centers) == 1
