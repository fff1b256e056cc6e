"""Adaptive knob tuning for stream ingestion on a simulated cluster.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

try:
    from . import _core
except ImportError:  # dev tree: the extension sits on sys.path next to the build
    import _core

ContentCategorySet = _core.ContentCategorySet
EngineError = _core.EngineError
FittedModel = _core.FittedModel
Knob = _core.Knob
KnobConfiguration = _core.KnobConfiguration
Segment = _core.Segment
Trace = _core.Trace
ValidationError = _core.ValidationError
WorkloadModel = _core.WorkloadModel
classify_category = _core.classify_category
cost_of_config = _core.cost_of_config
estimate_runtime = _core.estimate_runtime
fit = _core.fit
generate_trace = _core.generate_trace
ingest = _core.ingest
load_fitted_model = _core.load_fitted_model
load_trace = _core.load_trace
load_workload_model = _core.load_workload_model
optimum_baseline = _core.optimum_baseline
oracle_quality = _core.oracle_quality
preset_workload_model = _core.preset_workload_model
save_trace = _core.save_trace
save_workload_model = _core.save_workload_model
solve_knob_plan = _core.solve_knob_plan
static_baseline = _core.static_baseline

__all__ = [
    "ContentCategorySet",
    "EngineError",
    "FittedModel",
    "Knob",
    "KnobConfiguration",
    "Segment",
    "Trace",
    "ValidationError",
    "WorkloadModel",
    "classify_category",
    "cost_of_config",
    "estimate_runtime",
    "fit",
    "generate_trace",
    "ingest",
    "load_fitted_model",
    "load_trace",
    "load_workload_model",
    "optimum_baseline",
    "oracle_quality",
    "preset_workload_model",
    "save_trace",
    "save_workload_model",
    "solve_knob_plan",
    "static_baseline",
]
