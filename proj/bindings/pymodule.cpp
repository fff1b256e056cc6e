#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vetl/config.hpp"
#include "vetl/engine.hpp"
#include "vetl/model_file.hpp"
#include "vetl/offline.hpp"
#include "vetl/placement_sim.hpp"
#include "vetl/planner.hpp"
#include "vetl/switcher.hpp"
#include "vetl/workload.hpp"

namespace py = pybind11;
using namespace vetl;

namespace {

py::dict report_to_dict(const MetricsReport& r) {
    py::dict d;
    d["total_quality"] = r.total_quality;
    d["total_work_core_s"] = r.total_work_core_s;
    d["cloud_credits_spent"] = r.cloud_credits_spent;
    d["buffer_high_water_bytes"] = r.buffer_high_water_bytes;
    d["decision_count"] = r.decision_count;
    d["infeasible"] = r.infeasible;
    py::list timeline;
    for (const TimelinePoint& p : r.timeline) {
        py::dict row;
        row["t"] = p.t;
        row["work_core_s_per_s"] = p.work_core_s_per_s;
        row["buffer_bytes"] = p.buffer_bytes;
        row["credits_fraction"] = p.credits_fraction;
        row["quality"] = p.quality;
        timeline.append(row);
    }
    d["timeline"] = timeline;
    d["summary"] = summary_line(r);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Adaptive knob tuning for stream ingestion on a simulated cluster";

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<EngineError>(m, "EngineError");

    py::class_<Knob>(m, "Knob")
        .def(py::init<>())
        .def_readwrite("name", &Knob::name)
        .def_readwrite("values", &Knob::values);

    py::class_<KnobConfiguration>(m, "KnobConfiguration")
        .def(py::init<>())
        .def_readwrite("id", &KnobConfiguration::id)
        .def_readwrite("choices", &KnobConfiguration::choices);

    py::class_<Segment>(m, "Segment")
        .def(py::init<>())
        .def_readwrite("index", &Segment::index)
        .def_readwrite("start_s", &Segment::start_s)
        .def_readwrite("duration_s", &Segment::duration_s)
        .def_readwrite("size_bytes", &Segment::size_bytes)
        .def_readwrite("true_category", &Segment::true_category)
        .def_readwrite("noise_seed", &Segment::noise_seed);

    py::class_<Trace>(m, "Trace")
        .def(py::init<>())
        .def_readwrite("model_id", &Trace::model_id)
        .def_readwrite("seed", &Trace::seed)
        .def_readwrite("segments", &Trace::segments);

    py::class_<ContentCategorySet>(m, "ContentCategorySet")
        .def(py::init<>())
        .def_readwrite("centers", &ContentCategorySet::centers)
        .def("category_count", &ContentCategorySet::category_count);

    py::class_<WorkloadModel>(m, "WorkloadModel")
        .def_readonly("model_id", &WorkloadModel::model_id)
        .def_readonly("segment_duration_s", &WorkloadModel::segment_duration_s)
        .def("config_count", &WorkloadModel::config_count)
        .def("config_by_id", &WorkloadModel::config_by_id)
        .def("stationary_distribution", &WorkloadModel::stationary_distribution);

    py::class_<FittedModel>(m, "FittedModel")
        .def_readonly("workload_model_id", &FittedModel::workload_model_id)
        .def_readonly("classify_index", &FittedModel::classify_index)
        .def_readonly("configs", &FittedModel::configs)
        .def_readonly("config_cost_core_s", &FittedModel::config_cost_core_s)
        .def_readonly("centers", &FittedModel::centers)
        .def("category_count", &FittedModel::category_count);

    m.def("preset_workload_model", &preset_workload_model, py::arg("name"));
    m.def("load_workload_model", &load_workload_model, py::arg("path"));
    m.def("save_workload_model", &save_workload_model, py::arg("model"), py::arg("path"));
    m.def("generate_trace", &generate_trace, py::arg("model"), py::arg("duration_s"),
          py::arg("seed"));
    m.def("save_trace", &save_trace, py::arg("trace"), py::arg("path"));
    m.def("load_trace", &load_trace, py::arg("path"));
    m.def("oracle_quality", &oracle_quality, py::arg("config"), py::arg("segment"),
          py::arg("model"));

    m.def(
        "fit",
        [](const std::string& trace_path, const std::string& workload_path,
           const std::string& config_path, uint64_t seed, double labeled_fraction,
           const std::string& out_path) {
            const Trace trace = load_trace(trace_path);
            const WorkloadModel model = workload_path.rfind("preset:", 0) == 0
                                            ? preset_workload_model(workload_path.substr(7))
                                            : load_workload_model(workload_path);
            const AppConfig config =
                config_path.empty() ? AppConfig{} : load_config(config_path);
            const FittedModel fitted =
                fit_offline(trace, model, config, seed, labeled_fraction);
            save_fitted_model(fitted, out_path);
            return out_path;
        },
        py::arg("trace_path"), py::arg("workload"), py::arg("config_path") = "",
        py::arg("seed") = 0, py::arg("labeled_fraction") = 0.05,
        py::arg("out_path") = "model.json");
    m.def("load_fitted_model", &load_fitted_model, py::arg("path"));

    m.def(
        "ingest",
        [](const std::string& trace_path, const std::string& model_path,
           const std::string& workload, const std::string& config_path,
           const std::string& mode, bool fine_tune, uint64_t seed) {
            const Trace trace = load_trace(trace_path);
            const FittedModel fitted = load_fitted_model(model_path);
            const WorkloadModel wm = workload.rfind("preset:", 0) == 0
                                         ? preset_workload_model(workload.substr(7))
                                         : load_workload_model(workload);
            const AppConfig config =
                config_path.empty() ? AppConfig{} : load_config(config_path);
            EngineOptions options;
            options.fine_tune = fine_tune;
            options.seed = seed;
            const MetricsReport report =
                run_ablation(trace, fitted, wm, config.provision, config.prices,
                             config.horizon, ablation_mode_from_string(mode), options);
            return report_to_dict(report);
        },
        py::arg("trace_path"), py::arg("model_path"), py::arg("workload"),
        py::arg("config_path") = "", py::arg("mode") = "both", py::arg("fine_tune") = true,
        py::arg("seed") = 0);

    m.def(
        "static_baseline",
        [](const std::string& trace_path, const std::string& workload, int config_id,
           const std::string& config_path) {
            const Trace trace = load_trace(trace_path);
            const WorkloadModel wm = workload.rfind("preset:", 0) == 0
                                         ? preset_workload_model(workload.substr(7))
                                         : load_workload_model(workload);
            const AppConfig config =
                config_path.empty() ? AppConfig{} : load_config(config_path);
            return report_to_dict(
                run_static_baseline(trace, wm.config_by_id(config_id), wm, config.provision));
        },
        py::arg("trace_path"), py::arg("workload"), py::arg("config_id"),
        py::arg("config_path") = "");

    m.def(
        "optimum_baseline",
        [](const std::string& trace_path, const std::string& workload,
           double work_budget_core_s) {
            const Trace trace = load_trace(trace_path);
            const WorkloadModel wm = workload.rfind("preset:", 0) == 0
                                         ? preset_workload_model(workload.substr(7))
                                         : load_workload_model(workload);
            return report_to_dict(run_optimum_baseline(trace, wm, work_budget_core_s));
        },
        py::arg("trace_path"), py::arg("workload"), py::arg("work_budget_core_s"));

    // Lower-level pieces, handy for notebooks and property checks.
    m.def("cost_of_config", [](const WorkloadModel& model, const KnobConfiguration& k) {
        return cost_of_config(model.graph_for(k));
    });
    m.def(
        "estimate_runtime",
        [](const WorkloadModel& model, const KnobConfiguration& k, uint64_t cloud_mask,
           int cores, double uplink, double downlink) {
            const TaskGraph g = model.graph_for(k);
            Placement p;
            p.labels.resize(g.nodes.size());
            for (size_t i = 0; i < g.nodes.size(); ++i)
                p.labels[i] = (cloud_mask >> i) & 1 ? Site::Cloud : Site::OnPrem;
            return estimate_runtime(g, p, cores, uplink, downlink);
        },
        py::arg("model"), py::arg("config"), py::arg("cloud_mask"), py::arg("cores"),
        py::arg("uplink_bytes_per_s"), py::arg("downlink_bytes_per_s"));
    m.def("classify_category", &classify_category, py::arg("reported_quality"),
          py::arg("current_config_index"), py::arg("centers"));
    m.def(
        "solve_knob_plan",
        [](const std::vector<double>& forecast, const std::vector<std::vector<double>>& centers,
           const std::vector<double>& costs, double budget) {
            ContentCategorySet set;
            set.centers = centers;
            const KnobPlan plan = solve_knob_plan(forecast, set, costs, budget);
            return plan.alpha;
        },
        py::arg("forecast"), py::arg("centers"), py::arg("costs"), py::arg("budget"));
}
