#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vetl/types.hpp"

namespace vetl {

// Per-category quality behaviour. `mean_quality[id]` is the expected quality
// of the configuration with that id (over the full cartesian space) on
// content of this category; per-segment observations add Gaussian noise.
struct CategorySpec {
    std::string name;
    std::vector<double> mean_quality;
    double noise_stddev = 0.0;
};

// Recurring demand burst: while active, `category`'s schedule weight is
// multiplied by `intensity`. period_s == 0 means one-shot.
struct SpikeSpec {
    double start_s = 0.0;
    double duration_s = 0.0;
    int category = 0;
    double intensity = 1.0;
    double period_s = 0.0;
};

struct ScheduleSpec {
    std::vector<double> base_weight;        // per category, need not be normalized
    std::vector<double> diurnal_amplitude;  // per category, in [-1, 1]
    double day_period_s = 86400.0;
    double mean_dwell_s = 40.0;
    std::vector<SpikeSpec> spikes;
};

// Task-graph template node. Effective on-prem runtime is
// base_runtime_s * prod_j runtime_mult[j][choices[j]]; the cloud round trip
// scales by cloud_mult the same way (empty means configuration-independent).
struct GraphNodeSpec {
    std::string name;
    double base_runtime_s = 0.0;
    double cloud_roundtrip_s = 0.0;
    double input_bytes = 0.0;
    double output_bytes = 0.0;
    std::vector<std::vector<double>> runtime_mult;  // [knob][value index]
    std::vector<std::vector<double>> cloud_mult;    // [knob][value index], optional
};

class WorkloadModel {
public:
    std::string model_id;
    double segment_duration_s = 2.0;
    int64_t segment_size_bytes = 500000;
    std::vector<Knob> knobs;
    std::vector<GraphNodeSpec> graph_nodes;
    std::vector<std::pair<int, int>> graph_edges;
    std::vector<CategorySpec> categories;
    ScheduleSpec schedule;

    int config_count() const;
    KnobConfiguration config_by_id(int id) const;
    int config_id(const std::vector<int>& choices) const;
    std::vector<KnobConfiguration> all_configs() const;
    TaskGraph graph_for(const KnobConfiguration& k) const;

    // Schedule weights at absolute stream time t (diurnal curve and spikes
    // applied to the base weights).
    std::vector<double> weights_at(double t) const;
    // Long-run category distribution when the diurnal curve and spikes are
    // flat; with per-category dwell equal this is the normalized base weight.
    std::vector<double> stationary_distribution() const;

    double max_noise_stddev() const;
    void validate() const;
};

struct Trace {
    std::string model_id;
    uint64_t seed = 0;
    std::vector<Segment> segments;
};

Trace generate_trace(const WorkloadModel& model, double duration_s, uint64_t seed);

// Expected quality of configuration k on segment s plus seeded Gaussian
// noise, clamped to [0, 1]. Deterministic in (k, s).
double oracle_quality(const KnobConfiguration& k, const Segment& s, const WorkloadModel& model);

// Per-segment qualities of every listed configuration, in list order.
QualityVector quality_vector(const Segment& s, const std::vector<KnobConfiguration>& configs,
                             const WorkloadModel& model);

// Built-in models: "default" (1 knob x 5 values, 3 categories, diurnal),
// "covid" (3 knobs, 40 configurations), "high-spikes" / "long-spikes"
// (default model plus recurring bursts of the heavy category).
WorkloadModel preset_workload_model(const std::string& name);

WorkloadModel load_workload_model(const std::string& path);
WorkloadModel parse_workload_model(const std::string& json_text);
std::string dump_workload_model(const WorkloadModel& model);
void save_workload_model(const WorkloadModel& model, const std::string& path);

void save_trace(const Trace& trace, const std::string& path);
Trace load_trace(const std::string& path);

}  // namespace vetl
