#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vetl {

// Thrown for malformed or inconsistent user input (config files, model files,
// CLI arguments). Maps to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for failures during execution (I/O, infeasible plans, internal
// inconsistencies). Maps to exit code 3.
class EngineError : public std::runtime_error {
public:
    explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

// One tunable pipeline parameter. Values are ordered from cheapest to most
// expensive; the position of a value in `values` is its cost-rank index.
struct Knob {
    std::string name;
    std::vector<std::string> values;

    void validate() const;
};

// One value chosen per registered knob. `choices[i]` indexes into
// `knobs[i].values`. `id` enumerates the full cartesian configuration space
// (row-major over knob positions) and is stable for a fixed knob list.
struct KnobConfiguration {
    int id = 0;
    std::vector<int> choices;

    std::string label(const std::vector<Knob>& knobs) const;
};

// UDF dependency graph induced by one knob configuration.
struct TaskNode {
    int id = 0;
    double onprem_runtime_s = 0.0;  // runtime on a single on-prem core
    double cloud_roundtrip_s = 0.0; // dispatch-to-result latency, excluding transfers
    double input_bytes = 0.0;
    double output_bytes = 0.0;
};

struct TaskGraph {
    std::vector<TaskNode> nodes;
    std::vector<std::pair<int, int>> edges;  // (from, to)

    void validate() const;
    // Kahn topological order with ascending-id tie-break. Throws on cycles.
    std::vector<int> topological_order() const;
};

enum class Site : uint8_t { OnPrem = 0, Cloud = 1 };

// A cloud/on-prem labeling of a task graph, with runtime and cost filled in
// by the placement simulator.
struct Placement {
    std::vector<Site> labels;
    double estimated_runtime_s = 0.0;
    double cloud_cost_credits = 0.0;

    uint64_t bitmask() const;  // bit i set <=> node i on cloud; needs <= 64 nodes
    static Placement all_onprem(size_t node_count);
};

// One slice of stream content. `true_category` is generator ground truth:
// runtime components never read it, only tests and the oracle baseline do.
struct Segment {
    int64_t index = 0;
    double start_s = 0.0;
    double duration_s = 0.0;
    int64_t size_bytes = 0;
    int true_category = 0;
    uint64_t noise_seed = 0;
};

// Per-segment qualities of every filtered configuration, ordered like the
// filtered configuration list.
struct QualityVector {
    std::vector<double> values;
};

// KMeans cluster centers in quality-vector space. centers[c][i] is the mean
// quality configuration i achieves on content of category c.
struct ContentCategorySet {
    std::vector<std::vector<double>> centers;

    int category_count() const { return static_cast<int>(centers.size()); }
    void validate(size_t config_count) const;
};

struct ResourceProvision {
    int onprem_cores = 4;
    int64_t buffer_bytes = 0;
    double cloud_budget_credits = 0.0;  // per planned interval
    double uplink_bytes_per_s = 0.0;
    double downlink_bytes_per_s = 0.0;
    double cloud_cost_ratio = 1.8;

    void validate() const;
};

// Unit prices used to convert between credits and on-prem core-seconds and to
// price cloud invocations.
struct Prices {
    double onprem_credits_per_core_s = 1.0;
    double cloud_invocation_credits = 0.01;
    double egress_credits_per_byte = 0.0;

    void validate() const;
};

struct PlanningHorizon {
    double planned_interval_s = 172800.0;  // 2 days
    double input_window_s = 172800.0;
    int input_splits = 8;
    double switch_period_s = 2.0;

    void validate() const;
};

// Total work to process one segment entirely on-prem, one core per task, in
// core-seconds. Cloud execution is accounted separately in credits.
double cost_of_config(const TaskGraph& graph);

}  // namespace vetl
