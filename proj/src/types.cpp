#include "vetl/types.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace vetl {

void Knob::validate() const {
    if (name.empty()) throw ValidationError("knob name must be non-empty");
    if (values.empty()) throw ValidationError("knob '" + name + "': domain must be non-empty");
    std::set<std::string> seen(values.begin(), values.end());
    if (seen.size() != values.size())
        throw ValidationError("knob '" + name + "': domain values must be unique");
}

std::string KnobConfiguration::label(const std::vector<Knob>& knobs) const {
    std::string out;
    for (size_t i = 0; i < choices.size(); ++i) {
        if (i) out += "/";
        out += knobs[i].values[static_cast<size_t>(choices[i])];
    }
    return out;
}

void TaskGraph::validate() const {
    for (size_t i = 0; i < nodes.size(); ++i) {
        const TaskNode& n = nodes[i];
        if (n.id != static_cast<int>(i))
            throw ValidationError("task graph: node ids must be 0..n-1 in order");
        if (n.onprem_runtime_s < 0 || n.cloud_roundtrip_s < 0 || n.input_bytes < 0 ||
            n.output_bytes < 0)
            throw ValidationError("task graph: node runtimes and sizes must be >= 0");
    }
    for (const auto& [from, to] : edges) {
        if (from < 0 || to < 0 || from >= static_cast<int>(nodes.size()) ||
            to >= static_cast<int>(nodes.size()))
            throw ValidationError("task graph: edge references missing node");
        if (from == to) throw ValidationError("task graph: self edge");
    }
    topological_order();  // throws on cycles
}

std::vector<int> TaskGraph::topological_order() const {
    const int n = static_cast<int>(nodes.size());
    std::vector<int> indegree(n, 0);
    std::vector<std::vector<int>> out(n);
    for (const auto& [from, to] : edges) {
        out[from].push_back(to);
        ++indegree[to];
    }
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int i = 0; i < n; ++i)
        if (indegree[i] == 0) ready.push(i);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int w : out[v])
            if (--indegree[w] == 0) ready.push(w);
    }
    if (static_cast<int>(order.size()) != n)
        throw ValidationError("task graph: cycle detected");
    return order;
}

uint64_t Placement::bitmask() const {
    uint64_t mask = 0;
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == Site::Cloud) mask |= (1ull << i);
    return mask;
}

Placement Placement::all_onprem(size_t node_count) {
    Placement p;
    p.labels.assign(node_count, Site::OnPrem);
    return p;
}

void ContentCategorySet::validate(size_t config_count) const {
    if (centers.empty()) throw ValidationError("category set: must have at least one center");
    for (const auto& center : centers)
        if (center.size() != config_count)
            throw ValidationError("category set: center width must equal configuration count");
    for (size_t a = 0; a < centers.size(); ++a)
        for (size_t b = a + 1; b < centers.size(); ++b)
            if (centers[a] == centers[b])
                throw ValidationError("category set: centers must be pairwise distinct");
}

void ResourceProvision::validate() const {
    if (onprem_cores <= 0) throw ValidationError("provision: onprem_cores must be positive");
    if (buffer_bytes <= 0) throw ValidationError("provision: buffer_bytes must be positive");
    if (cloud_budget_credits < 0)
        throw ValidationError("provision: cloud_budget_credits must be >= 0");
    if (uplink_bytes_per_s <= 0)
        throw ValidationError("provision: uplink_bytes_per_s must be positive");
    if (downlink_bytes_per_s <= 0)
        throw ValidationError("provision: downlink_bytes_per_s must be positive");
    if (cloud_cost_ratio <= 0)
        throw ValidationError("provision: cloud_cost_ratio must be positive");
}

void Prices::validate() const {
    if (onprem_credits_per_core_s <= 0)
        throw ValidationError("prices: onprem_credits_per_core_s must be positive");
    if (cloud_invocation_credits < 0)
        throw ValidationError("prices: cloud_invocation_credits must be >= 0");
    if (egress_credits_per_byte < 0)
        throw ValidationError("prices: egress_credits_per_byte must be >= 0");
}

void PlanningHorizon::validate() const {
    if (planned_interval_s <= 0)
        throw ValidationError("horizon: planned_interval_s must be positive");
    if (input_window_s <= 0) throw ValidationError("horizon: input_window_s must be positive");
    if (input_splits <= 0) throw ValidationError("horizon: input_splits must be positive");
    if (switch_period_s <= 0) throw ValidationError("horizon: switch_period_s must be positive");
    if (planned_interval_s <= switch_period_s)
        throw ValidationError("horizon: planned_interval_s must exceed switch_period_s");
}

double cost_of_config(const TaskGraph& graph) {
    double total = 0.0;
    for (const TaskNode& n : graph.nodes) total += n.onprem_runtime_s;
    return total;
}

}  // namespace vetl
