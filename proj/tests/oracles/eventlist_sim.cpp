#include "oracles/eventlist_sim.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

namespace vetl::testing {

double eventlist_runtime(const TaskGraph& graph, const Placement& placement, int cores,
                         double uplink_bytes_per_s, double downlink_bytes_per_s) {
    const size_t n = graph.nodes.size();
    if (n == 0) return 0.0;

    std::vector<std::vector<int>> children(n);
    std::vector<int> missing_parents(n, 0);
    for (const auto& [from, to] : graph.edges) {
        children[static_cast<size_t>(from)].push_back(to);
        ++missing_parents[static_cast<size_t>(to)];
    }

    // Event kinds: 0 = task completion (releases children), 1 = task runnable
    // (grabs resources). Completions at a timestamp run before runnables so
    // that a child freed at time t competes in the id tie-break at t.
    using Event = std::tuple<double, int, int>;  // (time, kind, node)
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;

    for (size_t i = 0; i < n; ++i)
        if (missing_parents[i] == 0)
            events.emplace(0.0, 1, static_cast<int>(i));

    std::multiset<double> core_free;
    for (int c = 0; c < cores; ++c) core_free.insert(0.0);
    double uplink_free = 0.0;
    double downlink_free = 0.0;
    std::vector<double> finish(n, 0.0);
    double t_max = 0.0;

    while (!events.empty()) {
        const auto [time, kind, node] = events.top();
        events.pop();
        const auto idx = static_cast<size_t>(node);
        if (kind == 0) {
            for (int ch : children[idx])
                if (--missing_parents[static_cast<size_t>(ch)] == 0)
                    events.emplace(finish[idx], 1, ch);
            continue;
        }

        const TaskNode& task = graph.nodes[idx];
        if (placement.labels[idx] == Site::OnPrem) {
            const auto slot = core_free.begin();
            const double start = std::max(*slot, time);
            core_free.erase(slot);
            finish[idx] = start + task.onprem_runtime_s;
            core_free.insert(finish[idx]);
        } else {
            const double upload_start = std::max(time, uplink_free);
            uplink_free = upload_start + task.input_bytes / uplink_bytes_per_s;
            const double compute_end = uplink_free + task.cloud_roundtrip_s;
            const double download_start = std::max(compute_end, downlink_free);
            finish[idx] = download_start + task.output_bytes / downlink_bytes_per_s;
            downlink_free = finish[idx];
        }
        t_max = std::max(t_max, finish[idx]);
        events.emplace(finish[idx], 0, node);
    }
    return t_max;
}

}  // namespace vetl::testing
