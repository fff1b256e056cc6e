#include "vetl/placement_sim.hpp"

#include <algorithm>
#include <limits>

namespace vetl {

double estimate_runtime(const TaskGraph& graph, const Placement& placement, int cores,
                        double uplink_bytes_per_s, double downlink_bytes_per_s) {
    const size_t n = graph.nodes.size();
    if (placement.labels.size() != n)
        throw ValidationError("placement: labels must cover every node");
    if (cores < 1) throw ValidationError("placement: cores must be >= 1");
    if (n == 0) return 0.0;
    graph.topological_order();  // cycle re-check

    std::vector<std::vector<int>> parents(n);
    std::vector<int> unscheduled_parents(n, 0);
    for (const auto& [from, to] : graph.edges) {
        parents[static_cast<size_t>(to)].push_back(from);
        ++unscheduled_parents[static_cast<size_t>(to)];
    }

    std::vector<double> finish(n, 0.0);
    std::vector<char> scheduled(n, 0);
    std::vector<double> core_free(static_cast<size_t>(cores), 0.0);
    double uplink_free = 0.0;
    double downlink_free = 0.0;

    for (size_t step = 0; step < n; ++step) {
        // Pick the schedulable task with the earliest dependency resolution.
        int best = -1;
        double best_ready = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < n; ++i) {
            if (scheduled[i] || unscheduled_parents[i] > 0) continue;
            double ready = 0.0;
            for (int p : parents[i]) ready = std::max(ready, finish[static_cast<size_t>(p)]);
            if (ready < best_ready) {
                best_ready = ready;
                best = static_cast<int>(i);
            }
        }
        const auto idx = static_cast<size_t>(best);
        const TaskNode& task = graph.nodes[idx];

        if (placement.labels[idx] == Site::OnPrem) {
            size_t core = 0;
            for (size_t c = 1; c < core_free.size(); ++c)
                if (core_free[c] < core_free[core]) core = c;
            const double start = std::max(core_free[core], best_ready);
            finish[idx] = start + task.onprem_runtime_s;
            core_free[core] = finish[idx];
        } else {
            const double upload_start = std::max(best_ready, uplink_free);
            const double upload_end = upload_start + task.input_bytes / uplink_bytes_per_s;
            uplink_free = upload_end;
            const double compute_end = upload_end + task.cloud_roundtrip_s;
            const double download_start = std::max(compute_end, downlink_free);
            finish[idx] = download_start + task.output_bytes / downlink_bytes_per_s;
            downlink_free = finish[idx];
        }

        scheduled[idx] = 1;
        for (const auto& [from, to] : graph.edges)
            if (from == best) --unscheduled_parents[static_cast<size_t>(to)];
    }

    double t_max = 0.0;
    for (double f : finish) t_max = std::max(t_max, f);
    return t_max;
}

double cloud_cost(const TaskGraph& graph, const Placement& placement, const Prices& prices) {
    if (placement.labels.size() != graph.nodes.size())
        throw ValidationError("placement: labels must cover every node");
    double credits = 0.0;
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        if (placement.labels[i] != Site::Cloud) continue;
        credits += prices.cloud_invocation_credits;
        credits += prices.egress_credits_per_byte * graph.nodes[i].output_bytes;
    }
    return credits;
}

std::vector<Placement> enumerate_pareto_placements(const TaskGraph& graph, int cores,
                                                   double uplink_bytes_per_s,
                                                   double downlink_bytes_per_s,
                                                   const Prices& prices) {
    const size_t n = graph.nodes.size();
    if (n > 20)
        throw ValidationError("placement enumeration: graph too large (> 20 nodes); coarsen first");

    const uint64_t count = 1ull << n;
    std::vector<Placement> all;
    all.reserve(static_cast<size_t>(count));
    for (uint64_t mask = 0; mask < count; ++mask) {
        Placement p;
        p.labels.resize(n);
        for (size_t i = 0; i < n; ++i)
            p.labels[i] = (mask >> i) & 1 ? Site::Cloud : Site::OnPrem;
        p.estimated_runtime_s =
            estimate_runtime(graph, p, cores, uplink_bytes_per_s, downlink_bytes_per_s);
        p.cloud_cost_credits = cloud_cost(graph, p, prices);
        all.push_back(std::move(p));
    }

    std::sort(all.begin(), all.end(), [](const Placement& a, const Placement& b) {
        if (a.cloud_cost_credits != b.cloud_cost_credits)
            return a.cloud_cost_credits < b.cloud_cost_credits;
        if (a.estimated_runtime_s != b.estimated_runtime_s)
            return a.estimated_runtime_s < b.estimated_runtime_s;
        return a.bitmask() < b.bitmask();
    });

    // Cost-ordered sweep: keep a placement only if it is strictly faster than
    // everything at most as expensive. One representative per objective point
    // (the lowest bitmask, via the sort order).
    std::vector<Placement> frontier;
    double best_runtime = std::numeric_limits<double>::infinity();
    bool onprem_kept = false;
    for (Placement& p : all) {
        if (p.estimated_runtime_s < best_runtime) {
            best_runtime = p.estimated_runtime_s;
            onprem_kept = onprem_kept || p.bitmask() == 0;
            frontier.push_back(std::move(p));
        } else if (p.bitmask() == 0 && !onprem_kept) {
            // All-on-prem is always offered even when a zero-cost cloud
            // labeling happens to be faster (possible only at zero prices).
            onprem_kept = true;
            frontier.push_back(std::move(p));
        }
    }
    return frontier;
}

}  // namespace vetl
