#pragma once

#include <vector>

#include "vetl/types.hpp"

namespace vetl {

// Estimated completion time of one segment's task graph under the given
// cloud/on-prem labeling.
//
// Scheduling model: repeatedly pick, among tasks whose predecessors are all
// scheduled, the one whose dependencies resolve earliest (ties by ascending
// node id). An on-prem task goes to the core with the lowest finish time and
// runs for its single-core runtime. A cloud task waits for the uplink, holds
// it exclusively for input_bytes/uplink_Bps, computes remotely for its
// round-trip latency (cloud capacity is unbounded), then holds the downlink
// exclusively for output_bytes/downlink_Bps. Upload, remote compute, and
// download are serialized per task. A task's output is available to
// successors once it finishes (for cloud tasks, after download).
double estimate_runtime(const TaskGraph& graph, const Placement& placement, int cores,
                        double uplink_bytes_per_s, double downlink_bytes_per_s);

// Cloud-labeled node count times the invocation price, plus optional
// per-byte egress on cloud node outputs.
double cloud_cost(const TaskGraph& graph, const Placement& placement, const Prices& prices);

// Exhaustively enumerates all 2^n labelings (n <= 20) and keeps the
// (cloud_cost, runtime) Pareto frontier, sorted by ascending cost. One
// representative is kept per distinct objective point (the lowest bitmask);
// the all-on-prem placement is always included.
std::vector<Placement> enumerate_pareto_placements(const TaskGraph& graph, int cores,
                                                   double uplink_bytes_per_s,
                                                   double downlink_bytes_per_s,
                                                   const Prices& prices);

}  // namespace vetl
