#pragma once

#include "vetl/types.hpp"

namespace vetl::testing {

// Independent event-queue reimplementation of the placement runtime
// estimator, used as an oracle. Resources are granted in completion-then-id
// event order from a priority queue instead of the estimator's repeated
// earliest-ready scan; the two must agree exactly.
double eventlist_runtime(const TaskGraph& graph, const Placement& placement, int cores,
                         double uplink_bytes_per_s, double downlink_bytes_per_s);

}  // namespace vetl::testing
