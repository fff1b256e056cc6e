#pragma once

#include <cstdint>
#include <vector>

#include "vetl/types.hpp"

namespace vetl {

// Nearest cluster center along the single attainable dimension: the category
// whose expected quality for the running configuration is closest to the
// reported quality. Ties break toward the lower category id.
int classify_category(double reported_quality, int current_config_index,
                      const ContentCategorySet& centers);

// Deficit argmax over the planned histogram: the configuration whose planned
// frequency most exceeds its realized frequency. Ties break toward the lower
// config index.
int pick_config(const std::vector<double>& planned, const std::vector<double>& realized);

struct ArrivalModel {
    double incoming_bytes_per_s = 0.0;
    double segment_duration_s = 0.0;
};

struct BufferState {
    double occupancy_bytes = 0.0;
    double capacity_bytes = 0.0;
};

struct PlacementChoice {
    int config_index = 0;     // position in the filtered configuration list
    int placement_index = 0;  // position in that configuration's Pareto list
};

// Buffer overflow guard for one decision: admitting a placement with runtime
// r projects the occupancy one segment ahead as
//   occupancy + max(0, r - segment_duration) * incoming_bytes_per_s <= capacity
// and its cloud cost must fit the remaining credit ledger.
bool placement_admissible(const Placement& p, const BufferState& buffer,
                          const ArrivalModel& arrival, double credits_remaining);

// Cheapest admissible placement of the wanted configuration; if none exists,
// recursively falls back to the next less qualitative configuration (ordered
// by expected quality on the current category, then by mean quality across
// categories). The cheapest configuration's all-on-prem placement acts as the
// final fallback; provisioning validation guarantees it keeps up.
//
// `placements` holds each configuration's Pareto placements sorted by
// ascending cloud cost. cloud_allowed = false restricts the search to
// all-on-prem placements (buffering-only mode).
PlacementChoice pick_placement(int wanted_config_index,
                               const std::vector<std::vector<Placement>>& placements,
                               const BufferState& buffer, const ArrivalModel& arrival,
                               double credits_remaining, const ContentCategorySet& centers,
                               int current_category, bool cloud_allowed = true);

struct DecisionRecord {
    double t = 0.0;
    int category = 0;
    int config_index = 0;
    uint64_t placement_mask = 0;
    double buffer_bytes = 0.0;
    double credits_spent = 0.0;
    double quality = 0.0;
};

// Realized per-category usage histograms plus the statistics the planner
// later consumes. Updated functionally: record_outcome returns a new state.
struct SwitcherState {
    std::vector<std::vector<int64_t>> counts;  // [category][config]
    std::vector<std::pair<double, int>> category_log;  // (stream time, category)
    std::vector<DecisionRecord> decisions;

    static SwitcherState make(int categories, int configs);
    std::vector<double> realized_histogram(int category) const;  // sums to 1, or zeros
};

SwitcherState record_outcome(SwitcherState state, double stream_time_s, int category,
                             const DecisionRecord& record);

}  // namespace vetl
