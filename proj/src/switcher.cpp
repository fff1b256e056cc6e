#include "vetl/switcher.hpp"

#include <algorithm>
#include <cmath>

namespace vetl {

int classify_category(double reported_quality, int current_config_index,
                      const ContentCategorySet& centers) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int c = 0; c < centers.category_count(); ++c) {
        const double dist = std::abs(
            centers.centers[static_cast<size_t>(c)][static_cast<size_t>(current_config_index)] -
            reported_quality);
        if (dist < best_dist) {
            best_dist = dist;
            best = c;
        }
    }
    return best;
}

int pick_config(const std::vector<double>& planned, const std::vector<double>& realized) {
    // Deficit ties resolve toward the higher planned frequency (then the
    // lower index), so exact adherence keeps the planned configuration
    // instead of drifting to an unplanned one.
    int best = 0;
    double best_deficit = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < planned.size(); ++k) {
        const double deficit = planned[k] - (k < realized.size() ? realized[k] : 0.0);
        if (deficit > best_deficit ||
            (deficit == best_deficit && planned[k] > planned[static_cast<size_t>(best)])) {
            best_deficit = deficit;
            best = static_cast<int>(k);
        }
    }
    return best;
}

bool placement_admissible(const Placement& p, const BufferState& buffer,
                          const ArrivalModel& arrival, double credits_remaining) {
    const double over = std::max(0.0, p.estimated_runtime_s - arrival.segment_duration_s);
    const double projected = buffer.occupancy_bytes + over * arrival.incoming_bytes_per_s;
    return projected <= buffer.capacity_bytes &&
           p.cloud_cost_credits <= credits_remaining + 1e-12;
}

PlacementChoice pick_placement(int wanted_config_index,
                               const std::vector<std::vector<Placement>>& placements,
                               const BufferState& buffer, const ArrivalModel& arrival,
                               double credits_remaining, const ContentCategorySet& centers,
                               int current_category, bool cloud_allowed) {
    const size_t n_configs = placements.size();
    const auto& category_quality = centers.centers[static_cast<size_t>(current_category)];

    // Fallback order: wanted config first, then every less qualitative config
    // by descending quality on the current category (mean quality across
    // categories, then lower index, on ties).
    auto mean_quality = [&](size_t k) {
        double total = 0.0;
        for (const auto& center : centers.centers) total += center[k];
        return total / static_cast<double>(centers.centers.size());
    };
    auto quality_order = [&](size_t a, size_t b) {
        if (category_quality[a] != category_quality[b])
            return category_quality[a] > category_quality[b];
        const double ma = mean_quality(a), mb = mean_quality(b);
        if (ma != mb) return ma > mb;
        return a < b;
    };

    std::vector<size_t> order;
    order.reserve(n_configs);
    for (size_t k = 0; k < n_configs; ++k)
        if (static_cast<int>(k) != wanted_config_index) order.push_back(k);
    std::sort(order.begin(), order.end(), quality_order);
    std::erase_if(order, [&](size_t k) {
        return quality_order(k, static_cast<size_t>(wanted_config_index));
    });
    order.insert(order.begin(), static_cast<size_t>(wanted_config_index));

    for (size_t k : order) {
        const auto& candidates = placements[k];
        for (size_t p = 0; p < candidates.size(); ++p) {
            if (!cloud_allowed && candidates[p].bitmask() != 0) continue;
            if (placement_admissible(candidates[p], buffer, arrival, credits_remaining))
                return {static_cast<int>(k), static_cast<int>(p)};
        }
    }

    // Guaranteed fallback: the cheapest configuration fully on-prem (index 0
    // of a cost-ordered configuration list). Provisioning validation ensures
    // it keeps up from any occupancy <= capacity.
    for (size_t p = 0; p < placements[0].size(); ++p)
        if (placements[0][p].bitmask() == 0) return {0, static_cast<int>(p)};
    throw EngineError("pick_placement: cheapest configuration lacks an all-on-prem placement");
}

SwitcherState SwitcherState::make(int categories, int configs) {
    SwitcherState s;
    s.counts.assign(static_cast<size_t>(categories),
                    std::vector<int64_t>(static_cast<size_t>(configs), 0));
    return s;
}

std::vector<double> SwitcherState::realized_histogram(int category) const {
    const auto& row = counts[static_cast<size_t>(category)];
    int64_t total = 0;
    for (int64_t v : row) total += v;
    std::vector<double> hist(row.size(), 0.0);
    if (total == 0) return hist;
    for (size_t k = 0; k < row.size(); ++k)
        hist[k] = static_cast<double>(row[k]) / static_cast<double>(total);
    return hist;
}

SwitcherState record_outcome(SwitcherState state, double stream_time_s, int category,
                             const DecisionRecord& record) {
    state.counts[static_cast<size_t>(category)][static_cast<size_t>(record.config_index)] += 1;
    state.category_log.emplace_back(stream_time_s, category);
    state.decisions.push_back(record);
    return state;
}

}  // namespace vetl
