#pragma once

#include <vector>

#include "vetl/types.hpp"

namespace vetl {

// Per-category frequency histogram over the filtered configurations.
struct KnobPlan {
    std::vector<std::vector<double>> alpha;  // [category][config]
    double interval_start_s = 0.0;
    double interval_end_s = 0.0;
    double planned_cost_core_s = 0.0;

    void validate(double budget_core_s) const;
};

// Work budget for one planned interval, in on-prem core-seconds. Cloud
// credits convert at the rate implied by the cloud/on-prem cost ratio:
// one credit buys 1 / (ratio * onprem_credits_per_core_s) core-seconds.
double compute_budget(const ResourceProvision& provision, double interval_s,
                      const Prices& prices);

// Converts per-segment core-seconds into the per-forecast-unit costs the LP
// consumes: cost per segment times the expected number of segments in the
// interval.
std::vector<double> scale_costs_to_interval(const std::vector<double>& cost_per_segment,
                                            double interval_s, double segment_duration_s);

// Maximizes sum_{k,c} alpha[c][k] * r[c] * centers[c][k] subject to
// sum alpha[c][k] * r[c] * scaled_cost[k] <= budget and per-category simplex
// constraints. Solved exactly via the multiple-choice knapsack structure:
// per category, reduce to the cost/quality upper convex hull, start every
// category at its cheapest configuration, then apply hull upgrades in
// descending quality-per-cost order; the final upgrade may be fractional.
// Ties break by ascending category id, then ascending config id.
//
// Throws EngineError naming the deficit when the budget cannot cover the
// all-cheapest assignment.
KnobPlan solve_knob_plan(const std::vector<double>& forecast, const ContentCategorySet& centers,
                         const std::vector<double>& scaled_costs, double budget_core_s);

struct StreamPlanInput {
    std::vector<double> forecast;
    ContentCategorySet centers;
    std::vector<double> scaled_costs;
};

// Joint plan for several streams under one shared budget: objective and
// budget sum over streams, one simplex constraint per (stream, category).
std::vector<KnobPlan> solve_multi_stream_plan(const std::vector<StreamPlanInput>& streams,
                                              double budget_core_s);

// Objective value of a plan, for audits.
double plan_objective(const KnobPlan& plan, const std::vector<double>& forecast,
                      const ContentCategorySet& centers);

}  // namespace vetl
