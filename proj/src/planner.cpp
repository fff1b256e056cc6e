#include "vetl/planner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vetl {

void KnobPlan::validate(double budget_core_s) const {
    for (const auto& row : alpha) {
        double sum = 0.0;
        for (double a : row) {
            if (a < 0) throw EngineError("plan: negative alpha");
            sum += a;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw EngineError("plan: category histogram does not sum to 1");
    }
    if (planned_cost_core_s > budget_core_s + 1e-6)
        throw EngineError("plan: planned cost exceeds budget");
}

double compute_budget(const ResourceProvision& provision, double interval_s,
                      const Prices& prices) {
    if (interval_s <= 0) throw ValidationError("budget: interval must be positive");
    prices.validate();
    if (provision.cloud_cost_ratio <= 0)
        throw ValidationError("budget: cloud_cost_ratio must be positive");
    const double onprem = static_cast<double>(provision.onprem_cores) * interval_s;
    const double converted = provision.cloud_budget_credits /
                             (provision.cloud_cost_ratio * prices.onprem_credits_per_core_s);
    return onprem + converted;
}

std::vector<double> scale_costs_to_interval(const std::vector<double>& cost_per_segment,
                                            double interval_s, double segment_duration_s) {
    const double segments = interval_s / segment_duration_s;
    std::vector<double> scaled(cost_per_segment.size());
    for (size_t i = 0; i < scaled.size(); ++i) scaled[i] = cost_per_segment[i] * segments;
    return scaled;
}

namespace {

struct HullPoint {
    int config = 0;
    double cost = 0.0;
    double quality = 0.0;
};

// Cost/quality upper convex hull of one category's options. Points below the
// hull (including interval-dominated ones) never appear in an LP optimum.
std::vector<HullPoint> upper_hull(const std::vector<double>& costs,
                                  const std::vector<double>& qualities) {
    std::vector<HullPoint> pts(costs.size());
    for (size_t i = 0; i < costs.size(); ++i)
        pts[i] = {static_cast<int>(i), costs[i], qualities[i]};
    std::sort(pts.begin(), pts.end(), [](const HullPoint& a, const HullPoint& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        if (a.quality != b.quality) return a.quality > b.quality;
        return a.config < b.config;
    });

    std::vector<HullPoint> hull;
    for (const HullPoint& p : pts) {
        if (!hull.empty() && p.quality <= hull.back().quality) continue;  // dominated
        while (hull.size() >= 2) {
            const HullPoint& b = hull[hull.size() - 1];
            const HullPoint& a = hull[hull.size() - 2];
            // Collinear middles are redundant, so pop on >=.
            const double lhs = (p.quality - b.quality) * (b.cost - a.cost);
            const double rhs = (b.quality - a.quality) * (p.cost - b.cost);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return hull;
}

struct UpgradeStep {
    int stream = 0;
    int category = 0;
    size_t hull_index = 0;  // upgrade from hull[hull_index] to hull[hull_index + 1]
    double ratio = 0.0;     // quality gained per core-second
    double cost = 0.0;      // budget consumed by the full step (scaled by r_c)
    double target_config = 0;
};

}  // namespace

std::vector<KnobPlan> solve_multi_stream_plan(const std::vector<StreamPlanInput>& streams,
                                              double budget_core_s) {
    if (streams.empty()) throw ValidationError("plan: at least one stream required");
    for (const StreamPlanInput& s : streams) {
        if (s.forecast.size() != s.centers.centers.size())
            throw ValidationError("plan: forecast width must match category count");
        double sum = 0.0;
        for (double r : s.forecast) {
            if (r < 0) throw ValidationError("plan: forecast entries must be >= 0");
            sum += r;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw ValidationError("plan: forecast must sum to 1");
        for (double c : s.scaled_costs)
            if (c <= 0) throw ValidationError("plan: config costs must be positive");
        s.centers.validate(s.scaled_costs.size());
    }

    // Hulls and the mandatory all-cheapest baseline.
    std::vector<std::vector<std::vector<HullPoint>>> hulls(streams.size());
    double mandatory = 0.0;
    for (size_t v = 0; v < streams.size(); ++v) {
        const StreamPlanInput& s = streams[v];
        hulls[v].resize(s.forecast.size());
        for (size_t c = 0; c < s.forecast.size(); ++c) {
            hulls[v][c] = upper_hull(s.scaled_costs, s.centers.centers[c]);
            mandatory += s.forecast[c] * hulls[v][c].front().cost;
        }
    }
    if (mandatory > budget_core_s + 1e-9)
        throw EngineError("plan: infeasible, budget short by " +
                          std::to_string(mandatory - budget_core_s) +
                          " core-seconds below the all-cheapest assignment");

    // Current hull position per (stream, category), plus a fractional split.
    struct Position {
        size_t index = 0;
        double fraction = 0.0;  // weight already moved to hull[index + 1]
    };
    std::vector<std::vector<Position>> pos(streams.size());
    for (size_t v = 0; v < streams.size(); ++v)
        pos[v].assign(streams[v].forecast.size(), Position{});

    std::vector<UpgradeStep> steps;
    for (size_t v = 0; v < streams.size(); ++v) {
        const StreamPlanInput& s = streams[v];
        for (size_t c = 0; c < s.forecast.size(); ++c) {
            const auto& hull = hulls[v][c];
            const double r = s.forecast[c];
            for (size_t i = 0; i + 1 < hull.size(); ++i) {
                const double dq = hull[i + 1].quality - hull[i].quality;
                const double dc = hull[i + 1].cost - hull[i].cost;
                if (r <= 0.0) {
                    // Zero-frequency category: upgrades are free, take them all.
                    pos[v][c].index = hull.size() - 1;
                    pos[v][c].fraction = 0.0;
                    break;
                }
                steps.push_back({static_cast<int>(v), static_cast<int>(c), i, dq / dc, dc * r,
                                 static_cast<double>(hull[i + 1].config)});
            }
        }
    }

    std::sort(steps.begin(), steps.end(), [](const UpgradeStep& a, const UpgradeStep& b) {
        if (a.ratio != b.ratio) return a.ratio > b.ratio;
        if (a.stream != b.stream) return a.stream < b.stream;
        if (a.category != b.category) return a.category < b.category;
        return a.target_config < b.target_config;
    });

    double remaining = budget_core_s - mandatory;
    double spent = mandatory;
    for (const UpgradeStep& step : steps) {
        if (remaining <= 0.0) break;
        const auto v = static_cast<size_t>(step.stream);
        const auto c = static_cast<size_t>(step.category);
        if (step.cost <= remaining) {
            pos[v][c].index = step.hull_index + 1;
            pos[v][c].fraction = 0.0;
            remaining -= step.cost;
            spent += step.cost;
        } else {
            pos[v][c].index = step.hull_index;
            pos[v][c].fraction = remaining / step.cost;
            spent += remaining;
            remaining = 0.0;
            break;
        }
    }

    std::vector<KnobPlan> plans(streams.size());
    for (size_t v = 0; v < streams.size(); ++v) {
        const StreamPlanInput& s = streams[v];
        KnobPlan& plan = plans[v];
        plan.alpha.assign(s.forecast.size(), std::vector<double>(s.scaled_costs.size(), 0.0));
        for (size_t c = 0; c < s.forecast.size(); ++c) {
            const auto& hull = hulls[v][c];
            const Position& p = pos[v][c];
            const auto lo = static_cast<size_t>(hull[p.index].config);
            if (p.fraction > 0.0) {
                const auto hi = static_cast<size_t>(hull[p.index + 1].config);
                plan.alpha[c][lo] = 1.0 - p.fraction;
                plan.alpha[c][hi] = p.fraction;
            } else {
                plan.alpha[c][lo] = 1.0;
            }
        }
        plan.planned_cost_core_s = spent;  // joint spend; per-stream split not tracked
        plan.validate(budget_core_s);
    }
    return plans;
}

KnobPlan solve_knob_plan(const std::vector<double>& forecast, const ContentCategorySet& centers,
                         const std::vector<double>& scaled_costs, double budget_core_s) {
    std::vector<StreamPlanInput> one(1);
    one[0].forecast = forecast;
    one[0].centers = centers;
    one[0].scaled_costs = scaled_costs;
    return solve_multi_stream_plan(one, budget_core_s)[0];
}

double plan_objective(const KnobPlan& plan, const std::vector<double>& forecast,
                      const ContentCategorySet& centers) {
    double obj = 0.0;
    for (size_t c = 0; c < plan.alpha.size(); ++c)
        for (size_t k = 0; k < plan.alpha[c].size(); ++k)
            obj += plan.alpha[c][k] * forecast[c] * centers.centers[c][k];
    return obj;
}

}  // namespace vetl
