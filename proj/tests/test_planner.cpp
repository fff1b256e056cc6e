#include <doctest.h>

#include <cmath>

#include "oracles/simplex_oracle.hpp"
#include "vetl/planner.hpp"
#include "vetl/rng.hpp"

using namespace vetl;

namespace {

struct Instance {
    std::vector<double> forecast;
    ContentCategorySet centers;
    std::vector<double> costs;
    double budget = 0.0;
};

Instance random_instance(Rng& rng, int max_categories = 3, int max_configs = 4) {
    Instance inst;
    const int n_cat = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(max_categories)));
    const int n_cfg = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(max_configs)));
    inst.forecast.resize(static_cast<size_t>(n_cat));
    double total = 0.0;
    for (double& r : inst.forecast) {
        r = 0.05 + rng.next_double();
        total += r;
    }
    for (double& r : inst.forecast) r /= total;
    inst.centers.centers.assign(static_cast<size_t>(n_cat),
                                std::vector<double>(static_cast<size_t>(n_cfg)));
    for (auto& row : inst.centers.centers)
        for (double& q : row) q = rng.next_double();
    inst.costs.resize(static_cast<size_t>(n_cfg));
    for (double& c : inst.costs) c = 0.1 + 2.0 * rng.next_double();

    double min_cost = 1e18, max_cost = 0.0;
    for (double c : inst.costs) {
        min_cost = std::min(min_cost, c);
        max_cost = std::max(max_cost, c);
    }
    inst.budget = min_cost + rng.next_double() * (max_cost - min_cost + 0.5);
    return inst;
}

}  // namespace

TEST_CASE("compute_budget: on-prem core-seconds plus converted credits") {
    ResourceProvision p;
    p.onprem_cores = 4;
    p.buffer_bytes = 1;
    p.uplink_bytes_per_s = 1;
    p.downlink_bytes_per_s = 1;
    p.cloud_budget_credits = 0.0;
    Prices prices;
    prices.onprem_credits_per_core_s = 1.0;
    CHECK(compute_budget(p, 100.0, prices) == doctest::Approx(400.0));

    p.cloud_cost_ratio = 1.8;
    p.cloud_budget_credits = 18.0;
    CHECK(compute_budget(p, 100.0, prices) == doctest::Approx(410.0));

    p.onprem_cores = 8;
    CHECK(compute_budget(p, 100.0, prices) == doctest::Approx(810.0));
    CHECK_THROWS_AS(compute_budget(p, -1.0, prices), ValidationError);
}

TEST_CASE("solve_knob_plan: single category, single config") {
    ContentCategorySet centers;
    centers.centers = {{0.7}};
    const KnobPlan plan = solve_knob_plan({1.0}, centers, {2.0}, 100.0);
    REQUIRE(plan.alpha.size() == 1);
    CHECK(plan.alpha[0][0] == doctest::Approx(1.0));
}

TEST_CASE("solve_knob_plan: unlimited budget picks each category's best config") {
    ContentCategorySet centers;
    centers.centers = {{0.2, 0.9, 0.5}, {0.4, 0.3, 0.8}};
    const KnobPlan plan =
        solve_knob_plan({0.6, 0.4}, centers, {1.0, 2.0, 3.0}, 1e9);
    CHECK(plan.alpha[0][1] == doctest::Approx(1.0));
    CHECK(plan.alpha[1][2] == doctest::Approx(1.0));
}

TEST_CASE("solve_knob_plan: infeasible budget names the deficit") {
    ContentCategorySet centers;
    centers.centers = {{0.5, 0.9}};
    CHECK_THROWS_WITH_AS(solve_knob_plan({1.0}, centers, {2.0, 4.0}, 1.0),
                         doctest::Contains("short by"), EngineError);
}

TEST_CASE("solve_knob_plan: matches the grid and simplex oracles") {
    Rng rng(515151);
    for (int trial = 0; trial < 60; ++trial) {
        const Instance inst = random_instance(rng);
        KnobPlan plan;
        try {
            plan = solve_knob_plan(inst.forecast, inst.centers, inst.costs, inst.budget);
        } catch (const EngineError&) {
            // Infeasible draw; the oracle LP must agree.
            std::vector<StreamPlanInput> s(1);
            s[0] = {inst.forecast, inst.centers, inst.costs};
            CHECK_THROWS_AS((void)testing::simplex_plan_objective(s, inst.budget), EngineError);
            continue;
        }
        const double objective = plan_objective(plan, inst.forecast, inst.centers);

        std::vector<StreamPlanInput> s(1);
        s[0] = {inst.forecast, inst.centers, inst.costs};
        const double lp = testing::simplex_plan_objective(s, inst.budget);
        CHECK(objective == doctest::Approx(lp).epsilon(1e-6));

        const double grid = testing::grid_plan_objective(inst.forecast, inst.centers,
                                                         inst.costs, inst.budget);
        CHECK(objective >= grid - 1e-3);
    }
}

TEST_CASE("solve_knob_plan: scale invariance of the argmax") {
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const Instance inst = random_instance(rng);
        ContentCategorySet scaled = inst.centers;
        for (auto& row : scaled.centers)
            for (double& q : row) q *= 3.25;
        KnobPlan a, b;
        try {
            a = solve_knob_plan(inst.forecast, inst.centers, inst.costs, inst.budget);
            b = solve_knob_plan(inst.forecast, scaled, inst.costs, inst.budget);
        } catch (const EngineError&) {
            continue;
        }
        for (size_t c = 0; c < a.alpha.size(); ++c)
            for (size_t k = 0; k < a.alpha[c].size(); ++k)
                CHECK(a.alpha[c][k] == doctest::Approx(b.alpha[c][k]).epsilon(1e-9));
    }
}

TEST_CASE("solve_knob_plan: objective nondecreasing in budget") {
    Rng rng(123);
    const Instance inst = random_instance(rng, 3, 4);
    double last = -1.0;
    for (double budget = 0.5; budget < 6.0; budget += 0.25) {
        try {
            const KnobPlan plan =
                solve_knob_plan(inst.forecast, inst.centers, inst.costs, budget);
            const double obj = plan_objective(plan, inst.forecast, inst.centers);
            CHECK(obj >= last - 1e-12);
            last = obj;
        } catch (const EngineError&) {
            CHECK(last == -1.0);  // only the smallest budgets may be infeasible
        }
    }
}

TEST_CASE("solve_knob_plan: at most one category splits across two configs") {
    Rng rng(999);
    for (int trial = 0; trial < 40; ++trial) {
        const Instance inst = random_instance(rng);
        KnobPlan plan;
        try {
            plan = solve_knob_plan(inst.forecast, inst.centers, inst.costs, inst.budget);
        } catch (const EngineError&) {
            continue;
        }
        int split_categories = 0;
        int fractional_entries = 0;
        for (const auto& row : plan.alpha) {
            int nonzero = 0;
            for (double a : row) {
                if (a > 1e-12) ++nonzero;
                if (a > 1e-12 && a < 1.0 - 1e-12) ++fractional_entries;
            }
            CHECK(nonzero <= 2);
            if (nonzero == 2) ++split_categories;
        }
        CHECK(split_categories <= 1);
        CHECK(fractional_entries <= 2);
    }
}

TEST_CASE("multi-stream: single stream reduces to the plain solver") {
    Rng rng(246);
    const Instance inst = random_instance(rng);
    std::vector<StreamPlanInput> streams(1);
    streams[0] = {inst.forecast, inst.centers, inst.costs};
    try {
        const KnobPlan single =
            solve_knob_plan(inst.forecast, inst.centers, inst.costs, inst.budget);
        const std::vector<KnobPlan> joint = solve_multi_stream_plan(streams, inst.budget);
        REQUIRE(joint.size() == 1);
        for (size_t c = 0; c < single.alpha.size(); ++c)
            CHECK(single.alpha[c] == joint[0].alpha[c]);
    } catch (const EngineError&) {
        CHECK_THROWS_AS((void)solve_multi_stream_plan(streams, inst.budget), EngineError);
    }
}

TEST_CASE("multi-stream: identical streams at doubled budget mirror the single plan") {
    // Budget chosen so the single-stream optimum lands exactly on a full
    // upgrade boundary; symmetry then carries to the pooled solve.
    ContentCategorySet centers;
    centers.centers = {{0.2, 0.6, 0.9}};
    const std::vector<double> costs = {1.0, 2.0, 4.0};
    const double budget = 2.0;  // exactly the middle configuration
    const KnobPlan single = solve_knob_plan({1.0}, centers, costs, budget);
    CHECK(single.alpha[0][1] == doctest::Approx(1.0));

    std::vector<StreamPlanInput> streams(2);
    streams[0] = {{1.0}, centers, costs};
    streams[1] = {{1.0}, centers, costs};
    const std::vector<KnobPlan> joint = solve_multi_stream_plan(streams, 2.0 * budget);
    for (const KnobPlan& plan : joint)
        for (size_t k = 0; k < costs.size(); ++k)
            CHECK(plan.alpha[0][k] == doctest::Approx(single.alpha[0][k]));
}

TEST_CASE("multi-stream: better upgrade ratios saturate first") {
    // Stream A's upgrade gains far more quality per core-second than B's.
    ContentCategorySet a_centers, b_centers;
    a_centers.centers = {{0.1, 0.9}, {0.2, 0.8}};
    b_centers.centers = {{0.5, 0.6}, {0.5, 0.55}};
    std::vector<StreamPlanInput> streams(2);
    streams[0] = {{0.5, 0.5}, a_centers, {1.0, 2.0}};
    streams[1] = {{0.5, 0.5}, b_centers, {1.0, 2.0}};

    // Base cost is 1.0 per stream; every full upgrade costs 0.5.
    const std::vector<KnobPlan> joint = solve_multi_stream_plan(streams, 3.0);
    CHECK(joint[0].alpha[0][1] == doctest::Approx(1.0));
    CHECK(joint[0].alpha[1][1] == doctest::Approx(1.0));
    CHECK(joint[1].alpha[0][1] == doctest::Approx(0.0));
    CHECK(joint[1].alpha[1][1] == doctest::Approx(0.0));

    // And the pooled objective matches the joint LP oracle on random budgets.
    Rng rng(888);
    for (int trial = 0; trial < 10; ++trial) {
        const double budget = 2.0 + 2.1 * rng.next_double();
        const std::vector<KnobPlan> plans = solve_multi_stream_plan(streams, budget);
        double objective = 0.0;
        for (size_t v = 0; v < streams.size(); ++v)
            objective += plan_objective(plans[v], streams[v].forecast, streams[v].centers);
        CHECK(objective ==
              doctest::Approx(testing::simplex_plan_objective(streams, budget)).epsilon(1e-6));
    }
}

TEST_CASE("scale_costs_to_interval multiplies by expected segments") {
    const std::vector<double> scaled = scale_costs_to_interval({0.5, 1.0}, 3600.0, 2.0);
    CHECK(scaled[0] == doctest::Approx(900.0));
    CHECK(scaled[1] == doctest::Approx(1800.0));
}
