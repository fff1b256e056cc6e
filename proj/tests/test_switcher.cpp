#include <doctest.h>

#include <cmath>

#include "vetl/offline.hpp"
#include "vetl/rng.hpp"
#include "vetl/switcher.hpp"
#include "vetl/workload.hpp"

using namespace vetl;

namespace {

ContentCategorySet centers_from_columns(std::vector<std::vector<double>> centers) {
    ContentCategorySet set;
    set.centers = std::move(centers);
    return set;
}

Placement make_placement(size_t nodes, uint64_t mask, double runtime, double cost) {
    Placement p;
    p.labels.resize(nodes);
    for (size_t i = 0; i < nodes; ++i)
        p.labels[i] = (mask >> i) & 1 ? Site::Cloud : Site::OnPrem;
    p.estimated_runtime_s = runtime;
    p.cloud_cost_credits = cost;
    return p;
}

}  // namespace

TEST_CASE("classify_category: exact hit and nearest distance") {
    const ContentCategorySet centers =
        centers_from_columns({{0.2, 0.5}, {0.8, 0.9}});
    CHECK(classify_category(0.8, 0, centers) == 1);
    CHECK(classify_category(0.45, 0, centers) == 0);  // 0.25 beats 0.35
    // Tie: exactly between 0.2 and 0.8 goes to the lower category id.
    CHECK(classify_category(0.5, 0, centers) == 0);
}

TEST_CASE("classify_category: agreement with full-vector nearest center") {
    const WorkloadModel m = preset_workload_model("default");
    const Trace t = generate_trace(m, 2.0 * 3000, 21);
    const auto configs = m.all_configs();
    ContentCategorySet centers;
    for (const CategorySpec& c : m.categories) centers.centers.push_back(c.mean_quality);
    std::sort(centers.centers.begin(), centers.centers.end());

    const int k_cur = 0;  // the cheapest column
    int64_t agree = 0;
    for (const Segment& s : t.segments) {
        const int one_dim =
            classify_category(oracle_quality(configs[static_cast<size_t>(k_cur)], s, m),
                              k_cur, centers);
        // Full quality vector, nearest center in L2.
        const std::vector<double> qv = quality_vector(s, configs, m).values;
        int full = 0;
        double best = 1e18;
        for (int c = 0; c < centers.category_count(); ++c) {
            double d2 = 0.0;
            for (size_t k = 0; k < qv.size(); ++k) {
                const double d = qv[k] - centers.centers[static_cast<size_t>(c)][k];
                d2 += d * d;
            }
            if (d2 < best) {
                best = d2;
                full = c;
            }
        }
        if (one_dim == full) ++agree;
    }
    const double agreement =
        static_cast<double>(agree) / static_cast<double>(t.segments.size());
    CHECK(agreement >= 0.95);
}

TEST_CASE("pick_config: deficit argmax") {
    CHECK(pick_config({0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}) == 2);
    CHECK(pick_config({0.5, 0.5}, {1.0, 0.0}) == 1);
    // Ties resolve to the lower index.
    CHECK(pick_config({0.5, 0.5}, {0.0, 0.0}) == 0);
}

TEST_CASE("pick_config: realized histogram tracks the plan") {
    const std::vector<double> plan = {0.3, 0.7};
    SwitcherState state = SwitcherState::make(1, 2);
    for (int i = 0; i < 1000; ++i) {
        const int k = pick_config(plan, state.realized_histogram(0));
        DecisionRecord rec;
        rec.config_index = k;
        state = record_outcome(std::move(state), 2.0 * i, 0, rec);
    }
    const std::vector<double> realized = state.realized_histogram(0);
    CHECK(std::abs(realized[0] - plan[0]) <= 0.05);
    CHECK(std::abs(realized[1] - plan[1]) <= 0.05);
    CHECK(state.decisions.size() == 1000);
}

TEST_CASE("placement_admissible: one-segment lookahead projection") {
    const ArrivalModel arrival{250000.0, 2.0};
    const Placement fast = make_placement(1, 0, 1.5, 0.0);
    const Placement slow = make_placement(1, 0, 4.0, 0.0);
    // Faster than real time: admissible even at capacity.
    CHECK(placement_admissible(fast, {1e6, 1e6}, arrival, 0.0));
    // Two seconds over real time projects half a segment of growth.
    CHECK(placement_admissible(slow, {1e6 - 500001.0, 1e6}, arrival, 0.0));
    CHECK_FALSE(placement_admissible(slow, {1e6 - 499999.0, 1e6}, arrival, 0.0));
    // Credit gate.
    const Placement cloudy = make_placement(1, 1, 1.0, 2.0);
    CHECK(placement_admissible(cloudy, {0.0, 1e6}, arrival, 2.0));
    CHECK_FALSE(placement_admissible(cloudy, {0.0, 1e6}, arrival, 1.0));
}

TEST_CASE("pick_placement: cheapest admissible, fallback chain, guaranteed floor") {
    // Three configs by ascending cost; quality order equals cost order.
    const ContentCategorySet centers =
        centers_from_columns({{0.3, 0.6, 0.9}});
    const ArrivalModel arrival{250000.0, 2.0};
    // Per config: all-on-prem first, then a faster cloud placement. The two
    // pricier configs run slower than real time on-prem.
    std::vector<std::vector<Placement>> placements = {
        {make_placement(2, 0, 0.5, 0.0)},
        {make_placement(2, 0, 2.5, 0.0), make_placement(2, 1, 1.2, 0.5)},
        {make_placement(2, 0, 3.0, 0.0), make_placement(2, 1, 1.9, 1.0)},
    };

    SUBCASE("empty buffer: the wanted config's on-prem placement wins") {
        const PlacementChoice c =
            pick_placement(2, placements, {0.0, 4e6}, arrival, 10.0, centers, 0);
        CHECK(c.config_index == 2);
        CHECK(c.placement_index == 0);
        CHECK(placements[2][0].cloud_cost_credits == 0.0);
    }
    SUBCASE("full buffer with credits: cheapest real-time cloud placement") {
        const PlacementChoice c =
            pick_placement(2, placements, {4e6, 4e6}, arrival, 10.0, centers, 0);
        CHECK(c.config_index == 2);
        CHECK(c.placement_index == 1);
    }
    SUBCASE("full buffer, no credits: falls through to the cheapest config") {
        const PlacementChoice c =
            pick_placement(2, placements, {4e6, 4e6}, arrival, 0.0, centers, 0);
        CHECK(c.config_index == 0);
        CHECK(c.placement_index == 0);
    }
    SUBCASE("cloud disallowed: skips cloud placements entirely") {
        const PlacementChoice c = pick_placement(2, placements, {4e6, 4e6}, arrival, 10.0,
                                                 centers, 0, /*cloud_allowed=*/false);
        CHECK(c.config_index == 0);
        CHECK(placements[static_cast<size_t>(c.config_index)]
                        [static_cast<size_t>(c.placement_index)]
                            .bitmask() == 0);
    }
    SUBCASE("fallback order follows quality on the current category") {
        // Make the mid config the best for category 0; from it, the chain
        // must step down to config 0, not up to config 2.
        const ContentCategorySet flipped =
            centers_from_columns({{0.3, 0.9, 0.6}});
        const PlacementChoice c =
            pick_placement(1, placements, {4e6, 4e6}, arrival, 0.0, flipped, 0);
        CHECK(c.config_index == 0);
    }
}

TEST_CASE("record_outcome: counts, normalization, and log recount") {
    SwitcherState state = SwitcherState::make(2, 3);
    DecisionRecord rec;
    rec.config_index = 1;
    state = record_outcome(std::move(state), 0.0, 0, rec);
    CHECK(state.counts[0][1] == 1);
    CHECK(state.realized_histogram(0) == std::vector<double>{0.0, 1.0, 0.0});
    CHECK(state.realized_histogram(1) == std::vector<double>{0.0, 0.0, 0.0});

    Rng rng(3);
    for (int i = 1; i < 200; ++i) {
        DecisionRecord r2;
        r2.config_index = static_cast<int>(rng.next_below(3));
        r2.t = 2.0 * i;
        state = record_outcome(std::move(state), 2.0 * i, static_cast<int>(rng.next_below(2)),
                               r2);
    }
    // The histogram view normalizes per category.
    for (int c = 0; c < 2; ++c) {
        const std::vector<double> h = state.realized_histogram(c);
        double total = 0.0;
        for (double v : h) total += v;
        CHECK(std::abs(total - 1.0) < 1e-9);
    }
    // The category log recounts to the per-category totals.
    std::vector<int64_t> recount(2, 0);
    for (const auto& [t, cat] : state.category_log) ++recount[static_cast<size_t>(cat)];
    for (int c = 0; c < 2; ++c) {
        int64_t total = 0;
        for (int64_t v : state.counts[static_cast<size_t>(c)]) total += v;
        CHECK(total == recount[static_cast<size_t>(c)]);
    }
}
