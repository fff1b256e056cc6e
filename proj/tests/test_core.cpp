#include <doctest.h>

#include "vetl/config.hpp"
#include "vetl/rng.hpp"
#include "vetl/types.hpp"

using namespace vetl;

namespace {

TaskGraph graph_of(std::vector<double> runtimes, std::vector<std::pair<int, int>> edges = {}) {
    TaskGraph g;
    for (size_t i = 0; i < runtimes.size(); ++i) {
        TaskNode n;
        n.id = static_cast<int>(i);
        n.onprem_runtime_s = runtimes[i];
        g.nodes.push_back(n);
    }
    g.edges = std::move(edges);
    return g;
}

}  // namespace

TEST_CASE("config: minimal file gets the documented defaults") {
    const std::string text = R"({
        "provision": {
            "onprem_cores": 2,
            "buffer_bytes": 1000000,
            "uplink_bytes_per_s": 1000000,
            "downlink_bytes_per_s": 1000000
        }
    })";
    const AppConfig cfg = parse_config(text);
    CHECK(cfg.provision.cloud_cost_ratio == doctest::Approx(1.8));
    CHECK(cfg.horizon.planned_interval_s == doctest::Approx(172800.0));
    CHECK(cfg.horizon.input_splits == 8);
    CHECK(cfg.offline.category_count == 4);
    CHECK(cfg.segment_duration_s == doctest::Approx(2.0));
}

TEST_CASE("config: zero buffer is a validation error naming the invariant") {
    const std::string text = R"({
        "provision": {
            "onprem_cores": 2,
            "buffer_bytes": 0,
            "uplink_bytes_per_s": 1000000,
            "downlink_bytes_per_s": 1000000
        }
    })";
    CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("buffer_bytes"),
                         ValidationError);
}

TEST_CASE("config: malformed text is a parse error") {
    CHECK_THROWS_AS(parse_config("{ not json"), ValidationError);
}

TEST_CASE("config: dump/parse round trip is field-equal") {
    AppConfig cfg;
    cfg.provision.onprem_cores = 3;
    cfg.provision.buffer_bytes = 123456789;
    cfg.provision.cloud_budget_credits = 17.25;
    cfg.provision.uplink_bytes_per_s = 2.5e6;
    cfg.provision.downlink_bytes_per_s = 7.125e6;
    cfg.provision.cloud_cost_ratio = 2.25;
    cfg.horizon.planned_interval_s = 7200.0;
    cfg.horizon.input_window_s = 14400.0;
    cfg.horizon.input_splits = 6;
    cfg.horizon.switch_period_s = 4.0;
    cfg.offline.n_pre = 111;
    cfg.offline.learning_rate = 0.00325;
    const AppConfig back = parse_config(dump_config(cfg));
    CHECK(back.provision.onprem_cores == cfg.provision.onprem_cores);
    CHECK(back.provision.buffer_bytes == cfg.provision.buffer_bytes);
    CHECK(back.provision.cloud_budget_credits == cfg.provision.cloud_budget_credits);
    CHECK(back.provision.uplink_bytes_per_s == cfg.provision.uplink_bytes_per_s);
    CHECK(back.provision.cloud_cost_ratio == cfg.provision.cloud_cost_ratio);
    CHECK(back.horizon.planned_interval_s == cfg.horizon.planned_interval_s);
    CHECK(back.horizon.input_splits == cfg.horizon.input_splits);
    CHECK(back.offline.n_pre == cfg.offline.n_pre);
    CHECK(back.offline.learning_rate == cfg.offline.learning_rate);
    // And the dump of the reparse is byte-identical.
    CHECK(dump_config(back) == dump_config(cfg));
}

TEST_CASE("cost_of_config sums node runtimes") {
    CHECK(cost_of_config(graph_of({0.10, 0.05})) == doctest::Approx(0.15));
    CHECK(cost_of_config(graph_of({})) == 0.0);
    CHECK(cost_of_config(graph_of({0.2, 0.2, 0.2}, {{0, 1}, {1, 2}})) == doctest::Approx(0.6));
}

TEST_CASE("cost_of_config is additive and ignores edges") {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(1 + rng.next_below(5)), b(1 + rng.next_below(5));
        for (double& v : a) v = rng.next_double();
        for (double& v : b) v = rng.next_double();
        std::vector<double> both = a;
        both.insert(both.end(), b.begin(), b.end());

        TaskGraph joined = graph_of(both);
        // Arbitrary rewiring must not change the cost.
        TaskGraph rewired = joined;
        if (both.size() >= 2) {
            rewired.edges = {{0, static_cast<int>(both.size()) - 1}};
            for (size_t i = 1; i < both.size(); ++i)
                rewired.edges.emplace_back(static_cast<int>(i - 1), static_cast<int>(i));
        }
        CHECK(cost_of_config(joined) ==
              doctest::Approx(cost_of_config(graph_of(a)) + cost_of_config(graph_of(b))));
        CHECK(cost_of_config(rewired) == doctest::Approx(cost_of_config(joined)));
    }
}

TEST_CASE("knob validation") {
    CHECK_THROWS_AS((Knob{"fps", {}}.validate()), ValidationError);
    CHECK_THROWS_AS((Knob{"fps", {"a", "a"}}.validate()), ValidationError);
    CHECK_NOTHROW((Knob{"fps", {"lo", "hi"}}.validate()));
}

TEST_CASE("task graph validation catches cycles and bad edges") {
    TaskGraph cyclic = graph_of({0.1, 0.1}, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(cyclic.validate(), ValidationError);
    TaskGraph bad_edge = graph_of({0.1}, {{0, 3}});
    CHECK_THROWS_AS(bad_edge.validate(), ValidationError);
    TaskGraph ok = graph_of({0.1, 0.1, 0.1}, {{0, 1}, {0, 2}});
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.topological_order() == std::vector<int>{0, 1, 2});
}

TEST_CASE("horizon validation") {
    PlanningHorizon h;
    h.planned_interval_s = 2.0;
    h.switch_period_s = 2.0;
    CHECK_THROWS_AS(h.validate(), ValidationError);
    h.planned_interval_s = 4.0;
    CHECK_NOTHROW(h.validate());
}

TEST_CASE("rng streams are reproducible") {
    Rng a(1234), b(1234);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(1), d(2);
    bool differ = false;
    for (int i = 0; i < 10; ++i) differ = differ || (c.next_u64() != d.next_u64());
    CHECK(differ);
}
