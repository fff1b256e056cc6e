#include "vetl/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

#include "vetl/placement_sim.hpp"
#include "vetl/rng.hpp"

namespace vetl {

AblationMode ablation_mode_from_string(const std::string& name) {
    if (name == "none") return AblationMode::None;
    if (name == "buffer_only") return AblationMode::BufferOnly;
    if (name == "cloud_only") return AblationMode::CloudOnly;
    if (name == "both") return AblationMode::Both;
    throw ValidationError("unknown ablation mode '" + name + "'");
}

std::string to_string(AblationMode mode) {
    switch (mode) {
        case AblationMode::None: return "none";
        case AblationMode::BufferOnly: return "buffer_only";
        case AblationMode::CloudOnly: return "cloud_only";
        case AblationMode::Both: return "both";
    }
    return "?";
}

namespace {

constexpr double kTimelineBinS = 3600.0;

struct TimelineBuilder {
    std::vector<TimelinePoint> bins;
    std::vector<int64_t> counts;

    void record(double t, double work_core_s, double buffer_bytes, double credits_fraction,
                double quality) {
        const auto bin = static_cast<size_t>(t / kTimelineBinS);
        while (bins.size() <= bin) {
            TimelinePoint p;
            p.t = static_cast<double>(bins.size()) * kTimelineBinS;
            bins.push_back(p);
            counts.push_back(0);
        }
        TimelinePoint& p = bins[bin];
        p.work_core_s_per_s += work_core_s;
        p.buffer_bytes = std::max(p.buffer_bytes, buffer_bytes);
        p.credits_fraction = credits_fraction;
        p.quality += quality;
        ++counts[bin];
    }

    std::vector<TimelinePoint> finish() {
        for (size_t i = 0; i < bins.size(); ++i) {
            bins[i].work_core_s_per_s /= kTimelineBinS;
            if (counts[i] > 0) bins[i].quality /= static_cast<double>(counts[i]);
        }
        return std::move(bins);
    }
};

void check_trace_uniformity(const Trace& trace, const FittedModel& fitted) {
    if (trace.segments.empty()) throw ValidationError("engine: empty trace");
    if (trace.model_id != fitted.workload_model_id)
        throw ValidationError("engine: trace workload '" + trace.model_id +
                              "' does not match the fitted model '" +
                              fitted.workload_model_id + "'");
    for (const Segment& s : trace.segments) {
        if (s.duration_s != fitted.segment_duration_s ||
            s.size_bytes != fitted.segment_size_bytes)
            throw ValidationError(
                "engine: trace segments must be uniform and match the fitted model");
    }
}

double all_onprem_runtime(const std::vector<Placement>& placements) {
    for (const Placement& p : placements)
        if (p.bitmask() == 0) return p.estimated_runtime_s;
    throw EngineError("engine: configuration lacks an all-on-prem placement");
}

// Forecaster input: input_splits histograms over the trailing input window of
// the classified-category history. Chunks that predate the run are uniform;
// a chunk clipped by the current decision loses at most its last segment.
std::vector<double> assemble_forecast_input(const std::vector<int>& category_history,
                                            int64_t boundary_seg, int64_t chunk_segs,
                                            int splits, int n_cat) {
    const auto available = static_cast<int64_t>(category_history.size());
    std::vector<double> input;
    input.reserve(static_cast<size_t>(splits * n_cat));
    for (int split = 0; split < splits; ++split) {
        const int64_t begin = boundary_seg - static_cast<int64_t>(splits - split) * chunk_segs;
        const int64_t end = std::min(begin + chunk_segs, available);
        std::vector<double> h(static_cast<size_t>(n_cat),
                              1.0 / static_cast<double>(n_cat));
        if (begin >= 0 && end > begin) {
            std::fill(h.begin(), h.end(), 0.0);
            for (int64_t i = begin; i < end; ++i)
                h[static_cast<size_t>(category_history[static_cast<size_t>(i)])] += 1.0;
            for (double& v : h) v /= static_cast<double>(end - begin);
        }
        input.insert(input.end(), h.begin(), h.end());
    }
    return input;
}

// Sliding-window samples over the already-classified history whose label
// windows end inside the most recent planned interval, for online
// fine-tuning at plan boundaries.
std::vector<TrainSample> last_interval_samples(const std::vector<int>& category_history,
                                               int64_t chunk_segs, int splits,
                                               int64_t out_segs, int n_cat) {
    const auto n = static_cast<int64_t>(category_history.size());
    const int64_t in_segs = chunk_segs * splits;
    const int64_t stride_segs = std::max<int64_t>(1, out_segs / 12);
    std::vector<TrainSample> samples;
    auto histogram = [&](int64_t begin, int64_t end) {
        std::vector<double> h(static_cast<size_t>(n_cat), 0.0);
        for (int64_t i = begin; i < end; ++i)
            h[static_cast<size_t>(category_history[static_cast<size_t>(i)])] += 1.0;
        for (double& v : h) v /= static_cast<double>(end - begin);
        return h;
    };
    const int64_t first_t0 = std::max(in_segs, n - 2 * out_segs + 1);
    for (int64_t t0 = first_t0; t0 + out_segs <= n; t0 += stride_segs) {
        TrainSample s;
        for (int split = 0; split < splits; ++split) {
            const int64_t begin = t0 - in_segs + split * chunk_segs;
            const std::vector<double> h = histogram(begin, begin + chunk_segs);
            s.input.insert(s.input.end(), h.begin(), h.end());
        }
        s.label = histogram(t0, t0 + out_segs);
        samples.push_back(std::move(s));
    }
    return samples;
}

}  // namespace

MetricsReport run_ingestion(const Trace& trace, const FittedModel& fitted,
                            const WorkloadModel& model, const ResourceProvision& provision_in,
                            const Prices& prices, const PlanningHorizon& horizon,
                            const EngineOptions& options) {
    fitted.validate();
    check_trace_uniformity(trace, fitted);
    provision_in.validate();
    prices.validate();
    horizon.validate();
    if (model.model_id != fitted.workload_model_id)
        throw ValidationError("engine: workload model does not match the fitted model");
    if (fitted.onprem_cores != provision_in.onprem_cores ||
        fitted.uplink_bytes_per_s != provision_in.uplink_bytes_per_s ||
        fitted.downlink_bytes_per_s != provision_in.downlink_bytes_per_s)
        throw ValidationError(
            "engine: provision does not match the one the model file was fitted for");
    if (fitted.cloud_invocation_credits != prices.cloud_invocation_credits ||
        fitted.egress_credits_per_byte != prices.egress_credits_per_byte)
        throw ValidationError("engine: prices do not match the fitted model");
    if (std::abs(horizon.planned_interval_s - fitted.planned_interval_s) >
        fitted.segment_duration_s)
        throw ValidationError(
            "engine: planned interval does not match the fitted forecaster horizon");

    ResourceProvision provision = provision_in;
    const bool cloud_allowed = options.mode != AblationMode::BufferOnly;
    if (options.mode == AblationMode::BufferOnly) provision.cloud_budget_credits = 0.0;
    if (options.mode == AblationMode::CloudOnly)
        provision.buffer_bytes = fitted.segment_size_bytes;
    if (options.mode == AblationMode::None)
        throw ValidationError("engine: mode 'none' runs as a static baseline");

    const double d = fitted.segment_duration_s;
    const auto s_bytes = static_cast<double>(fitted.segment_size_bytes);
    const double rate = s_bytes / d;
    const auto buffer_capacity = static_cast<double>(provision.buffer_bytes);
    const auto n_segments = static_cast<int64_t>(trace.segments.size());
    const int n_cat = fitted.category_count();
    const auto n_cfg = static_cast<int>(fitted.configs.size());

    if (provision.buffer_bytes < fitted.segment_size_bytes)
        throw ValidationError("engine: buffer must hold at least one segment");
    // Startup guarantee behind the switcher's final fallback (never mid-run).
    if (all_onprem_runtime(fitted.placements.front()) > d)
        throw ValidationError(
            "engine: provisioning invalid, the cheapest configuration cannot keep up");

    const int64_t batch =
        std::max<int64_t>(1, static_cast<int64_t>(std::llround(horizon.switch_period_s / d)));
    const int64_t chunk_segs = std::max<int64_t>(
        1, static_cast<int64_t>(
               std::llround(fitted.input_window_s / fitted.input_splits / d)));
    const auto interval_segs =
        static_cast<int64_t>(std::llround(fitted.planned_interval_s / d));
    const double interval_s = static_cast<double>(interval_segs) * d;
    const double interval_budget_core_s = compute_budget(provision, interval_s, prices);
    const std::vector<double> scaled_costs =
        scale_costs_to_interval(fitted.config_cost_core_s, interval_s, d);

    ForecastModel forecaster = fitted.forecaster;
    std::vector<int> category_history;
    category_history.reserve(static_cast<size_t>(n_segments));

    MetricsReport report;
    TimelineBuilder timeline;
    SwitcherState sw = SwitcherState::make(n_cat, n_cfg);

    KnobPlan plan;
    std::vector<double> current_forecast;
    int64_t next_boundary_seg = 0;
    int plan_index = -1;

    double occ = 0.0;
    double t_free = 0.0;
    double credits_remaining = 0.0;
    double credits_spent_interval = 0.0;
    double qual_star = std::numeric_limits<double>::quiet_NaN();
    int k_cur = 0;
    bool have_quality = false;

    const ArrivalModel arrival{rate, d};

    auto check_buffer = [&](double t) {
        if (occ > buffer_capacity)
            throw EngineError("engine: buffer bound violated at t=" + std::to_string(t));
        report.buffer_high_water_bytes = std::max(report.buffer_high_water_bytes, occ);
    };

    int64_t j = 0;
    while (j < n_segments) {
        const double arrival_t = static_cast<double>(j + 1) * d;
        const double t_dec = std::max(t_free, arrival_t);

        // Plan boundaries crossed by this decision time (plan 0 at t = 0).
        while (plan_index < 0 ||
               (t_dec >= static_cast<double>(next_boundary_seg) * d &&
                next_boundary_seg <= n_segments)) {
            const int64_t boundary_seg = next_boundary_seg;
            ++plan_index;
            if (options.fine_tune && plan_index > 0) {
                const std::vector<TrainSample> recent =
                    last_interval_samples(category_history, chunk_segs, fitted.input_splits,
                                          interval_segs, n_cat);
                TrainOptions ft;
                ft.epochs = 1;
                ft.seed = mix_seeds(options.seed, static_cast<uint64_t>(plan_index));
                forecaster = fine_tune(forecaster, recent, ft);
            }
            current_forecast = forecaster.predict(assemble_forecast_input(
                category_history, boundary_seg, chunk_segs, fitted.input_splits, n_cat));
            plan = solve_knob_plan(current_forecast, fitted.centers, scaled_costs,
                                   interval_budget_core_s);
            plan.interval_start_s = static_cast<double>(boundary_seg) * d;
            plan.interval_end_s = plan.interval_start_s + interval_s;
            report.plans.push_back(plan);
            credits_remaining = provision.cloud_budget_credits;
            credits_spent_interval = 0.0;
            for (auto& row : sw.counts) std::fill(row.begin(), row.end(), 0);
            next_boundary_seg += interval_segs;
        }

        // Classify, realize the plan, and pick a buffer-safe placement.
        int c_cur;
        if (options.no_type_b) {
            c_cur = classify_category(
                oracle_quality(fitted.configs[static_cast<size_t>(k_cur)],
                               trace.segments[static_cast<size_t>(j)], model),
                k_cur, fitted.centers);
        } else if (have_quality) {
            c_cur = classify_category(qual_star, k_cur, fitted.centers);
        } else {
            c_cur = static_cast<int>(std::max_element(current_forecast.begin(),
                                                      current_forecast.end()) -
                                     current_forecast.begin());
        }
        const int k_next = pick_config(plan.alpha[static_cast<size_t>(c_cur)],
                                       sw.realized_histogram(c_cur));

        const int64_t batch_end = std::min(n_segments, j + batch);
        PlacementChoice choice{-1, -1};
        for (; j < batch_end; ++j) {
            const double seg_arrival = static_cast<double>(j + 1) * d;
            const double t_j = std::max(t_free, seg_arrival);
            if (t_free <= seg_arrival) occ = s_bytes;  // idle: only segment j buffered
            check_buffer(t_j);

            const BufferState buffer{occ, buffer_capacity};
            if (choice.config_index < 0 ||
                !placement_admissible(
                    fitted.placements[static_cast<size_t>(choice.config_index)]
                                     [static_cast<size_t>(choice.placement_index)],
                    buffer, arrival, credits_remaining)) {
                choice = pick_placement(k_next, fitted.placements, buffer, arrival,
                                        credits_remaining, fitted.centers, c_cur,
                                        cloud_allowed);
            }
            const Placement& placement =
                fitted.placements[static_cast<size_t>(choice.config_index)]
                                 [static_cast<size_t>(choice.placement_index)];
            const KnobConfiguration& config =
                fitted.configs[static_cast<size_t>(choice.config_index)];
            const double runtime = placement.estimated_runtime_s;

            credits_remaining -= placement.cloud_cost_credits;
            credits_spent_interval += placement.cloud_cost_credits;
            if (credits_remaining < -1e-9)
                throw EngineError("engine: credit ledger went negative");
            report.cloud_credits_spent += placement.cloud_cost_credits;

            const double quality =
                oracle_quality(config, trace.segments[static_cast<size_t>(j)], model);
            const double work =
                fitted.config_cost_core_s[static_cast<size_t>(choice.config_index)];
            report.total_quality += quality;
            report.total_work_core_s += work;
            ++report.decision_count;

            DecisionRecord rec;
            rec.t = t_j;
            rec.category = c_cur;
            rec.config_index = choice.config_index;
            rec.placement_mask = placement.bitmask();
            rec.buffer_bytes = occ;
            rec.credits_spent = credits_spent_interval;
            rec.quality = quality;
            sw.counts[static_cast<size_t>(c_cur)][static_cast<size_t>(choice.config_index)] +=
                1;
            sw.category_log.emplace_back(trace.segments[static_cast<size_t>(j)].start_s,
                                         c_cur);
            if (options.record_decisions) report.decisions.push_back(rec);
            category_history.push_back(c_cur);

            timeline.record(t_j, work, occ, provision.cloud_budget_credits > 0
                                                ? credits_spent_interval /
                                                      provision.cloud_budget_credits
                                                : 0.0,
                            quality);

            // Occupancy at the completion event; the admission predicate
            // bounds exactly this expression.
            occ += (runtime - d) * rate;
            t_free = t_j + runtime;
            check_buffer(t_free);

            qual_star = quality;
            k_cur = choice.config_index;
            have_quality = true;
        }
    }

    report.timeline = timeline.finish();
    return report;
}

MetricsReport run_static_baseline(const Trace& trace, const KnobConfiguration& config,
                                  const WorkloadModel& model,
                                  const ResourceProvision& provision) {
    if (trace.segments.empty()) throw ValidationError("engine: empty trace");
    provision.validate();
    for (const Segment& s : trace.segments)
        if (s.duration_s != trace.segments.front().duration_s ||
            s.size_bytes != trace.segments.front().size_bytes)
            throw ValidationError("engine: trace segments must be uniform");
    const TaskGraph graph = model.graph_for(config);
    const Placement placement = [&] {
        Placement p = Placement::all_onprem(graph.nodes.size());
        p.estimated_runtime_s =
            estimate_runtime(graph, p, provision.onprem_cores, provision.uplink_bytes_per_s,
                             provision.downlink_bytes_per_s);
        return p;
    }();
    const double runtime = placement.estimated_runtime_s;
    const double work = cost_of_config(graph);

    const double d = trace.segments.front().duration_s;
    const auto s_bytes = static_cast<double>(trace.segments.front().size_bytes);
    const double rate = s_bytes / d;
    const auto capacity = static_cast<double>(provision.buffer_bytes);

    MetricsReport report;
    TimelineBuilder timeline;
    double occ = 0.0;
    double t_free = 0.0;
    for (const Segment& seg : trace.segments) {
        const double seg_arrival = (static_cast<double>(seg.index) + 1.0) * d;
        const double t_j = std::max(t_free, seg_arrival);
        if (t_free <= seg_arrival) occ = s_bytes;
        const double projected = occ + std::max(0.0, runtime - d) * rate;
        if (occ > capacity || projected > capacity) {
            report.infeasible = true;
            report.infeasible_at_s = t_j;
            break;
        }
        const double quality = oracle_quality(config, seg, model);
        report.total_quality += quality;
        report.total_work_core_s += work;
        ++report.decision_count;
        report.buffer_high_water_bytes = std::max(report.buffer_high_water_bytes, occ);
        timeline.record(t_j, work, occ, 0.0, quality);
        occ += (runtime - d) * rate;
        t_free = t_j + runtime;
        report.buffer_high_water_bytes = std::max(report.buffer_high_water_bytes, occ);
    }
    report.timeline = timeline.finish();
    return report;
}

MetricsReport run_optimum_baseline(const Trace& trace, const WorkloadModel& model,
                                   double work_budget_core_s) {
    if (trace.segments.empty()) throw ValidationError("engine: empty trace");
    const auto configs = model.all_configs();
    std::vector<double> cost(configs.size());
    for (size_t i = 0; i < configs.size(); ++i)
        cost[i] = cost_of_config(model.graph_for(configs[i]));

    struct Step {
        int64_t segment;
        size_t hull_index;
        double ratio;
        double dq;
        double dc;
    };

    const auto n = static_cast<int64_t>(trace.segments.size());
    std::vector<std::vector<std::pair<double, double>>> hulls(static_cast<size_t>(n));
    std::vector<std::vector<double>> hull_quality(static_cast<size_t>(n));
    std::vector<Step> steps;
    double base_cost = 0.0;
    double base_quality = 0.0;

    for (int64_t si = 0; si < n; ++si) {
        const Segment& seg = trace.segments[static_cast<size_t>(si)];
        // Upper concave hull over (cost, realized quality).
        std::vector<std::pair<double, double>> pts(configs.size());
        for (size_t k = 0; k < configs.size(); ++k)
            pts[k] = {cost[k], oracle_quality(configs[k], seg, model)};
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second > b.second;
        });
        std::vector<std::pair<double, double>> hull;
        for (const auto& p : pts) {
            if (!hull.empty() && p.second <= hull.back().second) continue;
            while (hull.size() >= 2) {
                const auto& b = hull[hull.size() - 1];
                const auto& a = hull[hull.size() - 2];
                if ((p.second - b.second) * (b.first - a.first) >=
                    (b.second - a.second) * (p.first - b.first))
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(p);
        }
        base_cost += hull.front().first;
        base_quality += hull.front().second;
        for (size_t i = 0; i + 1 < hull.size(); ++i) {
            const double dq = hull[i + 1].second - hull[i].second;
            const double dc = hull[i + 1].first - hull[i].first;
            steps.push_back({si, i, dq / dc, dq, dc});
        }
        hulls[static_cast<size_t>(si)] = std::move(hull);
    }

    std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) {
        if (a.ratio != b.ratio) return a.ratio > b.ratio;
        if (a.segment != b.segment) return a.segment < b.segment;
        return a.hull_index < b.hull_index;
    });

    MetricsReport report;
    report.decision_count = n;
    if (work_budget_core_s < base_cost) {
        report.infeasible = true;  // even the all-cheapest assignment overshoots
        report.infeasible_at_s = 0.0;
    }
    double remaining = std::max(0.0, work_budget_core_s - base_cost);
    double quality = base_quality;
    double used = base_cost;
    std::vector<size_t> position(static_cast<size_t>(n), 0);
    for (const Step& step : steps) {
        if (position[static_cast<size_t>(step.segment)] != step.hull_index) continue;
        if (step.dc > remaining) continue;  // 0-1: skip and keep scanning
        remaining -= step.dc;
        used += step.dc;
        quality += step.dq;
        position[static_cast<size_t>(step.segment)] = step.hull_index + 1;
    }
    report.total_quality = quality;
    report.total_work_core_s = used;
    return report;
}

MetricsReport run_ablation(const Trace& trace, const FittedModel& fitted,
                           const WorkloadModel& model, const ResourceProvision& provision,
                           const Prices& prices, const PlanningHorizon& horizon,
                           AblationMode mode, const EngineOptions& options) {
    if (mode == AblationMode::None) {
        // Best configuration that runs in real time fully on-prem, used
        // statically; amounts to never switching.
        const double d = fitted.segment_duration_s;
        int best = 0;
        double best_quality = -1.0;
        for (size_t k = 0; k < fitted.configs.size(); ++k) {
            if (all_onprem_runtime(fitted.placements[k]) > d) continue;
            double mean = 0.0;
            for (const auto& center : fitted.centers.centers) mean += center[k];
            mean /= static_cast<double>(fitted.centers.centers.size());
            if (mean > best_quality) {
                best_quality = mean;
                best = static_cast<int>(k);
            }
        }
        return run_static_baseline(trace, fitted.configs[static_cast<size_t>(best)], model,
                                   provision);
    }
    EngineOptions opts = options;
    opts.mode = mode;
    return run_ingestion(trace, fitted, model, provision, prices, horizon, opts);
}

std::vector<MetricsReport> run_multi_ingestion(const std::vector<StreamSetup>& streams,
                                               const ResourceProvision& provision,
                                               const Prices& prices,
                                               const PlanningHorizon& horizon,
                                               const EngineOptions& options) {
    if (streams.empty()) throw ValidationError("engine: at least one stream required");
    provision.validate();
    prices.validate();
    horizon.validate();
    const auto n_streams = streams.size();
    const int fair_cores = provision.onprem_cores / static_cast<int>(n_streams);
    if (fair_cores < 1)
        throw ValidationError("engine: fewer cores than streams");

    const double d = streams[0].fitted->segment_duration_s;
    for (const StreamSetup& s : streams) {
        s.fitted->validate();
        check_trace_uniformity(*s.trace, *s.fitted);
        if (s.fitted->segment_duration_s != d)
            throw ValidationError("engine: streams must share the segment duration");
        // Placements must reflect the fair core share.
        if (s.fitted->onprem_cores != fair_cores)
            throw ValidationError(
                "engine: stream model was fitted for " +
                std::to_string(s.fitted->onprem_cores) + " cores, fair share is " +
                std::to_string(fair_cores));
        if (all_onprem_runtime(s.fitted->placements.front()) > d)
            throw ValidationError("engine: provisioning invalid for a stream's cheapest config");
    }
    const bool cloud_allowed = options.mode != AblationMode::BufferOnly;

    const auto capacity = static_cast<double>(provision.buffer_bytes);
    const auto interval_segs =
        static_cast<int64_t>(std::llround(streams[0].fitted->planned_interval_s / d));
    const double interval_s = static_cast<double>(interval_segs) * d;
    const double budget = compute_budget(provision, interval_s, prices);

    struct StreamRun {
        const StreamSetup* setup;
        int64_t next_segment = 0;
        double t_free = 0.0;
        double occ = 0.0;        // true occupancy contribution at the last event
        double committed = 0.0;  // worst-case contribution while in flight
        bool in_flight = false;
        double rate = 0.0;
        double s_bytes = 0.0;
        int k_cur = 0;
        double qual_star = 0.0;
        bool have_quality = false;
        std::vector<int> history;
        SwitcherState sw;
        KnobPlan plan;
        std::vector<double> forecast;
    };

    std::vector<StreamRun> runs(n_streams);
    std::vector<MetricsReport> reports(n_streams);
    for (size_t v = 0; v < n_streams; ++v) {
        runs[v].setup = &streams[v];
        runs[v].s_bytes = static_cast<double>(streams[v].fitted->segment_size_bytes);
        runs[v].rate = runs[v].s_bytes / d;
        runs[v].sw = SwitcherState::make(streams[v].fitted->category_count(),
                                         static_cast<int>(streams[v].fitted->configs.size()));
    }

    double credits_remaining = 0.0;
    int64_t next_boundary_seg = 0;
    bool planned = false;

    auto replan = [&](int64_t boundary_seg) {
        std::vector<StreamPlanInput> inputs(n_streams);
        for (size_t v = 0; v < n_streams; ++v) {
            const FittedModel& f = *runs[v].setup->fitted;
            const int64_t chunk = std::max<int64_t>(
                1, static_cast<int64_t>(std::llround(f.input_window_s / f.input_splits / d)));
            inputs[v].forecast = f.forecaster.predict(assemble_forecast_input(
                runs[v].history, boundary_seg, chunk, f.input_splits, f.category_count()));
            inputs[v].centers = f.centers;
            inputs[v].scaled_costs = scale_costs_to_interval(f.config_cost_core_s, interval_s, d);
        }
        const std::vector<KnobPlan> plans = solve_multi_stream_plan(inputs, budget);
        for (size_t v = 0; v < n_streams; ++v) {
            runs[v].plan = plans[v];
            runs[v].forecast = inputs[v].forecast;
            for (auto& row : runs[v].sw.counts) std::fill(row.begin(), row.end(), 0);
            reports[v].plans.push_back(plans[v]);
        }
        credits_remaining = provision.cloud_budget_credits;
    };

    auto total_committed = [&] {
        double total = 0.0;
        for (const StreamRun& r : runs) total += r.in_flight ? r.committed : r.occ;
        return total;
    };

    while (true) {
        // Earliest pending decision across streams, ties by stream index.
        int pick = -1;
        double pick_t = std::numeric_limits<double>::infinity();
        for (size_t v = 0; v < n_streams; ++v) {
            const auto n = static_cast<int64_t>(runs[v].setup->trace->segments.size());
            if (runs[v].next_segment >= n) continue;
            const double arrival_t = static_cast<double>(runs[v].next_segment + 1) * d;
            const double t_dec = std::max(runs[v].t_free, arrival_t);
            if (t_dec < pick_t) {
                pick_t = t_dec;
                pick = static_cast<int>(v);
            }
        }
        if (pick < 0) break;
        StreamRun& run = runs[static_cast<size_t>(pick)];
        MetricsReport& report = reports[static_cast<size_t>(pick)];
        const FittedModel& fitted = *run.setup->fitted;
        const WorkloadModel& model = *run.setup->model;
        const Segment& segment =
            run.setup->trace->segments[static_cast<size_t>(run.next_segment)];

        while (!planned || pick_t >= static_cast<double>(next_boundary_seg) * d) {
            replan(next_boundary_seg);
            next_boundary_seg += interval_segs;
            planned = true;
        }

        // This stream's previous dispatch has finished by pick_t.
        const double seg_arrival = static_cast<double>(run.next_segment + 1) * d;
        run.in_flight = false;
        if (run.t_free <= seg_arrival) run.occ = run.s_bytes;

        int c_cur;
        if (run.have_quality) {
            c_cur = classify_category(run.qual_star, run.k_cur, fitted.centers);
        } else {
            c_cur = static_cast<int>(
                std::max_element(run.forecast.begin(), run.forecast.end()) -
                run.forecast.begin());
        }
        const int k_next = pick_config(run.plan.alpha[static_cast<size_t>(c_cur)],
                                       run.sw.realized_histogram(c_cur));

        // Admission sees the shared buffer through everyone's committed peak.
        const double others = total_committed() - run.occ;
        const BufferState buffer{run.occ, capacity - others};
        const ArrivalModel arrival{run.rate, d};
        const PlacementChoice choice =
            pick_placement(k_next, fitted.placements, buffer, arrival, credits_remaining,
                           fitted.centers, c_cur, cloud_allowed);
        const Placement& placement = fitted.placements[static_cast<size_t>(
            choice.config_index)][static_cast<size_t>(choice.placement_index)];
        const double runtime = placement.estimated_runtime_s;

        credits_remaining -= placement.cloud_cost_credits;
        report.cloud_credits_spent += placement.cloud_cost_credits;
        const double quality = oracle_quality(
            fitted.configs[static_cast<size_t>(choice.config_index)], segment, model);
        report.total_quality += quality;
        report.total_work_core_s +=
            fitted.config_cost_core_s[static_cast<size_t>(choice.config_index)];
        ++report.decision_count;

        run.committed = run.occ + std::max(0.0, runtime - d) * run.rate;
        run.in_flight = true;
        const double peak_total = total_committed();
        if (peak_total > capacity)
            throw EngineError("engine: shared buffer bound violated");
        for (auto& rep : reports)
            rep.buffer_high_water_bytes = std::max(rep.buffer_high_water_bytes, peak_total);

        run.sw.counts[static_cast<size_t>(c_cur)][static_cast<size_t>(choice.config_index)] +=
            1;
        run.history.push_back(c_cur);
        run.occ += (runtime - d) * run.rate;
        run.t_free = pick_t + runtime;
        run.qual_star = quality;
        run.k_cur = choice.config_index;
        run.have_quality = true;
        ++run.next_segment;
    }
    return reports;
}

std::string summary_line(const MetricsReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "total_quality=%.9f normalized_vs_optimum=%.9f total_work_core_s=%.6f "
                  "cloud_credits_spent=%.9f buffer_high_water_bytes=%.3f decisions=%lld "
                  "infeasible=%d infeasible_at_s=%.3f",
                  r.total_quality, r.normalized_vs_optimum, r.total_work_core_s,
                  r.cloud_credits_spent, r.buffer_high_water_bytes,
                  static_cast<long long>(r.decision_count), r.infeasible ? 1 : 0,
                  r.infeasible_at_s);
    return std::string(buf);
}

void save_report(const MetricsReport& report, const std::string& out_dir,
                 const std::string& name) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path base = fs::path(out_dir) / name;

    {
        std::ofstream out(base.string() + ".summary.txt");
        if (!out) throw EngineError("report: cannot write summary");
        out << summary_line(report) << "\n";
    }
    {
        std::ofstream out(base.string() + ".timeline.csv");
        out << "t,work_core_s_per_s,buffer_bytes,credits_fraction,quality\n";
        char line[192];
        for (const TimelinePoint& p : report.timeline) {
            std::snprintf(line, sizeof(line), "%.1f,%.9f,%.3f,%.9f,%.9f\n", p.t,
                          p.work_core_s_per_s, p.buffer_bytes, p.credits_fraction, p.quality);
            out << line;
        }
    }
    {
        std::ofstream out(base.string() + ".decisions.csv");
        out << "t,category,config_index,placement_mask,buffer_bytes,credits_spent,quality\n";
        char line[224];
        for (const DecisionRecord& rec : report.decisions) {
            std::snprintf(line, sizeof(line), "%.6f,%d,%d,%llu,%.3f,%.9f,%.9f\n", rec.t,
                          rec.category, rec.config_index,
                          static_cast<unsigned long long>(rec.placement_mask),
                          rec.buffer_bytes, rec.credits_spent, rec.quality);
            out << line;
        }
    }
    {
        std::ofstream out(base.string() + ".plans.txt");
        char cell[48];
        for (size_t i = 0; i < report.plans.size(); ++i) {
            const KnobPlan& plan = report.plans[i];
            out << "interval " << i << " start_s=" << plan.interval_start_s
                << " end_s=" << plan.interval_end_s << "\n";
            for (size_t c = 0; c < plan.alpha.size(); ++c) {
                out << "  category " << c << ":";
                for (double a : plan.alpha[c]) {
                    std::snprintf(cell, sizeof(cell), " %.6f", a);
                    out << cell;
                }
                out << "\n";
            }
        }
    }
}

}  // namespace vetl
