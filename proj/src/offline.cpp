#include "vetl/offline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "vetl/rng.hpp"
#include "vetl/switcher.hpp"

namespace vetl {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double total = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, uint64_t seed,
                    int max_iterations, double tolerance) {
    if (k < 1) throw ValidationError("kmeans: k must be >= 1");
    if (points.empty()) throw ValidationError("kmeans: no points");
    {
        std::set<std::vector<double>> distinct(points.begin(), points.end());
        if (static_cast<int>(distinct.size()) < k)
            throw ValidationError("kmeans: degenerate sample, fewer distinct points than k");
    }

    const size_t n = points.size();
    Rng rng(mix_seeds(seed, 0x6b6d6565));

    // k-means++ seeding.
    std::vector<std::vector<double>> centers;
    centers.push_back(points[rng.next_below(n)]);
    std::vector<double> d2(n);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        double u = rng.next_double() * total;
        size_t pick = n - 1;
        for (size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            if (u < d2[i]) {
                pick = i;
                break;
            }
            u -= d2[i];
        }
        centers.push_back(points[pick]);
    }

    KMeansResult result;
    result.assignment.assign(n, 0);
    for (int iter = 0; iter < max_iterations; ++iter) {
        for (size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = sq_dist(points[i], centers[static_cast<size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            result.assignment[i] = best;
        }

        std::vector<std::vector<double>> next(static_cast<size_t>(k),
                                              std::vector<double>(points[0].size(), 0.0));
        std::vector<int64_t> count(static_cast<size_t>(k), 0);
        for (size_t i = 0; i < n; ++i) {
            const auto c = static_cast<size_t>(result.assignment[i]);
            ++count[c];
            for (size_t j = 0; j < points[i].size(); ++j) next[c][j] += points[i][j];
        }
        for (int c = 0; c < k; ++c) {
            if (count[static_cast<size_t>(c)] > 0) {
                for (double& v : next[static_cast<size_t>(c)])
                    v /= static_cast<double>(count[static_cast<size_t>(c)]);
            } else {
                // Re-seed an empty cluster with the point farthest from its
                // current center (lowest index on ties).
                size_t far = 0;
                double far_d = -1.0;
                for (size_t i = 0; i < n; ++i) {
                    const double d = sq_dist(
                        points[i], centers[static_cast<size_t>(result.assignment[i])]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                next[static_cast<size_t>(c)] = points[far];
            }
        }

        double shift = 0.0;
        for (int c = 0; c < k; ++c)
            shift = std::max(shift, std::sqrt(sq_dist(centers[static_cast<size_t>(c)],
                                                      next[static_cast<size_t>(c)])));
        centers = std::move(next);
        result.iterations = iter + 1;
        if (shift < tolerance) break;
    }

    // Final assignment against the converged centers.
    for (size_t i = 0; i < n; ++i) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            const double d = sq_dist(points[i], centers[static_cast<size_t>(c)]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        result.assignment[i] = best;
    }
    result.centers = std::move(centers);
    return result;
}

KnobConfiguration cheapest_config(const WorkloadModel& model) {
    const auto configs = model.all_configs();
    int best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const KnobConfiguration& k : configs) {
        const double c = cost_of_config(model.graph_for(k));
        if (c < best_cost) {
            best_cost = c;
            best = k.id;
        }
    }
    return model.config_by_id(best);
}

KnobConfiguration best_mean_quality_config(const WorkloadModel& model,
                                           const std::vector<Segment>& segments) {
    if (segments.empty()) throw ValidationError("best_mean_quality_config: no segments");
    const auto configs = model.all_configs();
    int best = 0;
    double best_quality = -1.0;
    for (const KnobConfiguration& k : configs) {
        double total = 0.0;
        for (const Segment& s : segments) total += oracle_quality(k, s, model);
        const double mean = total / static_cast<double>(segments.size());
        if (mean > best_quality) {
            best_quality = mean;
            best = k.id;
        }
    }
    return model.config_by_id(best);
}

std::vector<Segment> sample_diverse_segments(const std::vector<Segment>& candidates,
                                             int n_search, const WorkloadModel& model,
                                             const KnobConfiguration& k_minus,
                                             const KnobConfiguration& k_plus) {
    if (n_search > static_cast<int>(candidates.size()))
        throw ValidationError("sample_diverse_segments: n_search exceeds candidate count");

    const size_t n = candidates.size();
    std::vector<std::array<double, 2>> qv(n);
    for (size_t i = 0; i < n; ++i)
        qv[i] = {oracle_quality(k_minus, candidates[i], model),
                 oracle_quality(k_plus, candidates[i], model)};

    std::vector<char> picked(n, 0);
    std::vector<size_t> picks;

    size_t first = 0;
    double best_norm = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        const double norm = qv[i][0] * qv[i][0] + qv[i][1] * qv[i][1];
        if (norm < best_norm) {
            best_norm = norm;
            first = i;
        }
    }
    picks.push_back(first);
    picked[first] = 1;

    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
    while (static_cast<int>(picks.size()) < n_search) {
        const auto& last = qv[picks.back()];
        size_t best = 0;
        double best_d2 = -1.0;
        for (size_t i = 0; i < n; ++i) {
            if (picked[i]) continue;
            const double dx = qv[i][0] - last[0];
            const double dy = qv[i][1] - last[1];
            min_d2[i] = std::min(min_d2[i], dx * dx + dy * dy);
            if (min_d2[i] > best_d2) {
                best_d2 = min_d2[i];
                best = i;
            }
        }
        picks.push_back(best);
        picked[best] = 1;
    }

    std::vector<Segment> out;
    out.reserve(picks.size());
    for (size_t i : picks) out.push_back(candidates[i]);
    return out;
}

std::vector<KnobConfiguration> filter_knob_configs(const std::vector<Segment>& sampled,
                                                   const WorkloadModel& model) {
    if (sampled.empty()) throw ValidationError("filter_knob_configs: no sampled segments");

    const auto configs = model.all_configs();
    std::vector<double> cost(configs.size());
    for (size_t i = 0; i < configs.size(); ++i)
        cost[i] = cost_of_config(model.graph_for(configs[i]));

    std::set<int> members;

    for (const Segment& seg : sampled) {
        std::map<int, double> quality;  // config id -> oracle quality on seg
        auto eval = [&](int id) {
            auto it = quality.find(id);
            if (it != quality.end()) return it->second;
            const double q = oracle_quality(configs[static_cast<size_t>(id)], seg, model);
            quality.emplace(id, q);
            return q;
        };

        KnobConfiguration current = cheapest_config(model);
        eval(current.id);
        while (true) {
            int best_neighbor = -1;
            double best_ratio = 0.0;
            for (size_t j = 0; j < model.knobs.size(); ++j) {
                if (current.choices[j] + 1 >= static_cast<int>(model.knobs[j].values.size()))
                    continue;
                KnobConfiguration next = current;
                next.choices[j] += 1;
                next.id = model.config_id(next.choices);
                const double dq = eval(next.id) - eval(current.id);
                const double dc = cost[static_cast<size_t>(next.id)] -
                                  cost[static_cast<size_t>(current.id)];
                if (dq <= 0.0 || dc <= 0.0) continue;
                if (dq / dc > best_ratio) {
                    best_ratio = dq / dc;
                    best_neighbor = next.id;
                }
            }
            if (best_neighbor < 0) break;
            current = configs[static_cast<size_t>(best_neighbor)];
        }

        // Non-dominated subset of everything evaluated on this segment.
        std::vector<std::pair<int, double>> evaluated(quality.begin(), quality.end());
        std::sort(evaluated.begin(), evaluated.end(), [&](const auto& a, const auto& b) {
            if (cost[static_cast<size_t>(a.first)] != cost[static_cast<size_t>(b.first)])
                return cost[static_cast<size_t>(a.first)] < cost[static_cast<size_t>(b.first)];
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        double best_q = -std::numeric_limits<double>::infinity();
        for (const auto& [id, q] : evaluated) {
            if (q > best_q) {
                best_q = q;
                members.insert(id);
            }
        }
    }

    const int k_minus = cheapest_config(model).id;
    const int k_plus = best_mean_quality_config(model, sampled).id;
    members.insert(k_minus);
    members.insert(k_plus);

    // Mean sampled quality per member, then a dominance sweep over cost.
    std::vector<std::pair<int, double>> pool;
    pool.reserve(members.size());
    for (int id : members) {
        double total = 0.0;
        for (const Segment& seg : sampled)
            total += oracle_quality(configs[static_cast<size_t>(id)], seg, model);
        pool.emplace_back(id, total / static_cast<double>(sampled.size()));
    }
    std::sort(pool.begin(), pool.end(), [&](const auto& a, const auto& b) {
        if (cost[static_cast<size_t>(a.first)] != cost[static_cast<size_t>(b.first)])
            return cost[static_cast<size_t>(a.first)] < cost[static_cast<size_t>(b.first)];
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    std::vector<KnobConfiguration> filtered;
    double best_q = -std::numeric_limits<double>::infinity();
    for (const auto& [id, q] : pool) {
        if (q > best_q || id == k_plus || id == k_minus) {
            best_q = std::max(best_q, q);
            filtered.push_back(configs[static_cast<size_t>(id)]);
        }
    }
    return filtered;
}

ContentCategorySet compute_content_categories(const Trace& trace,
                                              const std::vector<KnobConfiguration>& filtered,
                                              const WorkloadModel& model, int category_count,
                                              double sample_fraction, uint64_t seed) {
    if (category_count < 1)
        throw ValidationError("compute_content_categories: category_count must be >= 1");
    if (trace.segments.empty())
        throw ValidationError("compute_content_categories: empty trace");

    const size_t n = trace.segments.size();
    auto m = static_cast<size_t>(std::llround(sample_fraction * static_cast<double>(n)));
    m = std::clamp<size_t>(m, std::min<size_t>(n, static_cast<size_t>(category_count) * 4), n);

    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(mix_seeds(seed, 0x63617473));
    for (size_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng.next_below(n - i)]);
    idx.resize(m);
    std::sort(idx.begin(), idx.end());

    std::vector<std::vector<double>> quality_vectors;
    quality_vectors.reserve(m);
    for (size_t i : idx)
        quality_vectors.push_back(quality_vector(trace.segments[i], filtered, model).values);

    KMeansResult km = kmeans(quality_vectors, category_count, seed);
    std::sort(km.centers.begin(), km.centers.end());  // stable category ids

    ContentCategorySet set;
    set.centers = std::move(km.centers);
    set.validate(filtered.size());
    return set;
}

int choose_classify_config(const ContentCategorySet& centers, double noise_stddev) {
    const size_t n_configs = centers.centers.front().size();
    const int n_cat = centers.category_count();
    int widest = 0;
    double widest_gap = -1.0;
    for (size_t k = 0; k < n_configs; ++k) {
        double min_gap = std::numeric_limits<double>::infinity();
        for (int a = 0; a < n_cat; ++a)
            for (int b = a + 1; b < n_cat; ++b)
                min_gap = std::min(min_gap,
                                   std::abs(centers.centers[static_cast<size_t>(a)][k] -
                                            centers.centers[static_cast<size_t>(b)][k]));
        if (n_cat == 1) min_gap = std::numeric_limits<double>::infinity();
        if (min_gap >= 2.0 * noise_stddev) return static_cast<int>(k);
        if (min_gap > widest_gap) {
            widest_gap = min_gap;
            widest = static_cast<int>(k);
        }
    }
    return widest;
}

std::vector<TrainSample> build_forecast_training_set(
    const Trace& trace, const ContentCategorySet& centers,
    const std::vector<KnobConfiguration>& filtered, int classify_config_index,
    const WorkloadModel& model, double input_window_s, int input_splits,
    double planned_interval_s, double stride_s) {
    if (trace.segments.empty())
        throw ValidationError("build_forecast_training_set: empty trace");
    const double d = trace.segments.front().duration_s;
    const auto n = static_cast<int64_t>(trace.segments.size());

    const int64_t chunk_segs =
        static_cast<int64_t>(std::llround(input_window_s / input_splits / d));
    const auto out_segs = static_cast<int64_t>(std::llround(planned_interval_s / d));
    const auto stride_segs = std::max<int64_t>(1, std::llround(stride_s / d));
    if (chunk_segs < 1)
        throw ValidationError(
            "build_forecast_training_set: input window split below one segment");
    const int64_t in_segs = chunk_segs * input_splits;
    if (in_segs + out_segs > n)
        throw ValidationError(
            "build_forecast_training_set: insufficient trace length for input window plus "
            "planned interval");

    // Classify every segment from the designated configuration's quality.
    const KnobConfiguration& kc = filtered[static_cast<size_t>(classify_config_index)];
    std::vector<int> category(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i)
        category[static_cast<size_t>(i)] = classify_category(
            oracle_quality(kc, trace.segments[static_cast<size_t>(i)], model),
            classify_config_index, centers);

    const auto n_cat = static_cast<size_t>(centers.category_count());
    auto histogram = [&](int64_t begin, int64_t end) {
        std::vector<double> h(n_cat, 0.0);
        for (int64_t i = begin; i < end; ++i) h[static_cast<size_t>(category[static_cast<size_t>(i)])] += 1.0;
        for (double& v : h) v /= static_cast<double>(end - begin);
        return h;
    };

    std::vector<TrainSample> samples;
    for (int64_t t0 = in_segs; t0 + out_segs <= n; t0 += stride_segs) {
        TrainSample s;
        s.input.reserve(n_cat * static_cast<size_t>(input_splits));
        for (int split = 0; split < input_splits; ++split) {
            const int64_t begin = t0 - in_segs + split * chunk_segs;
            const std::vector<double> h = histogram(begin, begin + chunk_segs);
            s.input.insert(s.input.end(), h.begin(), h.end());
        }
        s.label = histogram(t0, t0 + out_segs);
        samples.push_back(std::move(s));
    }
    return samples;
}

}  // namespace vetl
