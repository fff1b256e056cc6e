#pragma once

#include <cstdint>
#include <vector>

#include "vetl/forecaster.hpp"
#include "vetl/types.hpp"
#include "vetl/workload.hpp"

namespace vetl {

struct KMeansResult {
    std::vector<std::vector<double>> centers;
    std::vector<int> assignment;
    int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding. Deterministic under seed;
// converges when the largest center shift drops below tolerance. Requires at
// least k distinct points.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, uint64_t seed,
                    int max_iterations = 300, double tolerance = 1e-6);

// Cheapest configuration of the full space (ties toward the lower id).
KnobConfiguration cheapest_config(const WorkloadModel& model);

// Configuration with the best mean observed quality on the given segments.
KnobConfiguration best_mean_quality_config(const WorkloadModel& model,
                                           const std::vector<Segment>& segments);

// Greedy max-min-distance subset of the candidates in the 2-d quality space
// spanned by (k_minus, k_plus): the first pick is the vector with the
// smallest L2 norm, each later pick maximizes the distance to its closest
// already-picked vector. Ties break toward the lower candidate position.
std::vector<Segment> sample_diverse_segments(const std::vector<Segment>& candidates,
                                             int n_search, const WorkloadModel& model,
                                             const KnobConfiguration& k_minus,
                                             const KnobConfiguration& k_plus);

// Filtered configuration set: per sampled segment, hill-climb the knob
// lattice from the all-cheapest configuration along the best
// quality-gain/cost-increase single-knob move; keep the non-dominated points
// among everything evaluated, union across segments, then drop members
// dominated on mean sampled quality. Always contains the cheapest and the
// best-mean-quality configurations; sorted by ascending cost.
std::vector<KnobConfiguration> filter_knob_configs(const std::vector<Segment>& sampled,
                                                   const WorkloadModel& model);

// KMeans content categories over the quality vectors of a seeded
// sample_fraction sample of the trace. Centers are returned in lexicographic
// order for stable category ids.
ContentCategorySet compute_content_categories(const Trace& trace,
                                              const std::vector<KnobConfiguration>& filtered,
                                              const WorkloadModel& model, int category_count,
                                              double sample_fraction, uint64_t seed);

// Cheapest filtered configuration whose center entries discriminate between
// all categories (pairwise gaps >= 2x the quality noise); falls back to the
// configuration with the widest minimum gap.
int choose_classify_config(const ContentCategorySet& centers, double noise_stddev);

// Sliding-window supervised pairs for the forecaster. Every segment is
// classified with the designated configuration's reported quality; each
// sample's input is input_splits histograms over the preceding input window
// and its label one histogram over the following planned interval. Window
// arithmetic is done in whole segments.
std::vector<TrainSample> build_forecast_training_set(
    const Trace& trace, const ContentCategorySet& centers,
    const std::vector<KnobConfiguration>& filtered, int classify_config_index,
    const WorkloadModel& model, double input_window_s, int input_splits,
    double planned_interval_s, double stride_s);

}  // namespace vetl
