#pragma once

#include <string>
#include <vector>

#include "vetl/config.hpp"
#include "vetl/forecaster.hpp"
#include "vetl/types.hpp"
#include "vetl/workload.hpp"

namespace vetl {

// Everything the online phase needs, persisted as one versioned JSON file.
// Forecaster parameters are stored as base64 of little-endian 64-bit floats
// in layer order, so a load/save round trip is byte-exact.
struct FittedModel {
    int schema_version = 1;
    std::string workload_model_id;
    double segment_duration_s = 2.0;
    int64_t segment_size_bytes = 0;

    // Provision fingerprint the placements were profiled against.
    int onprem_cores = 0;
    double uplink_bytes_per_s = 0.0;
    double downlink_bytes_per_s = 0.0;
    double cloud_invocation_credits = 0.0;
    double egress_credits_per_byte = 0.0;

    std::vector<KnobConfiguration> configs;       // filtered set, ascending cost
    std::vector<double> config_cost_core_s;       // per segment
    std::vector<std::vector<Placement>> placements;  // per config, ascending cloud cost
    ContentCategorySet centers;
    int classify_index = 0;  // configuration used to label the training data

    double input_window_s = 0.0;
    int input_splits = 0;
    double planned_interval_s = 0.0;
    ForecastModel forecaster;
    uint64_t fit_seed = 0;

    void validate() const;
    int category_count() const { return centers.category_count(); }
};

std::string dump_fitted_model(const FittedModel& fitted);
FittedModel parse_fitted_model(const std::string& json_text);
void save_fitted_model(const FittedModel& fitted, const std::string& path);
FittedModel load_fitted_model(const std::string& path);

struct FitTimings {
    double filter_configs_s = 0.0;
    double filter_placements_s = 0.0;
    double categories_s = 0.0;
    double dataset_s = 0.0;
    double train_s = 0.0;
    size_t dataset_size = 0;
    double train_best_val_loss = 0.0;
};

// End-to-end offline phase: diverse sampling, configuration filtering,
// placement enumeration, categorization, training-set construction, and
// forecaster training. labeled_fraction sizes the profiling candidate pool
// (clamped to [n_search, n_pre]).
FittedModel fit_offline(const Trace& trace, const WorkloadModel& model, const AppConfig& config,
                        uint64_t seed, double labeled_fraction = 0.05,
                        FitTimings* timings = nullptr);

}  // namespace vetl
