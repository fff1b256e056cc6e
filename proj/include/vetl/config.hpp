#pragma once

#include <string>

#include "vetl/types.hpp"

namespace vetl {

// Hyperparameters of the offline fitting phase.
struct OfflineParams {
    int n_pre = 200;              // uniformly pre-sampled segments
    int n_search = 5;             // diverse segments kept for the knob search
    int category_count = 4;       // KMeans k
    double sample_fraction = 0.05;  // share of segments quality-profiled for clustering
    double train_stride_s = 900.0;  // one forecast training point per stride
    int epochs = 40;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    double val_fraction = 0.2;

    void validate() const;
};

struct AppConfig {
    int schema_version = 1;
    ResourceProvision provision;
    Prices prices;
    PlanningHorizon horizon;
    OfflineParams offline;
    double segment_duration_s = 2.0;

    void validate() const;
};

// Parses and validates the JSON config schema described in the README.
// Absent optional keys take the documented defaults; a minimal file only
// needs provision.buffer_bytes and provision sizes.
AppConfig load_config(const std::string& path);
AppConfig parse_config(const std::string& json_text);

// Inverse of parse_config, for round-tripping.
std::string dump_config(const AppConfig& config);

}  // namespace vetl
