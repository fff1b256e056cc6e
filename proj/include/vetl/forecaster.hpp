#pragma once

#include <cstdint>
#include <vector>

#include "vetl/types.hpp"

namespace vetl {

struct TrainSample {
    std::vector<double> input;  // n_split category histograms, concatenated
    std::vector<double> label;  // one category histogram
};

// Feed-forward category-frequency forecaster:
// input -> 16 (ReLU) -> 8 (ReLU) -> categories (softmax).
struct ForecastModel {
    std::vector<int> layer_sizes;               // [in, hidden..., out]
    std::vector<std::vector<double>> weights;   // per layer, row-major (out x in)
    std::vector<std::vector<double>> biases;    // per layer

    static ForecastModel init(int input_dim, int output_dim, uint64_t seed,
                              const std::vector<int>& hidden = {16, 8});

    int input_dim() const { return layer_sizes.front(); }
    int output_dim() const { return layer_sizes.back(); }

    // Softmax output; entries >= 0 and summing to 1. Pure function.
    std::vector<double> predict(const std::vector<double>& input) const;

    // Raw little-endian doubles, layer-ordered, weights then biases per layer.
    std::vector<uint8_t> parameter_bytes() const;
    void load_parameter_bytes(const std::vector<uint8_t>& bytes);
};

struct TrainOptions {
    int epochs = 40;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    double val_fraction = 0.2;
    uint64_t seed = 0;
};

struct EpochStats {
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct TrainResult {
    ForecastModel model;  // weights at the best validation loss
    std::vector<EpochStats> history;
    int best_epoch = 0;   // 1-based; 0 means the initial weights won
    double best_val_loss = 0.0;
};

// Cross-entropy against label histograms, mini-batch gradient descent with
// plain momentum, deterministic split and shuffling under options.seed.
TrainResult train(const ForecastModel& start, const std::vector<TrainSample>& dataset,
                  const TrainOptions& options);

// Warm-start continuation on recently observed samples (typically one epoch
// at plan boundaries). Fewer than 10 samples leaves the model unchanged.
ForecastModel fine_tune(const ForecastModel& model, const std::vector<TrainSample>& recent,
                        TrainOptions options);

// Max relative error between analytic gradients and central finite
// differences (h = 1e-5) over every parameter, for one sample.
double gradient_check(const ForecastModel& model, const TrainSample& sample);

double cross_entropy(const std::vector<double>& predicted, const std::vector<double>& label);

// Mean absolute error per histogram entry, averaged over samples.
double mean_absolute_error(const ForecastModel& model, const std::vector<TrainSample>& samples);

}  // namespace vetl
