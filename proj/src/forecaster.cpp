#include "vetl/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <string>

#include "vetl/rng.hpp"

namespace vetl {

namespace {

void softmax_inplace(std::vector<double>& z) {
    double zmax = -std::numeric_limits<double>::infinity();
    for (double v : z) zmax = std::max(zmax, v);
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        sum += v;
    }
    for (double& v : z) v /= sum;
}

struct ForwardPass {
    std::vector<std::vector<double>> activations;  // per layer, post-activation; [0] = input
};

ForwardPass forward(const ForecastModel& m, const std::vector<double>& input) {
    ForwardPass fp;
    fp.activations.push_back(input);
    const size_t n_layers = m.weights.size();
    for (size_t l = 0; l < n_layers; ++l) {
        const auto& prev = fp.activations.back();
        const int out_dim = m.layer_sizes[l + 1];
        const int in_dim = m.layer_sizes[l];
        std::vector<double> z(static_cast<size_t>(out_dim));
        for (int o = 0; o < out_dim; ++o) {
            double acc = m.biases[l][static_cast<size_t>(o)];
            const double* row = &m.weights[l][static_cast<size_t>(o * in_dim)];
            for (int i = 0; i < in_dim; ++i) acc += row[i] * prev[static_cast<size_t>(i)];
            z[static_cast<size_t>(o)] = acc;
        }
        if (l + 1 == n_layers)
            softmax_inplace(z);
        else
            for (double& v : z) v = std::max(0.0, v);
        fp.activations.push_back(std::move(z));
    }
    return fp;
}

struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    explicit Gradients(const ForecastModel& m) {
        for (size_t l = 0; l < m.weights.size(); ++l) {
            weights.emplace_back(m.weights[l].size(), 0.0);
            biases.emplace_back(m.biases[l].size(), 0.0);
        }
    }
};

// Accumulates d(cross_entropy)/d(params) for one sample. With a softmax
// output the logit gradient is simply p - y.
void backward(const ForecastModel& m, const ForwardPass& fp, const std::vector<double>& label,
              Gradients& grads) {
    const size_t n_layers = m.weights.size();
    std::vector<double> delta = fp.activations.back();
    for (size_t i = 0; i < delta.size(); ++i) delta[i] -= label[i];

    for (size_t l = n_layers; l-- > 0;) {
        const auto& prev = fp.activations[l];
        const int out_dim = m.layer_sizes[l + 1];
        const int in_dim = m.layer_sizes[l];
        for (int o = 0; o < out_dim; ++o) {
            const double d = delta[static_cast<size_t>(o)];
            grads.biases[l][static_cast<size_t>(o)] += d;
            double* wrow = &grads.weights[l][static_cast<size_t>(o * in_dim)];
            for (int i = 0; i < in_dim; ++i) wrow[i] += d * prev[static_cast<size_t>(i)];
        }
        if (l == 0) break;
        std::vector<double> next(static_cast<size_t>(in_dim), 0.0);
        for (int i = 0; i < in_dim; ++i) {
            if (prev[static_cast<size_t>(i)] <= 0.0) continue;  // ReLU gate
            double acc = 0.0;
            for (int o = 0; o < out_dim; ++o)
                acc += m.weights[l][static_cast<size_t>(o * in_dim + i)] *
                       delta[static_cast<size_t>(o)];
            next[static_cast<size_t>(i)] = acc;
        }
        delta = std::move(next);
    }
}

double dataset_loss(const ForecastModel& m, const std::vector<TrainSample>& data,
                    const std::vector<size_t>& idx) {
    if (idx.empty()) return 0.0;
    double total = 0.0;
    for (size_t i : idx) total += cross_entropy(m.predict(data[i].input), data[i].label);
    return total / static_cast<double>(idx.size());
}

}  // namespace

ForecastModel ForecastModel::init(int input_dim, int output_dim, uint64_t seed,
                                  const std::vector<int>& hidden) {
    if (input_dim <= 0 || output_dim <= 0)
        throw ValidationError("forecaster: dimensions must be positive");
    ForecastModel m;
    m.layer_sizes.push_back(input_dim);
    for (int h : hidden) m.layer_sizes.push_back(h);
    m.layer_sizes.push_back(output_dim);

    Rng rng(mix_seeds(seed, 0x464f5245));
    for (size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        const int in_dim = m.layer_sizes[l];
        const int out_dim = m.layer_sizes[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
        std::vector<double> w(static_cast<size_t>(in_dim * out_dim));
        for (double& v : w) v = (2.0 * rng.next_double() - 1.0) * bound;
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(static_cast<size_t>(out_dim), 0.0);
    }
    return m;
}

std::vector<double> ForecastModel::predict(const std::vector<double>& input) const {
    if (static_cast<int>(input.size()) != input_dim())
        throw ValidationError("forecaster: input dimension mismatch (got " +
                              std::to_string(input.size()) + ", want " +
                              std::to_string(input_dim()) + ")");
    return forward(*this, input).activations.back();
}

std::vector<uint8_t> ForecastModel::parameter_bytes() const {
    std::vector<uint8_t> out;
    auto append = [&out](const std::vector<double>& vals) {
        for (double v : vals) {
            uint64_t bits;
            std::memcpy(&bits, &v, sizeof bits);
            for (int b = 0; b < 8; ++b) out.push_back(static_cast<uint8_t>(bits >> (8 * b)));
        }
    };
    for (size_t l = 0; l < weights.size(); ++l) {
        append(weights[l]);
        append(biases[l]);
    }
    return out;
}

void ForecastModel::load_parameter_bytes(const std::vector<uint8_t>& bytes) {
    size_t offset = 0;
    auto take = [&](std::vector<double>& vals) {
        for (double& v : vals) {
            if (offset + 8 > bytes.size())
                throw ValidationError("forecaster: parameter payload too short");
            uint64_t bits = 0;
            for (int b = 0; b < 8; ++b)
                bits |= static_cast<uint64_t>(bytes[offset + static_cast<size_t>(b)]) << (8 * b);
            offset += 8;
            std::memcpy(&v, &bits, sizeof v);
        }
    };
    for (size_t l = 0; l < weights.size(); ++l) {
        take(weights[l]);
        take(biases[l]);
    }
    if (offset != bytes.size())
        throw ValidationError("forecaster: parameter payload size mismatch");
}

double cross_entropy(const std::vector<double>& predicted, const std::vector<double>& label) {
    double loss = 0.0;
    for (size_t i = 0; i < predicted.size(); ++i)
        loss -= label[i] * std::log(std::max(predicted[i], 1e-300));
    return loss;
}

TrainResult train(const ForecastModel& start, const std::vector<TrainSample>& dataset,
                  const TrainOptions& options) {
    if (dataset.empty()) throw ValidationError("train: empty dataset");
    for (const TrainSample& s : dataset) {
        if (static_cast<int>(s.input.size()) != start.input_dim() ||
            static_cast<int>(s.label.size()) != start.output_dim())
            throw ValidationError("train: sample dimensions do not match the model");
    }

    Rng rng(mix_seeds(options.seed, 0x545241494e));
    std::vector<size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.next_below(i)]);

    const auto n_val = std::max<size_t>(1, static_cast<size_t>(std::llround(
                                               options.val_fraction *
                                               static_cast<double>(dataset.size()))));
    if (n_val >= dataset.size()) throw ValidationError("train: dataset too small to split");
    std::vector<size_t> val_idx(order.end() - static_cast<long>(n_val), order.end());
    std::vector<size_t> train_idx(order.begin(), order.end() - static_cast<long>(n_val));

    ForecastModel model = start;
    Gradients velocity(model);

    TrainResult result;
    result.best_val_loss = dataset_loss(model, dataset, val_idx);
    result.best_epoch = 0;
    result.model = model;

    for (int epoch = 1; epoch <= options.epochs; ++epoch) {
        for (size_t i = train_idx.size(); i > 1; --i)
            std::swap(train_idx[i - 1], train_idx[rng.next_below(i)]);

        for (size_t base = 0; base < train_idx.size();
             base += static_cast<size_t>(options.batch_size)) {
            const size_t end =
                std::min(train_idx.size(), base + static_cast<size_t>(options.batch_size));
            Gradients grads(model);
            for (size_t i = base; i < end; ++i) {
                const TrainSample& s = dataset[train_idx[i]];
                const ForwardPass fp = forward(model, s.input);
                backward(model, fp, s.label, grads);
            }
            const double inv = 1.0 / static_cast<double>(end - base);
            for (size_t l = 0; l < model.weights.size(); ++l) {
                for (size_t i = 0; i < model.weights[l].size(); ++i) {
                    double& v = velocity.weights[l][i];
                    v = options.momentum * v - options.learning_rate * grads.weights[l][i] * inv;
                    model.weights[l][i] += v;
                }
                for (size_t i = 0; i < model.biases[l].size(); ++i) {
                    double& v = velocity.biases[l][i];
                    v = options.momentum * v - options.learning_rate * grads.biases[l][i] * inv;
                    model.biases[l][i] += v;
                }
            }
        }

        EpochStats stats;
        stats.train_loss = dataset_loss(model, dataset, train_idx);
        stats.val_loss = dataset_loss(model, dataset, val_idx);
        if (!std::isfinite(stats.train_loss) || !std::isfinite(stats.val_loss))
            throw EngineError("train: non-finite loss at epoch " + std::to_string(epoch));
        result.history.push_back(stats);
        if (stats.val_loss < result.best_val_loss) {
            result.best_val_loss = stats.val_loss;
            result.best_epoch = epoch;
            result.model = model;
        }
    }
    return result;
}

ForecastModel fine_tune(const ForecastModel& model, const std::vector<TrainSample>& recent,
                        TrainOptions options) {
    if (recent.size() < 10) return model;  // not enough to split off validation
    return train(model, recent, options).model;
}

double gradient_check(const ForecastModel& model, const TrainSample& sample) {
    ForecastModel probe = model;
    Gradients analytic(probe);
    backward(probe, forward(probe, sample.input), sample.label, analytic);

    const double h = 1e-5;
    double max_rel = 0.0;
    auto check_param = [&](double& param, double grad) {
        const double saved = param;
        param = saved + h;
        const double up = cross_entropy(probe.predict(sample.input), sample.label);
        param = saved - h;
        const double down = cross_entropy(probe.predict(sample.input), sample.label);
        param = saved;
        const double fd = (up - down) / (2.0 * h);
        const double rel = std::abs(fd - grad) / std::max({std::abs(fd), std::abs(grad), 1e-3});
        max_rel = std::max(max_rel, rel);
    };
    for (size_t l = 0; l < probe.weights.size(); ++l) {
        for (size_t i = 0; i < probe.weights[l].size(); ++i)
            check_param(probe.weights[l][i], analytic.weights[l][i]);
        for (size_t i = 0; i < probe.biases[l].size(); ++i)
            check_param(probe.biases[l][i], analytic.biases[l][i]);
    }
    return max_rel;
}

double mean_absolute_error(const ForecastModel& model, const std::vector<TrainSample>& samples) {
    if (samples.empty()) return 0.0;
    double total = 0.0;
    for (const TrainSample& s : samples) {
        const std::vector<double> p = model.predict(s.input);
        double err = 0.0;
        for (size_t i = 0; i < p.size(); ++i) err += std::abs(p[i] - s.label[i]);
        total += err / static_cast<double>(p.size());
    }
    return total / static_cast<double>(samples.size());
}

}  // namespace vetl
