#include "vetl/model_file.hpp"

#include <chrono>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "vetl/offline.hpp"
#include "vetl/placement_sim.hpp"
#include "vetl/rng.hpp"

namespace vetl {

using nlohmann::json;

namespace {

const char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode(const std::vector<uint8_t>& data) {
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    for (size_t i = 0; i < data.size(); i += 3) {
        uint32_t word = static_cast<uint32_t>(data[i]) << 16;
        if (i + 1 < data.size()) word |= static_cast<uint32_t>(data[i + 1]) << 8;
        if (i + 2 < data.size()) word |= static_cast<uint32_t>(data[i + 2]);
        out.push_back(kB64Alphabet[(word >> 18) & 63]);
        out.push_back(kB64Alphabet[(word >> 12) & 63]);
        out.push_back(i + 1 < data.size() ? kB64Alphabet[(word >> 6) & 63] : '=');
        out.push_back(i + 2 < data.size() ? kB64Alphabet[word & 63] : '=');
    }
    return out;
}

std::vector<uint8_t> b64_decode(const std::string& text) {
    std::vector<int> lut(256, -1);
    for (int i = 0; i < 64; ++i) lut[static_cast<unsigned char>(kB64Alphabet[i])] = i;
    std::vector<uint8_t> out;
    uint32_t word = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n') continue;
        const int v = lut[static_cast<unsigned char>(c)];
        if (v < 0) throw ValidationError("model file: invalid base64 payload");
        word = (word << 6) | static_cast<uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<uint8_t>((word >> bits) & 0xff));
        }
    }
    return out;
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

void FittedModel::validate() const {
    if (schema_version != 1)
        throw ValidationError("model file: unsupported schema_version " +
                              std::to_string(schema_version));
    if (configs.empty()) throw ValidationError("model file: no configurations");
    if (config_cost_core_s.size() != configs.size() || placements.size() != configs.size())
        throw ValidationError("model file: configuration tables are inconsistent");
    for (size_t i = 1; i < configs.size(); ++i)
        if (config_cost_core_s[i] < config_cost_core_s[i - 1])
            throw ValidationError("model file: configurations must be cost-ordered");
    for (const auto& list : placements)
        if (list.empty()) throw ValidationError("model file: configuration without placements");
    centers.validate(configs.size());
    if (classify_index < 0 || classify_index >= static_cast<int>(configs.size()))
        throw ValidationError("model file: classify_index out of range");
    if (input_splits <= 0 || input_window_s <= 0 || planned_interval_s <= 0)
        throw ValidationError("model file: invalid horizon parameters");
    const int expected_in = input_splits * centers.category_count();
    if (forecaster.input_dim() != expected_in ||
        forecaster.output_dim() != centers.category_count())
        throw ValidationError("model file: forecaster dimensions do not match");
}

std::string dump_fitted_model(const FittedModel& m) {
    json j;
    j["schema_version"] = m.schema_version;
    j["workload_model_id"] = m.workload_model_id;
    j["segment_duration_s"] = m.segment_duration_s;
    j["segment_size_bytes"] = m.segment_size_bytes;
    j["provision"] = {{"onprem_cores", m.onprem_cores},
                      {"uplink_bytes_per_s", m.uplink_bytes_per_s},
                      {"downlink_bytes_per_s", m.downlink_bytes_per_s},
                      {"cloud_invocation_credits", m.cloud_invocation_credits},
                      {"egress_credits_per_byte", m.egress_credits_per_byte}};
    json configs = json::array();
    for (size_t i = 0; i < m.configs.size(); ++i)
        configs.push_back({{"id", m.configs[i].id},
                           {"choices", m.configs[i].choices},
                           {"cost_core_s", m.config_cost_core_s[i]}});
    j["configs"] = configs;
    json placements = json::array();
    for (const auto& list : m.placements) {
        json row = json::array();
        for (const Placement& p : list)
            row.push_back({{"mask", p.bitmask()},
                           {"node_count", p.labels.size()},
                           {"runtime_s", p.estimated_runtime_s},
                           {"cloud_cost", p.cloud_cost_credits}});
        placements.push_back(row);
    }
    j["placements"] = placements;
    j["centers"] = m.centers.centers;
    j["classify_index"] = m.classify_index;
    j["horizon"] = {{"input_window_s", m.input_window_s},
                    {"input_splits", m.input_splits},
                    {"planned_interval_s", m.planned_interval_s}};
    j["forecaster"] = {{"layer_sizes", m.forecaster.layer_sizes},
                       {"parameters_b64", b64_encode(m.forecaster.parameter_bytes())}};
    j["fit_seed"] = m.fit_seed;
    return j.dump(2) + "\n";
}

FittedModel parse_fitted_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("model file: parse error: ") + e.what());
    }
    try {
        FittedModel m;
        m.schema_version = j.at("schema_version").get<int>();
        m.workload_model_id = j.at("workload_model_id").get<std::string>();
        m.segment_duration_s = j.at("segment_duration_s").get<double>();
        m.segment_size_bytes = j.at("segment_size_bytes").get<int64_t>();
        const json& p = j.at("provision");
        m.onprem_cores = p.at("onprem_cores").get<int>();
        m.uplink_bytes_per_s = p.at("uplink_bytes_per_s").get<double>();
        m.downlink_bytes_per_s = p.at("downlink_bytes_per_s").get<double>();
        m.cloud_invocation_credits = p.at("cloud_invocation_credits").get<double>();
        m.egress_credits_per_byte = p.at("egress_credits_per_byte").get<double>();
        for (const json& cj : j.at("configs")) {
            KnobConfiguration k;
            k.id = cj.at("id").get<int>();
            k.choices = cj.at("choices").get<std::vector<int>>();
            m.configs.push_back(std::move(k));
            m.config_cost_core_s.push_back(cj.at("cost_core_s").get<double>());
        }
        for (const json& row : j.at("placements")) {
            std::vector<Placement> list;
            for (const json& pj : row) {
                Placement pl;
                const auto mask = pj.at("mask").get<uint64_t>();
                const auto nodes = pj.at("node_count").get<size_t>();
                pl.labels.resize(nodes);
                for (size_t i = 0; i < nodes; ++i)
                    pl.labels[i] = (mask >> i) & 1 ? Site::Cloud : Site::OnPrem;
                pl.estimated_runtime_s = pj.at("runtime_s").get<double>();
                pl.cloud_cost_credits = pj.at("cloud_cost").get<double>();
                list.push_back(std::move(pl));
            }
            m.placements.push_back(std::move(list));
        }
        m.centers.centers = j.at("centers").get<std::vector<std::vector<double>>>();
        m.classify_index = j.at("classify_index").get<int>();
        const json& h = j.at("horizon");
        m.input_window_s = h.at("input_window_s").get<double>();
        m.input_splits = h.at("input_splits").get<int>();
        m.planned_interval_s = h.at("planned_interval_s").get<double>();
        m.forecaster.layer_sizes = j.at("forecaster").at("layer_sizes").get<std::vector<int>>();
        for (size_t l = 0; l + 1 < m.forecaster.layer_sizes.size(); ++l) {
            m.forecaster.weights.emplace_back(
                static_cast<size_t>(m.forecaster.layer_sizes[l] *
                                    m.forecaster.layer_sizes[l + 1]),
                0.0);
            m.forecaster.biases.emplace_back(
                static_cast<size_t>(m.forecaster.layer_sizes[l + 1]), 0.0);
        }
        m.forecaster.load_parameter_bytes(
            b64_decode(j.at("forecaster").at("parameters_b64").get<std::string>()));
        m.fit_seed = j.at("fit_seed").get<uint64_t>();
        m.validate();
        return m;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("model file: bad contents: ") + e.what());
    }
}

void save_fitted_model(const FittedModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw EngineError("model file: cannot write '" + path + "'");
    out << dump_fitted_model(m);
}

FittedModel load_fitted_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("model file: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_fitted_model(buf.str());
}

FittedModel fit_offline(const Trace& trace, const WorkloadModel& model, const AppConfig& config,
                        uint64_t seed, double labeled_fraction, FitTimings* timings) {
    if (trace.model_id != model.model_id)
        throw ValidationError("fit: trace was generated from workload '" + trace.model_id +
                              "', not '" + model.model_id + "'");
    if (trace.segments.empty()) throw ValidationError("fit: empty trace");
    config.validate();

    FitTimings local;
    double t0 = now_s();

    // Candidate pool for profiling, sized by the labeled-data allowance.
    const size_t n = trace.segments.size();
    auto pool_size = static_cast<size_t>(
        std::llround(labeled_fraction * static_cast<double>(n)));
    pool_size = std::clamp<size_t>(pool_size, static_cast<size_t>(config.offline.n_search),
                                   static_cast<size_t>(config.offline.n_pre));
    pool_size = std::min(pool_size, n);
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(mix_seeds(seed, 0x706f6f6c));
    for (size_t i = 0; i < pool_size; ++i) std::swap(idx[i], idx[i + rng.next_below(n - i)]);
    idx.resize(pool_size);
    std::sort(idx.begin(), idx.end());
    std::vector<Segment> pool;
    pool.reserve(pool_size);
    for (size_t i : idx) pool.push_back(trace.segments[i]);

    const KnobConfiguration k_minus = cheapest_config(model);
    const KnobConfiguration k_plus = best_mean_quality_config(model, pool);
    const std::vector<Segment> diverse =
        sample_diverse_segments(pool, config.offline.n_search, model, k_minus, k_plus);
    const std::vector<KnobConfiguration> filtered = filter_knob_configs(diverse, model);

    FittedModel fitted;
    fitted.workload_model_id = model.model_id;
    fitted.segment_duration_s = model.segment_duration_s;
    fitted.segment_size_bytes = model.segment_size_bytes;
    fitted.onprem_cores = config.provision.onprem_cores;
    fitted.uplink_bytes_per_s = config.provision.uplink_bytes_per_s;
    fitted.downlink_bytes_per_s = config.provision.downlink_bytes_per_s;
    fitted.cloud_invocation_credits = config.prices.cloud_invocation_credits;
    fitted.egress_credits_per_byte = config.prices.egress_credits_per_byte;
    fitted.configs = filtered;
    for (const KnobConfiguration& k : filtered)
        fitted.config_cost_core_s.push_back(cost_of_config(model.graph_for(k)));
    fitted.fit_seed = seed;
    local.filter_configs_s = now_s() - t0;

    t0 = now_s();
    for (const KnobConfiguration& k : filtered)
        fitted.placements.push_back(enumerate_pareto_placements(
            model.graph_for(k), config.provision.onprem_cores,
            config.provision.uplink_bytes_per_s, config.provision.downlink_bytes_per_s,
            config.prices));
    local.filter_placements_s = now_s() - t0;

    // The cheapest configuration must keep up on-prem, or no provisioning can
    // guarantee the buffer bound.
    double onprem_runtime = 0.0;
    for (const Placement& p : fitted.placements.front())
        if (p.bitmask() == 0) onprem_runtime = p.estimated_runtime_s;
    if (onprem_runtime > model.segment_duration_s)
        throw ValidationError(
            "fit: provisioning invalid, the cheapest configuration cannot process segments in "
            "real time on " +
            std::to_string(config.provision.onprem_cores) + " cores");

    t0 = now_s();
    fitted.centers =
        compute_content_categories(trace, filtered, model, config.offline.category_count,
                                   config.offline.sample_fraction, mix_seeds(seed, 0x63617431));
    fitted.classify_index = choose_classify_config(fitted.centers, model.max_noise_stddev());
    local.categories_s = now_s() - t0;

    t0 = now_s();
    fitted.input_window_s = config.horizon.input_window_s;
    fitted.input_splits = config.horizon.input_splits;
    fitted.planned_interval_s = config.horizon.planned_interval_s;
    const std::vector<TrainSample> dataset = build_forecast_training_set(
        trace, fitted.centers, filtered, fitted.classify_index, model,
        fitted.input_window_s, fitted.input_splits, fitted.planned_interval_s,
        config.offline.train_stride_s);
    local.dataset_s = now_s() - t0;
    local.dataset_size = dataset.size();

    t0 = now_s();
    TrainOptions opts;
    opts.epochs = config.offline.epochs;
    opts.batch_size = config.offline.batch_size;
    opts.learning_rate = config.offline.learning_rate;
    opts.momentum = config.offline.momentum;
    opts.val_fraction = config.offline.val_fraction;
    opts.seed = mix_seeds(seed, 0x74726169);
    const ForecastModel start = ForecastModel::init(
        fitted.input_splits * fitted.centers.category_count(),
        fitted.centers.category_count(), mix_seeds(seed, 0x696e6974));
    const TrainResult trained = train(start, dataset, opts);
    fitted.forecaster = trained.model;
    local.train_s = now_s() - t0;
    local.train_best_val_loss = trained.best_val_loss;

    fitted.validate();
    if (timings) *timings = local;
    return fitted;
}

}  // namespace vetl
