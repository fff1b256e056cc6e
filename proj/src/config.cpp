#include "vetl/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vetl {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

void OfflineParams::validate() const {
    if (n_pre <= 0) throw ValidationError("offline: n_pre must be positive");
    if (n_search <= 0) throw ValidationError("offline: n_search must be positive");
    if (n_search > n_pre) throw ValidationError("offline: n_search must not exceed n_pre");
    if (category_count <= 0) throw ValidationError("offline: category_count must be positive");
    if (sample_fraction <= 0 || sample_fraction > 1)
        throw ValidationError("offline: sample_fraction must be in (0, 1]");
    if (train_stride_s <= 0) throw ValidationError("offline: train_stride_s must be positive");
    if (epochs <= 0) throw ValidationError("offline: epochs must be positive");
    if (batch_size <= 0) throw ValidationError("offline: batch_size must be positive");
    if (learning_rate <= 0) throw ValidationError("offline: learning_rate must be positive");
    if (momentum < 0 || momentum >= 1)
        throw ValidationError("offline: momentum must be in [0, 1)");
    if (val_fraction <= 0 || val_fraction >= 1)
        throw ValidationError("offline: val_fraction must be in (0, 1)");
}

void AppConfig::validate() const {
    provision.validate();
    prices.validate();
    horizon.validate();
    offline.validate();
    if (segment_duration_s <= 0)
        throw ValidationError("config: segment_duration_s must be positive");
}

AppConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: parse error: ") + e.what());
    }

    AppConfig cfg;
    cfg.schema_version = get_or<int>(j, "schema_version", 1);
    if (cfg.schema_version != 1)
        throw ValidationError("config: unsupported schema_version " +
                              std::to_string(cfg.schema_version));

    if (j.contains("provision")) {
        const json& p = j.at("provision");
        cfg.provision.onprem_cores = get_or<int>(p, "onprem_cores", cfg.provision.onprem_cores);
        cfg.provision.buffer_bytes =
            get_or<int64_t>(p, "buffer_bytes", cfg.provision.buffer_bytes);
        cfg.provision.cloud_budget_credits =
            get_or<double>(p, "cloud_budget_credits", cfg.provision.cloud_budget_credits);
        cfg.provision.uplink_bytes_per_s =
            get_or<double>(p, "uplink_bytes_per_s", cfg.provision.uplink_bytes_per_s);
        cfg.provision.downlink_bytes_per_s =
            get_or<double>(p, "downlink_bytes_per_s", cfg.provision.downlink_bytes_per_s);
        cfg.provision.cloud_cost_ratio =
            get_or<double>(p, "cloud_cost_ratio", cfg.provision.cloud_cost_ratio);
    }

    if (j.contains("prices")) {
        const json& p = j.at("prices");
        cfg.prices.onprem_credits_per_core_s =
            get_or<double>(p, "onprem_credits_per_core_s", cfg.prices.onprem_credits_per_core_s);
        cfg.prices.cloud_invocation_credits =
            get_or<double>(p, "cloud_invocation_credits", cfg.prices.cloud_invocation_credits);
        cfg.prices.egress_credits_per_byte =
            get_or<double>(p, "egress_credits_per_byte", cfg.prices.egress_credits_per_byte);
    }

    if (j.contains("horizon")) {
        const json& h = j.at("horizon");
        cfg.horizon.planned_interval_s =
            get_or<double>(h, "planned_interval_s", cfg.horizon.planned_interval_s);
        cfg.horizon.input_window_s =
            get_or<double>(h, "input_window_s", cfg.horizon.input_window_s);
        cfg.horizon.input_splits = get_or<int>(h, "input_splits", cfg.horizon.input_splits);
        cfg.horizon.switch_period_s =
            get_or<double>(h, "switch_period_s", cfg.horizon.switch_period_s);
    }

    if (j.contains("offline")) {
        const json& o = j.at("offline");
        cfg.offline.n_pre = get_or<int>(o, "n_pre", cfg.offline.n_pre);
        cfg.offline.n_search = get_or<int>(o, "n_search", cfg.offline.n_search);
        cfg.offline.category_count =
            get_or<int>(o, "category_count", cfg.offline.category_count);
        cfg.offline.sample_fraction =
            get_or<double>(o, "sample_fraction", cfg.offline.sample_fraction);
        cfg.offline.train_stride_s =
            get_or<double>(o, "train_stride_s", cfg.offline.train_stride_s);
        cfg.offline.epochs = get_or<int>(o, "epochs", cfg.offline.epochs);
        cfg.offline.batch_size = get_or<int>(o, "batch_size", cfg.offline.batch_size);
        cfg.offline.learning_rate =
            get_or<double>(o, "learning_rate", cfg.offline.learning_rate);
        cfg.offline.momentum = get_or<double>(o, "momentum", cfg.offline.momentum);
        cfg.offline.val_fraction = get_or<double>(o, "val_fraction", cfg.offline.val_fraction);
    }

    cfg.segment_duration_s = get_or<double>(j, "segment_duration_s", cfg.segment_duration_s);

    cfg.validate();
    return cfg;
}

AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const AppConfig& cfg) {
    json j;
    j["schema_version"] = cfg.schema_version;
    j["provision"] = {
        {"onprem_cores", cfg.provision.onprem_cores},
        {"buffer_bytes", cfg.provision.buffer_bytes},
        {"cloud_budget_credits", cfg.provision.cloud_budget_credits},
        {"uplink_bytes_per_s", cfg.provision.uplink_bytes_per_s},
        {"downlink_bytes_per_s", cfg.provision.downlink_bytes_per_s},
        {"cloud_cost_ratio", cfg.provision.cloud_cost_ratio},
    };
    j["prices"] = {
        {"onprem_credits_per_core_s", cfg.prices.onprem_credits_per_core_s},
        {"cloud_invocation_credits", cfg.prices.cloud_invocation_credits},
        {"egress_credits_per_byte", cfg.prices.egress_credits_per_byte},
    };
    j["horizon"] = {
        {"planned_interval_s", cfg.horizon.planned_interval_s},
        {"input_window_s", cfg.horizon.input_window_s},
        {"input_splits", cfg.horizon.input_splits},
        {"switch_period_s", cfg.horizon.switch_period_s},
    };
    j["offline"] = {
        {"n_pre", cfg.offline.n_pre},
        {"n_search", cfg.offline.n_search},
        {"category_count", cfg.offline.category_count},
        {"sample_fraction", cfg.offline.sample_fraction},
        {"train_stride_s", cfg.offline.train_stride_s},
        {"epochs", cfg.offline.epochs},
        {"batch_size", cfg.offline.batch_size},
        {"learning_rate", cfg.offline.learning_rate},
        {"momentum", cfg.offline.momentum},
        {"val_fraction", cfg.offline.val_fraction},
    };
    j["segment_duration_s"] = cfg.segment_duration_s;
    return j.dump(2) + "\n";
}

}  // namespace vetl
