#include "vetl/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "vetl/rng.hpp"

namespace vetl {

using nlohmann::json;

int WorkloadModel::config_count() const {
    int count = 1;
    for (const Knob& k : knobs) count *= static_cast<int>(k.values.size());
    return count;
}

KnobConfiguration WorkloadModel::config_by_id(int id) const {
    KnobConfiguration k;
    k.id = id;
    k.choices.resize(knobs.size());
    // Row-major: the last knob varies fastest.
    for (int j = static_cast<int>(knobs.size()) - 1; j >= 0; --j) {
        const int domain = static_cast<int>(knobs[static_cast<size_t>(j)].values.size());
        k.choices[static_cast<size_t>(j)] = id % domain;
        id /= domain;
    }
    return k;
}

int WorkloadModel::config_id(const std::vector<int>& choices) const {
    int id = 0;
    for (size_t j = 0; j < knobs.size(); ++j)
        id = id * static_cast<int>(knobs[j].values.size()) + choices[j];
    return id;
}

std::vector<KnobConfiguration> WorkloadModel::all_configs() const {
    std::vector<KnobConfiguration> out;
    const int n = config_count();
    out.reserve(static_cast<size_t>(n));
    for (int id = 0; id < n; ++id) out.push_back(config_by_id(id));
    return out;
}

TaskGraph WorkloadModel::graph_for(const KnobConfiguration& k) const {
    TaskGraph g;
    g.nodes.reserve(graph_nodes.size());
    for (size_t i = 0; i < graph_nodes.size(); ++i) {
        const GraphNodeSpec& spec = graph_nodes[i];
        double mult = 1.0;
        double cmult = 1.0;
        for (size_t j = 0; j < knobs.size(); ++j) {
            mult *= spec.runtime_mult[j][static_cast<size_t>(k.choices[j])];
            if (!spec.cloud_mult.empty())
                cmult *= spec.cloud_mult[j][static_cast<size_t>(k.choices[j])];
        }
        TaskNode n;
        n.id = static_cast<int>(i);
        n.onprem_runtime_s = spec.base_runtime_s * mult;
        n.cloud_roundtrip_s = spec.cloud_roundtrip_s * cmult;
        n.input_bytes = spec.input_bytes;
        n.output_bytes = spec.output_bytes;
        g.nodes.push_back(n);
    }
    g.edges = graph_edges;
    return g;
}

std::vector<double> WorkloadModel::weights_at(double t) const {
    const size_t n = categories.size();
    std::vector<double> w(n);
    const double phase = std::sin(2.0 * std::numbers::pi * t / schedule.day_period_s);
    for (size_t c = 0; c < n; ++c) {
        const double amp = c < schedule.diurnal_amplitude.size() ? schedule.diurnal_amplitude[c] : 0.0;
        w[c] = std::max(1e-9, schedule.base_weight[c] * (1.0 + amp * phase));
    }
    for (const SpikeSpec& spike : schedule.spikes) {
        double local = t - spike.start_s;
        if (spike.period_s > 0 && local >= 0) local = std::fmod(local, spike.period_s);
        if (local >= 0 && local < spike.duration_s)
            w[static_cast<size_t>(spike.category)] *= spike.intensity;
    }
    return w;
}

std::vector<double> WorkloadModel::stationary_distribution() const {
    std::vector<double> w = schedule.base_weight;
    double total = 0.0;
    for (double v : w) total += v;
    for (double& v : w) v /= total;
    return w;
}

double WorkloadModel::max_noise_stddev() const {
    double s = 0.0;
    for (const CategorySpec& c : categories) s = std::max(s, c.noise_stddev);
    return s;
}

void WorkloadModel::validate() const {
    if (model_id.empty()) throw ValidationError("workload: model_id must be non-empty");
    if (segment_duration_s <= 0)
        throw ValidationError("workload: segment duration must be positive");
    if (segment_size_bytes <= 0)
        throw ValidationError("workload: segment size must be positive");
    if (knobs.empty()) throw ValidationError("workload: at least one knob required");
    for (const Knob& k : knobs) k.validate();
    if (categories.empty()) throw ValidationError("workload: at least one category required");

    const int n_configs = config_count();
    for (const CategorySpec& c : categories) {
        if (static_cast<int>(c.mean_quality.size()) != n_configs)
            throw ValidationError("workload: category '" + c.name +
                                  "': mean_quality must cover every configuration");
        for (double q : c.mean_quality)
            if (!(q >= 0.0 && q <= 1.0))
                throw ValidationError("workload: category '" + c.name +
                                      "': mean qualities must be in [0, 1]");
        if (c.noise_stddev < 0)
            throw ValidationError("workload: noise_stddev must be >= 0");
    }

    if (schedule.base_weight.size() != categories.size())
        throw ValidationError("workload: schedule base_weight must cover every category");
    for (double v : schedule.base_weight)
        if (v <= 0) throw ValidationError("workload: schedule weights must be positive");
    if (schedule.mean_dwell_s <= 0)
        throw ValidationError("workload: mean_dwell_s must be positive");
    if (schedule.day_period_s <= 0)
        throw ValidationError("workload: day_period_s must be positive");
    for (const SpikeSpec& s : schedule.spikes) {
        if (s.category < 0 || s.category >= static_cast<int>(categories.size()))
            throw ValidationError("workload: spike references missing category");
        if (s.duration_s <= 0 || s.intensity <= 0)
            throw ValidationError("workload: spike duration and intensity must be positive");
    }

    for (const GraphNodeSpec& n : graph_nodes) {
        if (n.runtime_mult.size() != knobs.size())
            throw ValidationError("workload: node '" + n.name +
                                  "': runtime_mult must cover every knob");
        for (size_t j = 0; j < knobs.size(); ++j) {
            if (n.runtime_mult[j].size() != knobs[j].values.size())
                throw ValidationError("workload: node '" + n.name +
                                      "': runtime_mult must cover every knob value");
            for (size_t v = 1; v < n.runtime_mult[j].size(); ++v)
                if (n.runtime_mult[j][v] < n.runtime_mult[j][v - 1])
                    throw ValidationError("workload: node '" + n.name +
                                          "': runtime_mult must be nondecreasing per knob");
        }
        if (!n.cloud_mult.empty()) {
            if (n.cloud_mult.size() != knobs.size())
                throw ValidationError("workload: node '" + n.name +
                                      "': cloud_mult must cover every knob");
            for (size_t j = 0; j < knobs.size(); ++j)
                if (n.cloud_mult[j].size() != knobs[j].values.size())
                    throw ValidationError("workload: node '" + n.name +
                                          "': cloud_mult must cover every knob value");
        }
    }
    // Graph shape checks (acyclic, edge targets) via a probe instantiation.
    graph_for(config_by_id(0)).validate();

    // Pareto structure: a pricier configuration may not be meaningfully worse
    // than a cheaper one within the same category.
    const auto configs = all_configs();
    std::vector<double> cost(configs.size());
    for (size_t i = 0; i < configs.size(); ++i) cost[i] = cost_of_config(graph_for(configs[i]));
    for (const CategorySpec& c : categories) {
        for (size_t a = 0; a < configs.size(); ++a)
            for (size_t b = 0; b < configs.size(); ++b)
                if (cost[a] > cost[b] &&
                    c.mean_quality[a] < c.mean_quality[b] - c.noise_stddev - 1e-12)
                    throw ValidationError(
                        "workload: category '" + c.name +
                        "': higher-cost configuration has materially lower mean quality");
    }
}

Trace generate_trace(const WorkloadModel& model, double duration_s, uint64_t seed) {
    if (duration_s < model.segment_duration_s)
        throw ValidationError("generate_trace: duration must cover at least one segment");

    Trace trace;
    trace.model_id = model.model_id;
    trace.seed = seed;

    const double d = model.segment_duration_s;
    const auto n_segments = static_cast<int64_t>(duration_s / d + 1e-9);
    trace.segments.reserve(static_cast<size_t>(n_segments));

    Rng rng(mix_seeds(seed, 0x7261636b));
    const size_t n_cat = model.categories.size();

    // Markov dwell walk: hold a category for an exponential dwell, then
    // redraw from the schedule weights at that time (self-transitions allowed,
    // so the flat-schedule occupancy matches the normalized weights).
    double next_switch_s = 0.0;
    int current = 0;
    for (int64_t i = 0; i < n_segments; ++i) {
        const double t = static_cast<double>(i) * d;
        while (t >= next_switch_s) {
            const std::vector<double> w = model.weights_at(next_switch_s);
            double total = 0.0;
            for (double v : w) total += v;
            double u = rng.next_double() * total;
            size_t pick = n_cat - 1;
            for (size_t c = 0; c < n_cat; ++c) {
                if (u < w[c]) {
                    pick = c;
                    break;
                }
                u -= w[c];
            }
            current = static_cast<int>(pick);
            next_switch_s += std::max(d, rng.next_exponential(model.schedule.mean_dwell_s));
        }
        Segment s;
        s.index = i;
        s.start_s = t;
        s.duration_s = d;
        s.size_bytes = model.segment_size_bytes;
        s.true_category = current;
        s.noise_seed = mix_seeds(seed, static_cast<uint64_t>(i) + 1);
        trace.segments.push_back(s);
    }
    return trace;
}

double oracle_quality(const KnobConfiguration& k, const Segment& s, const WorkloadModel& model) {
    const CategorySpec& cat = model.categories[static_cast<size_t>(s.true_category)];
    const double mean = cat.mean_quality[static_cast<size_t>(k.id)];
    if (cat.noise_stddev == 0.0) return std::clamp(mean, 0.0, 1.0);
    Rng rng(mix_seeds(s.noise_seed, static_cast<uint64_t>(k.id) * 0x9e37 + 17));
    return std::clamp(mean + cat.noise_stddev * rng.next_normal(), 0.0, 1.0);
}

QualityVector quality_vector(const Segment& s, const std::vector<KnobConfiguration>& configs,
                             const WorkloadModel& model) {
    QualityVector qv;
    qv.values.reserve(configs.size());
    for (const KnobConfiguration& k : configs) qv.values.push_back(oracle_quality(k, s, model));
    return qv;
}

namespace {

WorkloadModel default_model() {
    WorkloadModel m;
    m.model_id = "default-v1";
    m.segment_duration_s = 2.0;
    m.segment_size_bytes = 500000;
    m.knobs = {{"level", {"xs", "s", "m", "l", "xl"}}};

    const std::vector<double> mult = {0.25, 0.55, 1.0, 1.8, 3.0};
    m.graph_nodes = {
        {"detect", 0.40, 0.35, 1.5e6, 1.2e5, {mult}, {}},
        {"track", 0.25, 0.40, 8.0e5, 6.0e4, {mult}, {}},
        {"classify", 0.30, 0.45, 8.0e5, 6.0e4, {mult}, {}},
        {"fuse", 0.05, 0.30, 5.0e4, 1.0e4, {mult}, {}},
    };
    m.graph_edges = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};

    m.categories = {
        {"easy", {0.86, 0.90, 0.93, 0.95, 0.96}, 0.04},
        {"medium", {0.52, 0.68, 0.80, 0.88, 0.92}, 0.04},
        {"hard", {0.12, 0.32, 0.55, 0.74, 0.88}, 0.04},
    };

    m.schedule.base_weight = {0.50, 0.33, 0.17};
    m.schedule.diurnal_amplitude = {-0.75, 0.40, 0.90};
    m.schedule.day_period_s = 86400.0;
    m.schedule.mean_dwell_s = 40.0;
    return m;
}

WorkloadModel covid_model() {
    WorkloadModel m;
    m.model_id = "covid-v1";
    m.segment_duration_s = 2.0;
    m.segment_size_bytes = 500000;
    m.knobs = {
        {"frame_rate", {"1fps", "5fps", "10fps", "15fps", "30fps"}},
        {"detect_every", {"60", "30", "5", "1"}},
        {"tiles", {"1x1", "2x2"}},
    };

    const std::vector<double> fr = {0.10, 0.25, 0.45, 0.65, 1.0};
    const std::vector<double> de = {0.15, 0.30, 0.70, 1.0};
    const std::vector<double> ti = {0.55, 1.0};
    const std::vector<double> ones4 = {1, 1, 1, 1};
    const std::vector<double> ones2 = {1, 1};
    m.graph_nodes = {
        {"detect", 0.50, 0.40, 1.5e6, 1.2e5, {fr, de, ti}, {}},
        {"track", 0.30, 0.35, 8.0e5, 6.0e4, {fr, ones4, ones2}, {}},
        {"distance", 0.10, 0.30, 1.0e5, 2.0e4, {fr, ones4, ones2}, {}},
    };
    m.graph_edges = {{0, 1}, {1, 2}};

    // Quality tracks the configuration's normalized work with a mild per-knob
    // tilt: frame rate buys slightly more than its cost share, tiling
    // slightly less. The tilt is small enough to stay inside the noise slack
    // yet leaves some configurations dominated.
    struct Curve {
        const char* name;
        double lo, hi, gamma;
    };
    const std::vector<Curve> curves = {
        {"easy", 0.75, 0.97, 0.5}, {"medium", 0.45, 0.93, 0.8}, {"hard", 0.08, 0.88, 1.3}};

    const int n = m.config_count();
    std::vector<double> cost(static_cast<size_t>(n));
    double cost_lo = 1e18, cost_hi = 0.0;
    for (int id = 0; id < n; ++id) {
        cost[static_cast<size_t>(id)] = cost_of_config(m.graph_for(m.config_by_id(id)));
        cost_lo = std::min(cost_lo, cost[static_cast<size_t>(id)]);
        cost_hi = std::max(cost_hi, cost[static_cast<size_t>(id)]);
    }
    for (const Curve& cv : curves) {
        CategorySpec cat;
        cat.name = cv.name;
        cat.noise_stddev = 0.04;
        cat.mean_quality.resize(static_cast<size_t>(n));
        for (int id = 0; id < n; ++id) {
            const KnobConfiguration k = m.config_by_id(id);
            const double work_norm =
                (cost[static_cast<size_t>(id)] - cost_lo) / (cost_hi - cost_lo);
            const double fr_frac = static_cast<double>(k.choices[0]) / 4.0;
            const double ti_frac = static_cast<double>(k.choices[2]);
            const double tilt = 0.015 * (fr_frac - ti_frac);
            const double base = std::clamp(std::pow(work_norm, cv.gamma) + tilt, 0.0, 1.0);
            cat.mean_quality[static_cast<size_t>(id)] = cv.lo + (cv.hi - cv.lo) * base;
        }
        m.categories.push_back(std::move(cat));
    }

    m.schedule.base_weight = {0.50, 0.33, 0.17};
    m.schedule.diurnal_amplitude = {-0.75, 0.40, 0.90};
    m.schedule.day_period_s = 86400.0;
    m.schedule.mean_dwell_s = 42.0;
    return m;
}

// Shared base for the spike presets: a detector-dominated chain with six
// levels. The second-best level is heavier than real time on-prem but its
// cloud round trip stays flat enough to sustain; the top level is heavy on
// both sides, so only buffering absorbs it.
WorkloadModel spiky_model() {
    WorkloadModel m;
    m.model_id = "spiky-v1";
    m.segment_duration_s = 2.0;
    m.segment_size_bytes = 500000;
    m.knobs = {{"level", {"xs", "s", "m", "l", "xl", "xxl"}}};

    const std::vector<double> mult = {0.25, 0.55, 1.0, 1.2, 3.1, 4.5};
    const std::vector<double> cloud = {0.5, 0.6, 0.8, 1.0, 1.3, 2.6};
    m.graph_nodes = {
        {"detect", 0.80, 0.80, 1.2e6, 1.0e5, {mult}, {cloud}},
        {"post", 0.20, 0.30, 8.0e5, 5.0e4, {mult}, {cloud}},
    };
    m.graph_edges = {{0, 1}};

    // Quality peaks per category: easy and medium at the l level, hard at xl,
    // and only surge content rewards the top level. Oversized configurations
    // degrade slightly, comfortably within the noise band, so fitted cluster
    // centers keep the peaks even with sampling noise.
    m.categories = {
        {"easy", {0.86, 0.90, 0.93, 0.95, 0.93, 0.93}, 0.04},
        {"medium", {0.52, 0.68, 0.80, 0.91, 0.89, 0.89}, 0.04},
        {"hard", {0.22, 0.38, 0.55, 0.60, 0.82, 0.81}, 0.02},
        {"surge", {0.04, 0.12, 0.25, 0.40, 0.45, 0.97}, 0.01},
    };

    m.schedule.base_weight = {0.48, 0.32, 0.16, 0.04};
    m.schedule.diurnal_amplitude = {-0.75, 0.40, 0.90, 0.0};
    m.schedule.day_period_s = 86400.0;
    m.schedule.mean_dwell_s = 40.0;
    return m;
}

}  // namespace

WorkloadModel preset_workload_model(const std::string& name) {
    if (name == "default") {
        WorkloadModel m = default_model();
        m.validate();
        return m;
    }
    if (name == "covid") {
        WorkloadModel m = covid_model();
        m.validate();
        return m;
    }
    if (name == "high-spikes") {
        WorkloadModel m = spiky_model();
        m.model_id = "high-spikes-v1";
        // Tall, short bursts of the surge category.
        m.schedule.spikes = {{900.0, 240.0, 3, 200.0, 1800.0}};
        m.validate();
        return m;
    }
    if (name == "long-spikes") {
        WorkloadModel m = spiky_model();
        m.model_id = "long-spikes-v1";
        // One sustained block of the heavy category per period.
        m.schedule.spikes = {{1800.0, 5400.0, 2, 100.0, 10800.0}};
        m.validate();
        return m;
    }
    throw ValidationError("unknown workload preset '" + name + "'");
}

WorkloadModel parse_workload_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("workload: parse error: ") + e.what());
    }
    try {
        WorkloadModel m;
        m.model_id = j.at("model_id").get<std::string>();
        m.segment_duration_s = j.at("segment").at("duration_s").get<double>();
        m.segment_size_bytes = j.at("segment").at("size_bytes").get<int64_t>();
        for (const json& kj : j.at("knobs"))
            m.knobs.push_back({kj.at("name").get<std::string>(),
                               kj.at("values").get<std::vector<std::string>>()});
        for (const json& nj : j.at("graph").at("nodes")) {
            GraphNodeSpec n;
            n.name = nj.at("name").get<std::string>();
            n.base_runtime_s = nj.at("base_runtime_s").get<double>();
            n.cloud_roundtrip_s = nj.at("cloud_roundtrip_s").get<double>();
            n.input_bytes = nj.at("input_bytes").get<double>();
            n.output_bytes = nj.at("output_bytes").get<double>();
            n.runtime_mult = nj.at("runtime_mult").get<std::vector<std::vector<double>>>();
            if (nj.contains("cloud_mult"))
                n.cloud_mult = nj.at("cloud_mult").get<std::vector<std::vector<double>>>();
            m.graph_nodes.push_back(std::move(n));
        }
        for (const json& ej : j.at("graph").at("edges"))
            m.graph_edges.emplace_back(ej.at(0).get<int>(), ej.at(1).get<int>());
        for (const json& cj : j.at("categories")) {
            CategorySpec c;
            c.name = cj.at("name").get<std::string>();
            c.mean_quality = cj.at("mean_quality").get<std::vector<double>>();
            c.noise_stddev = cj.at("noise_stddev").get<double>();
            m.categories.push_back(std::move(c));
        }
        const json& sj = j.at("schedule");
        m.schedule.base_weight = sj.at("base_weight").get<std::vector<double>>();
        m.schedule.diurnal_amplitude =
            sj.value("diurnal_amplitude", std::vector<double>(m.categories.size(), 0.0));
        m.schedule.day_period_s = sj.value("day_period_s", 86400.0);
        m.schedule.mean_dwell_s = sj.value("mean_dwell_s", 40.0);
        if (sj.contains("spikes"))
            for (const json& spj : sj.at("spikes"))
                m.schedule.spikes.push_back({spj.at("start_s").get<double>(),
                                             spj.at("duration_s").get<double>(),
                                             spj.at("category").get<int>(),
                                             spj.at("intensity").get<double>(),
                                             spj.value("period_s", 0.0)});
        m.validate();
        return m;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("workload: bad model file: ") + e.what());
    }
}

WorkloadModel load_workload_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("workload: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_workload_model(buf.str());
}

std::string dump_workload_model(const WorkloadModel& m) {
    json j;
    j["schema_version"] = 1;
    j["model_id"] = m.model_id;
    j["segment"] = {{"duration_s", m.segment_duration_s}, {"size_bytes", m.segment_size_bytes}};
    j["knobs"] = json::array();
    for (const Knob& k : m.knobs) j["knobs"].push_back({{"name", k.name}, {"values", k.values}});
    json nodes = json::array();
    for (const GraphNodeSpec& n : m.graph_nodes) {
        json node = {{"name", n.name},
                     {"base_runtime_s", n.base_runtime_s},
                     {"cloud_roundtrip_s", n.cloud_roundtrip_s},
                     {"input_bytes", n.input_bytes},
                     {"output_bytes", n.output_bytes},
                     {"runtime_mult", n.runtime_mult}};
        if (!n.cloud_mult.empty()) node["cloud_mult"] = n.cloud_mult;
        nodes.push_back(std::move(node));
    }
    json edges = json::array();
    for (const auto& [a, b] : m.graph_edges) edges.push_back({a, b});
    j["graph"] = {{"nodes", nodes}, {"edges", edges}};
    j["categories"] = json::array();
    for (const CategorySpec& c : m.categories)
        j["categories"].push_back({{"name", c.name},
                                   {"mean_quality", c.mean_quality},
                                   {"noise_stddev", c.noise_stddev}});
    json spikes = json::array();
    for (const SpikeSpec& s : m.schedule.spikes)
        spikes.push_back({{"start_s", s.start_s},
                          {"duration_s", s.duration_s},
                          {"category", s.category},
                          {"intensity", s.intensity},
                          {"period_s", s.period_s}});
    j["schedule"] = {{"base_weight", m.schedule.base_weight},
                     {"diurnal_amplitude", m.schedule.diurnal_amplitude},
                     {"day_period_s", m.schedule.day_period_s},
                     {"mean_dwell_s", m.schedule.mean_dwell_s},
                     {"spikes", spikes}};
    return j.dump(2) + "\n";
}

void save_workload_model(const WorkloadModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw EngineError("workload: cannot write '" + path + "'");
    out << dump_workload_model(m);
}

void save_trace(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw EngineError("trace: cannot write '" + path + "'");
    out << "# vetl-trace schema=1 model=" << trace.model_id << " seed=" << trace.seed << "\n";
    out << "index,start_s,duration_s,size_bytes,true_category,noise_seed\n";
    char line[160];
    for (const Segment& s : trace.segments) {
        std::snprintf(line, sizeof(line), "%lld,%.6f,%.6f,%lld,%d,%llu\n",
                      static_cast<long long>(s.index), s.start_s, s.duration_s,
                      static_cast<long long>(s.size_bytes), s.true_category,
                      static_cast<unsigned long long>(s.noise_seed));
        out << line;
    }
}

Trace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("trace: cannot open '" + path + "'");
    Trace trace;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# vetl-trace", 0) != 0)
        throw ValidationError("trace: missing header in '" + path + "'");
    {
        std::istringstream hdr(line);
        std::string tok;
        while (hdr >> tok) {
            if (tok.rfind("model=", 0) == 0) trace.model_id = tok.substr(6);
            if (tok.rfind("seed=", 0) == 0) trace.seed = std::stoull(tok.substr(5));
        }
    }
    std::getline(in, line);  // column header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Segment s;
        long long idx = 0, bytes = 0;
        unsigned long long noise = 0;
        if (std::sscanf(line.c_str(), "%lld,%lf,%lf,%lld,%d,%llu", &idx, &s.start_s,
                        &s.duration_s, &bytes, &s.true_category, &noise) != 6)
            throw ValidationError("trace: malformed record: " + line);
        s.index = idx;
        s.size_bytes = bytes;
        s.noise_seed = noise;
        trace.segments.push_back(s);
    }
    for (size_t i = 0; i < trace.segments.size(); ++i)
        if (trace.segments[i].index != static_cast<int64_t>(i))
            throw ValidationError("trace: segment indices must be contiguous from 0");
    return trace;
}

}  // namespace vetl
