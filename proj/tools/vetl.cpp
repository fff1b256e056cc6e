#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vetl/config.hpp"
#include "vetl/engine.hpp"
#include "vetl/model_file.hpp"
#include "vetl/workload.hpp"

namespace fs = std::filesystem;
using namespace vetl;

namespace {

WorkloadModel resolve_workload(const std::string& workload_path, const std::string& preset) {
    if (!workload_path.empty()) return load_workload_model(workload_path);
    if (!preset.empty()) return preset_workload_model(preset);
    throw ValidationError("either --workload or --preset is required");
}

AppConfig resolve_config(const std::string& config_path) {
    if (config_path.empty()) return AppConfig{};
    return load_config(config_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vetl: adaptive knob tuning for stream ingestion on a simulated cluster"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    uint64_t seed = 0;
    bool verbose = false;
    app.add_option("--config", config_path, "app config file (JSON)");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed");
    app.add_flag("--verbose", verbose, "chatty progress output");

    // gen-trace
    auto* gen = app.add_subcommand("gen-trace", "generate a synthetic trace");
    std::string gen_workload, gen_preset, gen_out, gen_dump_model;
    double gen_duration = 3600.0;
    gen->add_option("--workload", gen_workload, "workload model file");
    gen->add_option("--preset", gen_preset, "built-in workload preset name");
    gen->add_option("--duration-s", gen_duration, "trace duration in seconds")->required();
    gen->add_option("--out", gen_out, "trace output path");
    gen->add_option("--dump-model", gen_dump_model, "also write the workload model JSON here");

    // fit
    auto* fit = app.add_subcommand("fit", "run the offline phase and write a model file");
    std::string fit_trace, fit_workload, fit_preset, fit_out;
    double fit_labeled = 0.05;
    fit->add_option("--trace", fit_trace, "training trace")->required();
    fit->add_option("--workload", fit_workload, "workload model file");
    fit->add_option("--preset", fit_preset, "built-in workload preset name");
    fit->add_option("--labeled-fraction", fit_labeled, "share of the trace treated as labeled");
    fit->add_option("--out", fit_out, "model file output path");

    // ingest / ablate share options
    std::string run_trace, run_workload, run_preset, run_model, run_mode = "both",
                run_name = "ingest";
    bool run_no_fine_tune = false;
    auto add_run_options = [&](CLI::App* cmd) {
        cmd->add_option("--trace", run_trace, "trace to ingest")->required();
        cmd->add_option("--workload", run_workload, "workload model file");
        cmd->add_option("--preset", run_preset, "built-in workload preset name");
        cmd->add_option("--model", run_model, "fitted model file")->required();
        cmd->add_option("--name", run_name, "report file prefix");
        cmd->add_flag("--no-fine-tune", run_no_fine_tune, "disable online fine-tuning");
    };
    auto* ingest = app.add_subcommand("ingest", "run the online ingestion loop");
    add_run_options(ingest);
    auto* ablate = app.add_subcommand("ablate", "run one ablation mode");
    add_run_options(ablate);
    ablate->add_option("--mode", run_mode, "none|buffer_only|cloud_only|both")->required();

    // baseline
    auto* baseline = app.add_subcommand("baseline", "run a baseline scheduler");
    std::string base_kind, base_trace, base_workload, base_preset, base_name = "baseline";
    int base_config_id = 0;
    double base_work_budget = -1.0;
    baseline->add_option("--kind", base_kind, "static|optimum")->required();
    baseline->add_option("--trace", base_trace, "trace")->required();
    baseline->add_option("--workload", base_workload, "workload model file");
    baseline->add_option("--preset", base_preset, "built-in workload preset name");
    baseline->add_option("--config-id", base_config_id, "configuration id (static)");
    baseline->add_option("--work-budget", base_work_budget,
                         "work budget in core-seconds (optimum); defaults to cores x duration");
    baseline->add_option("--name", base_name, "report file prefix");

    // report
    auto* rep = app.add_subcommand("report", "summarize saved reports");
    std::vector<std::string> rep_files;
    std::string rep_optimum;
    rep->add_option("--summary", rep_files, "summary files to print")->required();
    rep->add_option("--optimum", rep_optimum,
                    "optimum summary used to normalize the quality column");

    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(out_dir);
        const AppConfig config = resolve_config(config_path);
        if (verbose) std::fputs(dump_config(config).c_str(), stderr);

        if (gen->parsed()) {
            const WorkloadModel model = resolve_workload(gen_workload, gen_preset);
            if (!gen_dump_model.empty()) save_workload_model(model, gen_dump_model);
            const Trace trace = generate_trace(model, gen_duration, seed);
            const std::string out =
                gen_out.empty() ? (fs::path(out_dir) / "trace.csv").string() : gen_out;
            save_trace(trace, out);
            std::printf("wrote %zu segments to %s\n", trace.segments.size(), out.c_str());
            return 0;
        }

        if (fit->parsed()) {
            const WorkloadModel model = resolve_workload(fit_workload, fit_preset);
            const Trace trace = load_trace(fit_trace);
            FitTimings timings;
            const FittedModel fitted =
                fit_offline(trace, model, config, seed, fit_labeled, &timings);
            const std::string out =
                fit_out.empty() ? (fs::path(out_dir) / "model.json").string() : fit_out;
            save_fitted_model(fitted, out);
            std::printf("step                          runtime\n");
            std::printf("filter knob configurations    %.3f s\n", timings.filter_configs_s);
            std::printf("filter task placements        %.3f s\n", timings.filter_placements_s);
            std::printf("compute content categories    %.3f s\n", timings.categories_s);
            std::printf("create forecast training data %.3f s  (%zu samples)\n",
                        timings.dataset_s, timings.dataset_size);
            std::printf("train forecast model          %.3f s  (val loss %.4f)\n",
                        timings.train_s, timings.train_best_val_loss);
            std::printf("wrote %s (%zu configs, %d categories)\n", out.c_str(),
                        fitted.configs.size(), fitted.category_count());
            return 0;
        }

        if (ingest->parsed() || ablate->parsed()) {
            const WorkloadModel model = resolve_workload(run_workload, run_preset);
            const Trace trace = load_trace(run_trace);
            const FittedModel fitted = load_fitted_model(run_model);
            EngineOptions options;
            options.seed = seed;
            options.fine_tune = !run_no_fine_tune;
            const AblationMode mode =
                ablate->parsed() ? ablation_mode_from_string(run_mode) : AblationMode::Both;
            const MetricsReport report =
                run_ablation(trace, fitted, model, config.provision, config.prices,
                             config.horizon, mode, options);
            const std::string name =
                ablate->parsed() ? run_name + "." + to_string(mode) : run_name;
            save_report(report, out_dir, name);
            std::printf("%s\n", summary_line(report).c_str());
            return 0;
        }

        if (baseline->parsed()) {
            const WorkloadModel model = resolve_workload(base_workload, base_preset);
            const Trace trace = load_trace(base_trace);
            MetricsReport report;
            if (base_kind == "static") {
                if (base_config_id < 0 || base_config_id >= model.config_count())
                    throw ValidationError("baseline: --config-id out of range");
                report = run_static_baseline(trace, model.config_by_id(base_config_id), model,
                                             config.provision);
            } else if (base_kind == "optimum") {
                double budget = base_work_budget;
                if (budget < 0) {
                    const double duration =
                        static_cast<double>(trace.segments.size()) * model.segment_duration_s;
                    budget = compute_budget(config.provision, duration, config.prices);
                }
                report = run_optimum_baseline(trace, model, budget);
            } else {
                throw ValidationError("baseline: --kind must be static or optimum");
            }
            save_report(report, out_dir, base_name + "." + base_kind);
            std::printf("%s\n", summary_line(report).c_str());
            return 0;
        }

        if (rep->parsed()) {
            double optimum_quality = -1.0;
            if (!rep_optimum.empty()) {
                std::ifstream in(rep_optimum);
                if (!in) throw ValidationError("report: cannot open " + rep_optimum);
                std::string line;
                std::getline(in, line);
                const auto pos = line.find("total_quality=");
                if (pos != std::string::npos)
                    optimum_quality = std::stod(line.substr(pos + 14));
            }
            for (const std::string& file : rep_files) {
                std::ifstream in(file);
                if (!in) throw ValidationError("report: cannot open " + file);
                std::string line;
                std::getline(in, line);
                if (optimum_quality > 0) {
                    const auto pos = line.find("total_quality=");
                    const double q =
                        pos == std::string::npos ? 0.0 : std::stod(line.substr(pos + 14));
                    std::printf("%s: %s normalized=%.4f\n", file.c_str(), line.c_str(),
                                q / optimum_quality);
                } else {
                    std::printf("%s: %s\n", file.c_str(), line.c_str());
                }
            }
            return 0;
        }
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
