#pragma once

#include <string>
#include <vector>

#include "vetl/config.hpp"
#include "vetl/model_file.hpp"
#include "vetl/planner.hpp"
#include "vetl/switcher.hpp"
#include "vetl/workload.hpp"

namespace vetl {

enum class AblationMode { None, BufferOnly, CloudOnly, Both };

AblationMode ablation_mode_from_string(const std::string& name);
std::string to_string(AblationMode mode);

struct EngineOptions {
    AblationMode mode = AblationMode::Both;
    bool fine_tune = true;
    // Test-only: classify from the upcoming segment's quality instead of the
    // previously reported one, removing the decision-time mismatch.
    bool no_type_b = false;
    bool record_decisions = true;
    uint64_t seed = 0;
};

struct TimelinePoint {
    double t = 0.0;                  // bin start
    double work_core_s_per_s = 0.0;  // dispatched work rate over the bin
    double buffer_bytes = 0.0;       // max occupancy seen in the bin
    double credits_fraction = 0.0;   // share of the interval budget spent
    double quality = 0.0;            // mean reported quality in the bin
};

struct MetricsReport {
    double total_quality = 0.0;
    double normalized_vs_optimum = -1.0;  // filled by callers when known
    double total_work_core_s = 0.0;
    double cloud_credits_spent = 0.0;
    double buffer_high_water_bytes = 0.0;
    int64_t decision_count = 0;
    bool infeasible = false;
    double infeasible_at_s = -1.0;
    std::vector<TimelinePoint> timeline;
    std::vector<DecisionRecord> decisions;
    std::vector<KnobPlan> plans;  // one per planned interval, for audit
};

// Full predictive + reactive ingestion over a simulated cluster: per planned
// interval the forecaster and LP produce a plan; per segment the switcher
// classifies, realizes the plan, and picks a buffer-safe placement whose
// runtime and cloud cost drive the buffer and credit ledgers.
MetricsReport run_ingestion(const Trace& trace, const FittedModel& fitted,
                            const WorkloadModel& model, const ResourceProvision& provision,
                            const Prices& prices, const PlanningHorizon& horizon,
                            const EngineOptions& options = {});

// One fixed configuration, always on-prem; the buffer only absorbs its own
// runtime excess. Records (rather than throws) infeasibility.
MetricsReport run_static_baseline(const Trace& trace, const KnobConfiguration& config,
                                  const WorkloadModel& model,
                                  const ResourceProvision& provision);

// Ground-truth scheduler: knows every segment's realized quality under every
// configuration and spends the work budget by greedy 0-1 knapsack upgrades.
MetricsReport run_optimum_baseline(const Trace& trace, const WorkloadModel& model,
                                   double work_budget_core_s);

// none: best real-time all-on-prem configuration, statically.
// buffer_only: no cloud placements, no cloud budget.
// cloud_only: buffer clamped to a single segment.
// both: the full system.
MetricsReport run_ablation(const Trace& trace, const FittedModel& fitted,
                           const WorkloadModel& model, const ResourceProvision& provision,
                           const Prices& prices, const PlanningHorizon& horizon,
                           AblationMode mode, const EngineOptions& options = {});

struct StreamSetup {
    const Trace* trace = nullptr;
    const FittedModel* fitted = nullptr;
    const WorkloadModel* model = nullptr;
};

// Several streams share the buffer, the cloud budget, and one jointly-planned
// LP; each stream's placements must have been profiled against the fair core
// share floor(cores / streams).
std::vector<MetricsReport> run_multi_ingestion(const std::vector<StreamSetup>& streams,
                                               const ResourceProvision& provision,
                                               const Prices& prices,
                                               const PlanningHorizon& horizon,
                                               const EngineOptions& options = {});

// Single-line key=value summary.
std::string summary_line(const MetricsReport& report);

// Writes <name>.summary.txt, <name>.timeline.csv, <name>.decisions.csv and
// <name>.plans.txt under out_dir.
void save_report(const MetricsReport& report, const std::string& out_dir,
                 const std::string& name);

}  // namespace vetl
