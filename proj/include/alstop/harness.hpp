#pragma once

#include <string>
#include <vector>

#include "alstop/config.hpp"
#include "alstop/engine.hpp"

namespace alstop {

struct HarnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunResult {
    std::string task;
    int fold = 0;
    RunRecord record;
    MetricsReport final_report;
};

// Metrics of the entry at the monitor's stop iteration; a monitor that never
// fired reports the last entry (the full-pool model).
const MetricsReport& metrics_at_stop(const RunRecord& record, std::size_t monitor);

// Executes the full grid (tasks x folds) with every monitor attached and
// returns results in deterministic (task, fold) order.
std::vector<RunResult> execute_grid(const ExperimentConfig& config);

// Macro results table CSV: one row per stat, one column per monitor plus
// Final, and a best column (min wins for ANN/ANN-P, max otherwise; ties flag
// every tied monitor).
std::string emit_results_table(const std::vector<std::string>& monitor_names,
                               const std::vector<MetricsReport>& monitor_macro,
                               const MetricsReport& final_macro);

// Same table rounded to 3 decimals for display.
std::string emit_pretty_table(const std::vector<std::string>& monitor_names,
                              const std::vector<MetricsReport>& monitor_macro,
                              const MetricsReport& final_macro);

// Runs the experiment and writes results.csv, per_task.csv, stops.csv,
// results_pretty.txt, config_resolved.txt and curves/<task>_<fold>.csv under
// config.out_dir. Partial outputs are removed if anything fails.
void run_experiment(const ExperimentConfig& config);

// Shortest round-trip decimal representation (the CSV serialization).
std::string format_double(double v);

}  // namespace alstop
