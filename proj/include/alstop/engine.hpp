#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "alstop/corpus.hpp"
#include "alstop/metrics.hpp"
#include "alstop/rng.hpp"
#include "alstop/stopping.hpp"
#include "alstop/svm.hpp"

namespace alstop {

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class QueryStrategy { Uncertainty, Random };

// Simulated annotator backed by the gold labels. Annotating the same id
// twice is a harness bug and throws.
class Oracle {
public:
    explicit Oracle(const BinaryTask& task) : task_(&task) {}

    int label(int id);
    long annotations() const { return annotations_; }

private:
    const BinaryTask* task_;
    std::vector<int> seen_;
    long annotations_ = 0;
};

// The min(b, |U|) ids with smallest |decision value|, ties broken by
// ascending id. Returns nothing useful for a constant-fallback model; the
// caller is expected to fall back to random selection then.
std::vector<int> select_batch_uncertainty(const SvmModel& model,
                                          const std::vector<int>& unlabeled,
                                          int batch_size,
                                          const std::vector<SparseVector>& vectors);

std::vector<int> select_batch_random(const std::vector<int>& unlabeled,
                                     int batch_size, Rng& rng);

struct EngineConfig {
    double batch_fraction = 0.005;
    double stop_set_fraction = 0.5;
    QueryStrategy strategy = QueryStrategy::Uncertainty;
    SvmParams svm;
    bool geometric_distance = true;
    std::vector<MonitorConfig> monitors;
    std::uint64_t seed = 0;
};

struct IterationEntry {
    int iteration = 0;      // 1-based index of the trained model
    long labeled = 0;       // |L| used to train this iteration's model
    MetricsReport test;     // test-set metrics of this iteration's model
    bool random_fallback = false;  // selection fell back to random this round
    std::vector<StoppingMonitor::Observation> monitors;
};

struct RunRecord {
    std::vector<IterationEntry> entries;
    std::vector<std::optional<int>> stop_iterations;  // per monitor; nullopt = never
    std::vector<int> stop_set_sizes_at_stop;          // per monitor
    std::optional<int> strategy_switch_iteration;     // random fallback ended here
    int batch_size = 0;
    long pool_size = 0;
    long dataset_size = 0;  // train + test, the ANN-P denominator
    std::vector<int> fixed_stop_set;                  // the S sample of this run
};

// Runs pool-based active learning to pool exhaustion with every monitor
// attached as a passive observer, so one run serves every stopping method.
RunRecord run_active_learning(const BinaryTask& task, const TaskSplit& split,
                              const EngineConfig& config);

// Trains once on the whole training pool and evaluates on test (the
// no-stopping ceiling). ANN = |training pool|.
MetricsReport final_baseline(const BinaryTask& task, const TaskSplit& split,
                             const SvmParams& svm);

}  // namespace alstop
