#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "alstop/sparse.hpp"
#include "alstop/svm.hpp"

namespace alstop {

struct StoppingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class StopMethod { SP, DC, NC };
enum class StopSetKind { S, B, U };

std::string to_string(StopMethod m);
std::string to_string(StopSetKind k);

struct MonitorConfig {
    std::string name;
    StopMethod method = StopMethod::SP;
    StopSetKind stop_set = StopSetKind::S;
    int window = 3;          // k (SP)
    double threshold = 0.99; // K (SP)
    int patience = 3;        // epsilon (DC/NC)
};

// Rejects SP with the batch stop set: the batch is an entirely new set each
// iteration, so successive models cannot be compared on it.
void validate_monitor(const MonitorConfig& cfg);

// Labeled-vs-unlabeled pool bookkeeping for one AL run.
struct PoolState {
    std::vector<int> labeled;
    std::vector<int> unlabeled;  // ascending ids
    std::vector<int> batch;      // most recently annotated batch, ascending
    int iteration = 0;
};

// S -> the fixed list; B -> the batch just annotated; U -> the current
// unlabeled pool. Ascending id order. May be empty (U at exhaustion).
std::vector<int> resolve_stop_set(StopSetKind kind,
                                  const std::vector<int>& fixed_set,
                                  const PoolState& pool);

// Cohen's kappa between two binary prediction lists: (Ao - Ae) / (1 - Ae).
// When Ae = 1 (both raters constant) returns 1 for identical lists, else 0.
double kappa(std::span<const std::int8_t> preds_a,
             std::span<const std::int8_t> preds_b);

// Mean confidence over a stop set. geometric=false uses |w.x + b| instead of
// the norm-scaled distance.
double conf(const SvmModel& model, std::span<const int> stop_set_ids,
            const std::vector<SparseVector>& vectors, bool geometric = true);

struct SPState {
    int window_size = 3;
    double threshold = 0.99;
    std::deque<double> window;  // last window_size agreements
    std::optional<int> stopped_at;

    std::optional<double> window_mean() const;
};

// Feeds one agreement observation between the previous and current model on
// the resolved stop set; returns true once the windowed mean reaches the
// threshold. Sticky. An empty stop set leaves the state untouched.
bool sp_update(SPState& state, const SvmModel& prev_model,
               const SvmModel& curr_model, std::span<const int> stop_set_ids,
               const std::vector<SparseVector>& vectors, int iteration);

struct ConfState {
    StopMethod mode = StopMethod::DC;
    int patience = 3;
    std::vector<double> history;
    std::optional<int> stopped_at;
};

// DC: stop after `patience` consecutive strict decreases.
bool dc_update(ConfState& state, double conf_value, int iteration);

// NC: stop after `patience` consecutive non-increases (equality counts).
bool nc_update(ConfState& state, double conf_value, int iteration);

// Bootstrap standard error of kappa over stop-set positions; diagnostics
// only.
double kappa_bootstrap_se(std::span<const std::int8_t> preds_a,
                          std::span<const std::int8_t> preds_b,
                          int resamples = 1000, std::uint64_t seed = 0);

// One stopping method bound to one stop-set strategy, observing a run.
class StoppingMonitor {
public:
    StoppingMonitor(MonitorConfig cfg, std::vector<int> fixed_set);

    struct Observation {
        std::optional<double> value;  // conf, or SP window mean once defined
        int stop_set_size = 0;
        bool stopped = false;
    };

    // prev may be null on the first trained-model iteration (SP only caches
    // then). `geometric` selects the confidence distance variant.
    Observation observe(const SvmModel* prev, const SvmModel& curr,
                        const PoolState& pool,
                        const std::vector<SparseVector>& vectors,
                        bool geometric, int iteration);

    const MonitorConfig& config() const { return cfg_; }
    std::optional<int> stopped_at() const;
    const std::vector<int>& fixed_set() const { return fixed_set_; }

private:
    MonitorConfig cfg_;
    std::vector<int> fixed_set_;
    SPState sp_;
    ConfState conf_;
};

}  // namespace alstop
