#include "alstop/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "alstop/rng.hpp"

namespace alstop {

std::string to_string(StopMethod m) {
    switch (m) {
        case StopMethod::SP: return "SP";
        case StopMethod::DC: return "DC";
        case StopMethod::NC: return "NC";
    }
    return "?";
}

std::string to_string(StopSetKind k) {
    switch (k) {
        case StopSetKind::S: return "S";
        case StopSetKind::B: return "B";
        case StopSetKind::U: return "U";
    }
    return "?";
}

void validate_monitor(const MonitorConfig& cfg) {
    if (cfg.method == StopMethod::SP && cfg.stop_set == StopSetKind::B)
        throw StoppingError(
            "monitor '" + cfg.name +
            "': SP cannot use the batch stop set (B is a completely new set "
            "at each iteration, so successive models cannot be compared on it)");
    if (cfg.method == StopMethod::SP) {
        if (cfg.window < 1) throw StoppingError("monitor '" + cfg.name + "': k must be >= 1");
    } else {
        if (cfg.patience < 1)
            throw StoppingError("monitor '" + cfg.name + "': epsilon must be >= 1");
    }
}

std::vector<int> resolve_stop_set(StopSetKind kind,
                                  const std::vector<int>& fixed_set,
                                  const PoolState& pool) {
    switch (kind) {
        case StopSetKind::S: return fixed_set;
        case StopSetKind::B: return pool.batch;
        case StopSetKind::U: return pool.unlabeled;
    }
    return {};
}

double kappa(std::span<const std::int8_t> preds_a,
             std::span<const std::int8_t> preds_b) {
    if (preds_a.size() != preds_b.size())
        throw StoppingError("kappa: prediction list length mismatch");
    if (preds_a.empty()) throw StoppingError("kappa: empty prediction lists");
    const double n = static_cast<double>(preds_a.size());
    long agree = 0, a_pos = 0, b_pos = 0;
    for (std::size_t i = 0; i < preds_a.size(); ++i) {
        agree += preds_a[i] == preds_b[i];
        a_pos += preds_a[i] > 0;
        b_pos += preds_b[i] > 0;
    }
    const double ao = agree / n;
    const double pa = a_pos / n, pb = b_pos / n;
    const double ae = pa * pb + (1.0 - pa) * (1.0 - pb);
    if (ae >= 1.0) return ao == 1.0 ? 1.0 : 0.0;
    return (ao - ae) / (1.0 - ae);
}

double conf(const SvmModel& model, std::span<const int> stop_set_ids,
            const std::vector<SparseVector>& vectors, bool geometric) {
    if (stop_set_ids.empty()) throw StoppingError("conf: empty stop set");
    double sum = 0.0;
    for (int id : stop_set_ids) {
        const auto& x = vectors[static_cast<std::size_t>(id)];
        sum += geometric ? hyperplane_distance(model, x)
                         : std::fabs(decision_value(model, x));
    }
    return sum / static_cast<double>(stop_set_ids.size());
}

std::optional<double> SPState::window_mean() const {
    if (window.empty()) return std::nullopt;
    double s = std::accumulate(window.begin(), window.end(), 0.0);
    return s / static_cast<double>(window.size());
}

bool sp_update(SPState& state, const SvmModel& prev_model,
               const SvmModel& curr_model, std::span<const int> stop_set_ids,
               const std::vector<SparseVector>& vectors, int iteration) {
    if (state.stopped_at) return true;
    if (stop_set_ids.empty()) return false;
    std::vector<std::int8_t> a, b;
    a.reserve(stop_set_ids.size());
    b.reserve(stop_set_ids.size());
    for (int id : stop_set_ids) {
        const auto& x = vectors[static_cast<std::size_t>(id)];
        a.push_back(static_cast<std::int8_t>(predict(prev_model, x)));
        b.push_back(static_cast<std::int8_t>(predict(curr_model, x)));
    }
    state.window.push_back(kappa(a, b));
    while (static_cast<int>(state.window.size()) > state.window_size)
        state.window.pop_front();
    if (static_cast<int>(state.window.size()) == state.window_size &&
        *state.window_mean() >= state.threshold) {
        state.stopped_at = iteration;
        return true;
    }
    return false;
}

namespace {

bool conf_update(ConfState& state, double conf_value, int iteration, bool strict) {
    if (state.stopped_at) return true;
    state.history.push_back(conf_value);
    const int n = static_cast<int>(state.history.size());
    if (n < state.patience + 1) return false;
    for (int i = n - state.patience; i < n; ++i) {
        const double prev = state.history[i - 1], curr = state.history[i];
        if (strict ? !(curr < prev) : !(curr <= prev)) return false;
    }
    state.stopped_at = iteration;
    return true;
}

}  // namespace

bool dc_update(ConfState& state, double conf_value, int iteration) {
    return conf_update(state, conf_value, iteration, /*strict=*/true);
}

bool nc_update(ConfState& state, double conf_value, int iteration) {
    return conf_update(state, conf_value, iteration, /*strict=*/false);
}

double kappa_bootstrap_se(std::span<const std::int8_t> preds_a,
                          std::span<const std::int8_t> preds_b,
                          int resamples, std::uint64_t seed) {
    if (preds_a.size() != preds_b.size() || preds_a.empty())
        throw StoppingError("kappa_bootstrap_se: invalid prediction lists");
    Rng rng(seed);
    const std::size_t n = preds_a.size();
    std::vector<std::int8_t> ra(n), rb(n);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = static_cast<std::size_t>(rng.below(n));
            ra[i] = preds_a[j];
            rb[i] = preds_b[j];
        }
        values.push_back(kappa(ra, rb));
    }
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / resamples;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= std::max(1, resamples - 1);
    return std::sqrt(var);
}

StoppingMonitor::StoppingMonitor(MonitorConfig cfg, std::vector<int> fixed_set)
    : cfg_(std::move(cfg)), fixed_set_(std::move(fixed_set)) {
    validate_monitor(cfg_);
    std::sort(fixed_set_.begin(), fixed_set_.end());
    sp_.window_size = cfg_.window;
    sp_.threshold = cfg_.threshold;
    conf_.mode = cfg_.method;
    conf_.patience = cfg_.patience;
}

std::optional<int> StoppingMonitor::stopped_at() const {
    return cfg_.method == StopMethod::SP ? sp_.stopped_at : conf_.stopped_at;
}

StoppingMonitor::Observation StoppingMonitor::observe(
    const SvmModel* prev, const SvmModel& curr, const PoolState& pool,
    const std::vector<SparseVector>& vectors, bool geometric, int iteration) {
    Observation obs;
    const auto ids = resolve_stop_set(cfg_.stop_set, fixed_set_, pool);
    obs.stop_set_size = static_cast<int>(ids.size());
    if (cfg_.method == StopMethod::SP) {
        if (prev && !ids.empty())
            sp_update(sp_, *prev, curr, ids, vectors, iteration);
        obs.value = sp_.window_mean();
        obs.stopped = sp_.stopped_at.has_value();
        return obs;
    }
    if (!ids.empty()) {
        const double c = conf(curr, ids, vectors, geometric);
        obs.value = c;
        if (cfg_.method == StopMethod::DC)
            dc_update(conf_, c, iteration);
        else
            nc_update(conf_, c, iteration);
    }
    obs.stopped = conf_.stopped_at.has_value();
    return obs;
}

}  // namespace alstop
