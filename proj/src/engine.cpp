#include "alstop/engine.hpp"

#include <algorithm>
#include <cmath>

#include "alstop/rng.hpp"

namespace alstop {

int Oracle::label(int id) {
    if (id < 0 || static_cast<std::size_t>(id) >= task_->size())
        throw EngineError("oracle: id out of range");
    if (std::find(seen_.begin(), seen_.end(), id) != seen_.end())
        throw EngineError("oracle: id " + std::to_string(id) +
                          " annotated twice (harness bug)");
    seen_.push_back(id);
    ++annotations_;
    return task_->labels[static_cast<std::size_t>(id)];
}

std::vector<int> select_batch_uncertainty(const SvmModel& model,
                                          const std::vector<int>& unlabeled,
                                          int batch_size,
                                          const std::vector<SparseVector>& vectors) {
    std::vector<std::pair<double, int>> scored;
    scored.reserve(unlabeled.size());
    for (int id : unlabeled)
        scored.emplace_back(
            std::fabs(decision_value(model, vectors[static_cast<std::size_t>(id)])),
            id);
    const std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(batch_size), scored.size());
    std::partial_sort(scored.begin(), scored.begin() + take, scored.end());
    std::vector<int> batch;
    batch.reserve(take);
    for (std::size_t i = 0; i < take; ++i) batch.push_back(scored[i].second);
    return batch;
}

std::vector<int> select_batch_random(const std::vector<int>& unlabeled,
                                     int batch_size, Rng& rng) {
    return rng.sample_without_replacement(
        unlabeled, static_cast<std::size_t>(batch_size));
}

namespace {

MetricsReport evaluate_on_test(const SvmModel& model, const BinaryTask& task,
                               const TaskSplit& split, long annotations,
                               long dataset_size) {
    std::vector<std::int8_t> preds, gold;
    preds.reserve(split.test.size());
    gold.reserve(split.test.size());
    for (int id : split.test) {
        preds.push_back(static_cast<std::int8_t>(
            predict(model, (*task.vectors)[static_cast<std::size_t>(id)])));
        gold.push_back(task.labels[static_cast<std::size_t>(id)]);
    }
    return metrics_from_confusion(confusion(preds, gold), annotations, dataset_size);
}

void annotate_batch(const std::vector<int>& batch, Oracle& oracle,
                    PoolState& pool, std::vector<std::int8_t>& observed_labels) {
    for (int id : batch)
        observed_labels[static_cast<std::size_t>(id)] =
            static_cast<std::int8_t>(oracle.label(id));
    std::vector<int> sorted_batch = batch;
    std::sort(sorted_batch.begin(), sorted_batch.end());
    std::vector<int> remaining;
    remaining.reserve(pool.unlabeled.size() - sorted_batch.size());
    std::set_difference(pool.unlabeled.begin(), pool.unlabeled.end(),
                        sorted_batch.begin(), sorted_batch.end(),
                        std::back_inserter(remaining));
    pool.unlabeled = std::move(remaining);
    pool.labeled.insert(pool.labeled.end(), sorted_batch.begin(), sorted_batch.end());
    std::sort(pool.labeled.begin(), pool.labeled.end());
    pool.batch = std::move(sorted_batch);
}

}  // namespace

RunRecord run_active_learning(const BinaryTask& task, const TaskSplit& split,
                              const EngineConfig& config) {
    if (split.train.empty()) throw EngineError("empty training pool");
    if (config.batch_fraction <= 0.0 || config.batch_fraction > 1.0)
        throw EngineError("batch_fraction must be in (0, 1]");
    for (const auto& m : config.monitors) validate_monitor(m);

    RunRecord record;
    record.pool_size = static_cast<long>(split.train.size());
    record.dataset_size = record.pool_size + static_cast<long>(split.test.size());
    record.batch_size = std::max(
        1L, round_half_up(config.batch_fraction * static_cast<double>(record.pool_size)));
    const int b = record.batch_size;

    Rng rng(config.seed);
    std::vector<int> train_ids = split.train;
    std::sort(train_ids.begin(), train_ids.end());

    // The fixed stop set S is sampled once, before any annotation.
    const std::size_t s_size = static_cast<std::size_t>(std::max(
        0L, round_half_up(config.stop_set_fraction * static_cast<double>(record.pool_size))));
    std::vector<int> fixed_set = rng.sample_without_replacement(train_ids, s_size);
    std::sort(fixed_set.begin(), fixed_set.end());
    record.fixed_stop_set = fixed_set;

    std::vector<StoppingMonitor> monitors;
    monitors.reserve(config.monitors.size());
    for (const auto& cfg : config.monitors) monitors.emplace_back(cfg, fixed_set);

    const auto& vectors = *task.vectors;
    Oracle oracle(task);
    PoolState pool;
    pool.unlabeled = train_ids;
    std::vector<std::int8_t> observed_labels(vectors.size(), 0);

    annotate_batch(select_batch_random(pool.unlabeled, b, rng), oracle, pool,
                   observed_labels);

    SvmModel prev_model;
    bool have_prev = false;
    bool fallback_used = false;
    int iteration = 0;
    while (true) {
        ++iteration;
        pool.iteration = iteration;

        std::vector<SparseVector> train_x;
        std::vector<std::int8_t> train_y;
        train_x.reserve(pool.labeled.size());
        for (int id : pool.labeled) {
            train_x.push_back(vectors[static_cast<std::size_t>(id)]);
            train_y.push_back(observed_labels[static_cast<std::size_t>(id)]);
        }
        SvmParams params = config.svm;
        params.seed = hash_seed(config.seed, "svm-epoch-order", "", iteration);
        SvmModel model = train_svm(train_x, train_y, params);

        IterationEntry entry;
        entry.iteration = iteration;
        entry.labeled = oracle.annotations();
        entry.test = evaluate_on_test(model, task, split, entry.labeled,
                                      record.dataset_size);
        for (auto& monitor : monitors)
            entry.monitors.push_back(monitor.observe(have_prev ? &prev_model : nullptr,
                                                     model, pool, vectors,
                                                     config.geometric_distance,
                                                     iteration));
        record.entries.push_back(std::move(entry));

        if (pool.unlabeled.empty()) break;

        const bool need_random = config.strategy == QueryStrategy::Random ||
                                 model.constant_fallback.has_value();
        if (config.strategy == QueryStrategy::Uncertainty) {
            if (model.constant_fallback) {
                fallback_used = true;
                record.entries.back().random_fallback = true;
            } else if (fallback_used && !record.strategy_switch_iteration) {
                record.strategy_switch_iteration = iteration;
            }
        }
        std::vector<int> batch =
            need_random ? select_batch_random(pool.unlabeled, b, rng)
                        : select_batch_uncertainty(model, pool.unlabeled, b, vectors);
        annotate_batch(batch, oracle, pool, observed_labels);

        prev_model = std::move(model);
        have_prev = true;
    }

    record.stop_iterations.reserve(monitors.size());
    record.stop_set_sizes_at_stop.reserve(monitors.size());
    for (std::size_t m = 0; m < monitors.size(); ++m) {
        auto stop = monitors[m].stopped_at();
        record.stop_iterations.push_back(stop);
        const IterationEntry& at =
            stop ? record.entries[static_cast<std::size_t>(*stop - 1)]
                 : record.entries.back();
        record.stop_set_sizes_at_stop.push_back(at.monitors[m].stop_set_size);
    }
    return record;
}

MetricsReport final_baseline(const BinaryTask& task, const TaskSplit& split,
                             const SvmParams& svm) {
    if (split.train.empty()) throw EngineError("empty training pool");
    const auto& vectors = *task.vectors;
    std::vector<SparseVector> train_x;
    std::vector<std::int8_t> train_y;
    train_x.reserve(split.train.size());
    for (int id : split.train) {
        train_x.push_back(vectors[static_cast<std::size_t>(id)]);
        train_y.push_back(task.labels[static_cast<std::size_t>(id)]);
    }
    SvmModel model = train_svm(train_x, train_y, svm);
    return evaluate_on_test(model, task, split,
                            static_cast<long>(split.train.size()),
                            static_cast<long>(split.train.size() + split.test.size()));
}

}  // namespace alstop
