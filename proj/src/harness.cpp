#include "alstop/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "alstop/rng.hpp"

namespace fs = std::filesystem;

namespace alstop {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw HarnessError("number formatting failed");
    return std::string(buf, ptr);
}

const MetricsReport& metrics_at_stop(const RunRecord& record, std::size_t monitor) {
    const auto& stop = record.stop_iterations.at(monitor);
    if (stop) return record.entries[static_cast<std::size_t>(*stop - 1)].test;
    return record.entries.back().test;
}

namespace {

std::string sanitize(const std::string& name) {
    std::string out;
    for (unsigned char c : name)
        out.push_back(std::isalnum(c) ? static_cast<char>(c) : '_');
    return out;
}

struct RunJob {
    std::string task_name;
    int fold = 0;
    const BinaryTask* task = nullptr;
    const TaskSplit* split = nullptr;
};

}  // namespace

std::vector<RunResult> execute_grid(const ExperimentConfig& config) {
    Corpus corpus = load_corpus(config.dataset_path, config.dataset_format);
    std::set<std::string> stopwords;
    if (!config.stopword_path.empty())
        stopwords = load_stopwords(config.stopword_path);

    std::vector<std::vector<std::string>> token_lists;
    token_lists.reserve(corpus.docs.size());
    for (const auto& d : corpus.docs) token_lists.push_back(tokenize(d.text, stopwords));

    if (corpus.categories().size() < 2)
        throw HarnessError("corpus must contain at least two categories");

    // Splits depend only on document order, so they are shared across tasks.
    BinaryTask skeleton;
    skeleton.labels.assign(corpus.docs.size(), 1);
    const std::vector<TaskSplit> splits = split(skeleton, config.split, config.seed);

    // Vocabulary is rebuilt from each fold's training documents; every task
    // of a fold shares one vectorization.
    std::vector<std::vector<BinaryTask>> fold_tasks(splits.size());
    std::vector<std::string> warnings;
    for (std::size_t f = 0; f < splits.size(); ++f) {
        std::vector<std::vector<std::string>> train_tokens;
        train_tokens.reserve(splits[f].train.size());
        for (int id : splits[f].train)
            train_tokens.push_back(token_lists[static_cast<std::size_t>(id)]);
        Vocabulary vocab = Vocabulary::build(train_tokens, config.min_count);
        fold_tasks[f] = make_tasks(corpus, token_lists, vocab,
                                   f == 0 ? &warnings : nullptr);
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    std::vector<RunJob> jobs;
    for (std::size_t t = 0; t < fold_tasks[0].size(); ++t)
        for (std::size_t f = 0; f < splits.size(); ++f)
            jobs.push_back({fold_tasks[f][t].positive_category,
                            splits[f].fold, &fold_tasks[f][t], &splits[f]});

    std::vector<RunResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        while (!failed) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const RunJob& job = jobs[i];
            try {
                EngineConfig engine;
                engine.batch_fraction = config.batch_fraction;
                engine.stop_set_fraction = config.stop_set_fraction;
                engine.strategy = config.strategy;
                engine.svm = config.svm;
                engine.geometric_distance = config.geometric_distance;
                engine.monitors = config.monitors;
                engine.seed = hash_seed(config.seed, config.dataset_name,
                                        job.task_name, job.fold);
                RunResult r;
                r.task = job.task_name;
                r.fold = job.fold;
                r.record = run_active_learning(*job.task, *job.split, engine);
                SvmParams final_params = config.svm;
                final_params.seed = hash_seed(config.seed, config.dataset_name,
                                              job.task_name + "|final", job.fold);
                r.final_report = final_baseline(*job.task, *job.split, final_params);
                results[i] = std::move(r);
            } catch (const std::exception& e) {
                std::lock_guard lock(failure_mutex);
                failure = e.what();
                failed = true;
            }
        }
    };

    const int n_workers = std::max(1, std::min<int>(config.workers,
                                                    static_cast<int>(jobs.size())));
    std::vector<std::thread> threads;
    for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (failed) throw HarnessError(failure);
    return results;
}

namespace {

struct StatRow {
    const char* name;
    double MetricsReport::* field;
    bool lower_is_better;
};

constexpr StatRow kStatRows[] = {
    {"ANN", &MetricsReport::ann, true},
    {"ANN-P", &MetricsReport::ann_p, true},
    {"F1", &MetricsReport::f1, false},
    {"F2", &MetricsReport::f2, false},
    {"ACC", &MetricsReport::acc, false},
    {"BAC", &MetricsReport::bac, false},
};

std::vector<std::size_t> best_monitors(const StatRow& row,
                                       const std::vector<MetricsReport>& macro) {
    std::vector<std::size_t> best;
    double best_value = 0.0;
    for (std::size_t m = 0; m < macro.size(); ++m) {
        const double v = macro[m].*row.field;
        if (best.empty() || (row.lower_is_better ? v < best_value : v > best_value)) {
            best = {m};
            best_value = v;
        } else if (v == best_value) {
            best.push_back(m);
        }
    }
    return best;
}

std::string round3(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(3);
    out << v;
    return out.str();
}

}  // namespace

std::string emit_results_table(const std::vector<std::string>& monitor_names,
                               const std::vector<MetricsReport>& monitor_macro,
                               const MetricsReport& final_macro) {
    if (monitor_names.size() != monitor_macro.size())
        throw HarnessError("monitor name/report count mismatch");
    std::ostringstream out;
    out << "stat";
    for (const auto& name : monitor_names) out << "," << name;
    out << ",Final,best\n";
    for (const auto& row : kStatRows) {
        out << row.name;
        for (const auto& report : monitor_macro)
            out << "," << format_double(report.*row.field);
        out << "," << format_double(final_macro.*row.field);
        out << ",";
        const auto best = best_monitors(row, monitor_macro);
        for (std::size_t i = 0; i < best.size(); ++i) {
            if (i) out << ";";
            out << monitor_names[best[i]];
        }
        out << "\n";
    }
    return out.str();
}

std::string emit_pretty_table(const std::vector<std::string>& monitor_names,
                              const std::vector<MetricsReport>& monitor_macro,
                              const MetricsReport& final_macro) {
    std::ostringstream out;
    out << "Stat";
    for (const auto& name : monitor_names) out << "\t" << name;
    out << "\tFinal\n";
    for (const auto& row : kStatRows) {
        out << row.name;
        const auto best = best_monitors(row, monitor_macro);
        for (std::size_t m = 0; m < monitor_macro.size(); ++m) {
            const double v = monitor_macro[m].*row.field;
            const bool is_best =
                std::find(best.begin(), best.end(), m) != best.end();
            out << "\t" << (is_best ? "*" : "") << round3(v);
        }
        out << "\t" << round3(final_macro.*row.field) << "\n";
    }
    return out.str();
}

void run_experiment(const ExperimentConfig& config) {
    validate_config(config);
    std::vector<RunResult> results = execute_grid(config);

    const fs::path out_dir(config.out_dir);
    std::vector<fs::path> written;
    auto open_out = [&](const fs::path& p) {
        fs::create_directories(p.parent_path());
        written.push_back(p);
        std::ofstream out(p, std::ios::binary);
        if (!out) throw HarnessError("cannot write " + p.string());
        return out;
    };

    try {
        std::vector<std::string> monitor_names;
        for (const auto& m : config.monitors) monitor_names.push_back(m.name);
        const std::size_t n_monitors = monitor_names.size();

        {
            auto out = open_out(out_dir / "config_resolved.txt");
            out << render_config(config);
        }

        // curves/<task>_<fold>.csv
        for (const auto& r : results) {
            auto out = open_out(out_dir / "curves" /
                                (sanitize(r.task) + "_" + std::to_string(r.fold) + ".csv"));
            out << "iteration,ann,f1,f2,acc,bac,random_fallback";
            for (const auto& name : monitor_names)
                out << "," << name << "_value," << name << "_stop";
            out << "\n";
            for (const auto& e : r.record.entries) {
                out << e.iteration << "," << e.labeled << ","
                    << format_double(e.test.f1) << "," << format_double(e.test.f2)
                    << "," << format_double(e.test.acc) << ","
                    << format_double(e.test.bac) << "," << (e.random_fallback ? 1 : 0);
                for (const auto& obs : e.monitors) {
                    out << ",";
                    if (obs.value) out << format_double(*obs.value);
                    out << "," << (obs.stopped ? 1 : 0);
                }
                out << "\n";
            }
        }

        // stops.csv
        {
            auto out = open_out(out_dir / "stops.csv");
            out << "monitor,task,fold,stop_iteration,ann_at_stop,"
                   "stop_set_size_at_stop,u_fraction_at_stop\n";
            for (std::size_t m = 0; m < n_monitors; ++m) {
                for (const auto& r : results) {
                    const auto& stop = r.record.stop_iterations[m];
                    const auto& at = metrics_at_stop(r.record, m);
                    const double u_fraction =
                        (static_cast<double>(r.record.pool_size) - at.ann) /
                        static_cast<double>(r.record.dataset_size);
                    out << monitor_names[m] << "," << r.task << "," << r.fold << ",";
                    if (stop)
                        out << *stop;
                    else
                        out << "never";
                    out << "," << static_cast<long>(at.ann) << ","
                        << r.record.stop_set_sizes_at_stop[m] << ","
                        << format_double(u_fraction) << "\n";
                }
            }
        }

        // per-task macro over folds, plus Final rows.
        std::vector<std::string> task_names;
        for (const auto& r : results)
            if (std::find(task_names.begin(), task_names.end(), r.task) ==
                task_names.end())
                task_names.push_back(r.task);

        {
            auto out = open_out(out_dir / "per_task.csv");
            out << "task,monitor,ANN,ANN-P,F1,F2,ACC,BAC,degenerate\n";
            auto emit_row = [&](const std::string& task, const std::string& monitor,
                                const MetricsReport& rep) {
                out << task << "," << monitor << "," << format_double(rep.ann) << ","
                    << format_double(rep.ann_p) << "," << format_double(rep.f1) << ","
                    << format_double(rep.f2) << "," << format_double(rep.acc) << ","
                    << format_double(rep.bac) << "," << (rep.degenerate ? 1 : 0)
                    << "\n";
            };
            for (const auto& task : task_names) {
                for (std::size_t m = 0; m < n_monitors; ++m) {
                    std::vector<MetricsReport> reps;
                    for (const auto& r : results)
                        if (r.task == task) reps.push_back(metrics_at_stop(r.record, m));
                    emit_row(task, monitor_names[m], aggregate_macro(reps));
                }
                std::vector<MetricsReport> finals;
                for (const auto& r : results)
                    if (r.task == task) finals.push_back(r.final_report);
                emit_row(task, "Final", aggregate_macro(finals));
            }
        }

        // Overall macro across every (task, fold) run.
        std::vector<MetricsReport> monitor_macro;
        for (std::size_t m = 0; m < n_monitors; ++m) {
            std::vector<MetricsReport> reps;
            for (const auto& r : results) reps.push_back(metrics_at_stop(r.record, m));
            monitor_macro.push_back(aggregate_macro(reps));
        }
        std::vector<MetricsReport> finals;
        for (const auto& r : results) finals.push_back(r.final_report);
        const MetricsReport final_macro = aggregate_macro(finals);

        {
            auto out = open_out(out_dir / "results.csv");
            out << emit_results_table(monitor_names, monitor_macro, final_macro);
        }
        {
            auto out = open_out(out_dir / "results_pretty.txt");
            out << emit_pretty_table(monitor_names, monitor_macro, final_macro);
        }
    } catch (...) {
        for (const auto& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        throw;
    }
}

}  // namespace alstop
