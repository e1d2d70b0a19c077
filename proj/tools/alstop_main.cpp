#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "alstop/config.hpp"
#include "alstop/corpus.hpp"
#include "alstop/harness.hpp"

namespace {

constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

alstop::ExperimentConfig load_and_resolve(const std::string& config_path,
                                          const alstop::ConfigOverrides& overrides) {
    auto config = alstop::parse_config_file(config_path);
    alstop::apply_overrides(config, overrides);
    alstop::resolve_defaults(config);
    alstop::validate_config(config);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active learning stopping-criteria benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    alstop::ConfigOverrides overrides;
    std::string strategy_flag, distance_flag;

    auto* run = app.add_subcommand("run", "Run the experiment grid");
    run->add_option("--config", config_path, "Experiment config file")->required();
    std::optional<long> seed_flag;
    std::optional<int> workers_flag;
    std::optional<std::string> out_flag;
    std::optional<double> batch_flag;
    run->add_option("--seed", seed_flag, "Master seed (overrides config)");
    run->add_option("--workers", workers_flag, "Concurrent run workers");
    run->add_option("--out", out_flag, "Output directory");
    run->add_option("--strategy", strategy_flag, "uncertainty|random");
    run->add_option("--distance", distance_flag, "geometric|functional");
    run->add_option("--batch-fraction", batch_flag, "Batch size fraction");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
    int synth_docs = 0, synth_terms = 0;
    double synth_sep = 0.5;
    long synth_seed = 0;
    std::string synth_out;
    synth->add_option("--docs", synth_docs, "Number of documents")->required();
    synth->add_option("--terms", synth_terms, "Vocabulary size")->required();
    synth->add_option("--sep", synth_sep, "Class separation in [0,1]");
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("--out", synth_out, "Output directory")->required();

    auto* validate = app.add_subcommand("validate", "Validate a config file");
    validate->add_option("--config", config_path, "Experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (seed_flag) overrides.seed = static_cast<std::uint64_t>(*seed_flag);
        if (workers_flag) overrides.workers = *workers_flag;
        if (out_flag) overrides.out_dir = *out_flag;
        if (batch_flag) overrides.batch_fraction = *batch_flag;
        if (!strategy_flag.empty()) {
            if (strategy_flag == "uncertainty")
                overrides.strategy = alstop::QueryStrategy::Uncertainty;
            else if (strategy_flag == "random")
                overrides.strategy = alstop::QueryStrategy::Random;
            else
                throw alstop::ConfigError("invalid --strategy: " + strategy_flag);
        }
        if (!distance_flag.empty()) {
            if (distance_flag == "geometric")
                overrides.geometric_distance = true;
            else if (distance_flag == "functional")
                overrides.geometric_distance = false;
            else
                throw alstop::ConfigError("invalid --distance: " + distance_flag);
        }

        if (run->parsed()) {
            auto config = load_and_resolve(config_path, overrides);
            try {
                alstop::run_experiment(config);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitRuntimeError;
            }
            std::cout << "results written to " << config.out_dir << "\n";
            return 0;
        }
        if (synth->parsed()) {
            try {
                auto corpus = alstop::synth_generate(
                    synth_docs, synth_terms, synth_sep,
                    static_cast<std::uint64_t>(synth_seed));
                std::filesystem::create_directories(synth_out);
                const auto path = std::filesystem::path(synth_out) / "corpus.jsonl";
                std::ofstream out(path, std::ios::binary);
                if (!out) throw std::runtime_error("cannot write " + path.string());
                for (const auto& d : corpus.docs) {
                    nlohmann::json rec{{"id", d.id}, {"text", d.text}, {"label", d.label}};
                    out << rec.dump() << "\n";
                }
                std::cout << "wrote " << corpus.docs.size() << " documents to "
                          << path.string() << "\n";
            } catch (const alstop::CorpusError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitConfigError;
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitRuntimeError;
            }
            return 0;
        }
        if (validate->parsed()) {
            auto config = load_and_resolve(config_path, overrides);
            std::cout << alstop::render_config(config);
            return 0;
        }
    } catch (const alstop::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return 0;
}
