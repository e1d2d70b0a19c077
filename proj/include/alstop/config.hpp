#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "alstop/corpus.hpp"
#include "alstop/engine.hpp"

namespace alstop {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string dataset_path;
    CorpusFormat dataset_format = CorpusFormat::Jsonl;
    std::string dataset_name = "dataset";
    std::string stopword_path;  // empty = no stopword removal
    long min_count = 3;
    SplitScheme split;
    double batch_fraction = 0.005;
    double stop_set_fraction = 0.5;
    QueryStrategy strategy = QueryStrategy::Uncertainty;
    SvmParams svm;  // C=1, tol=1e-4, max_iter=1000 defaults
    bool geometric_distance = true;
    std::uint64_t seed = 0;
    std::string out_dir = "results";
    int workers = 1;
    std::vector<MonitorConfig> monitors;  // empty until resolve_defaults
};

// Flat key=value file with repeated monitor.<name>.<key> groups. '#' starts
// a comment. Unknown keys are errors naming the key.
ExperimentConfig parse_config_file(const std::string& path);

// Applies overrides (CLI flags win over file values), fills in the default
// monitor grid when none was configured, and validates everything.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out_dir;
    std::optional<QueryStrategy> strategy;
    std::optional<bool> geometric_distance;
    std::optional<double> batch_fraction;
};

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& overrides);
void resolve_defaults(ExperimentConfig& config);
void validate_config(const ExperimentConfig& config);

// Resolved config serialized back in the same key=value syntax.
std::string render_config(const ExperimentConfig& config);

}  // namespace alstop
