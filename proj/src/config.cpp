#include "alstop/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace alstop {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value for '" + key + "': " + value);
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer value for '" + key + "': " + value);
    }
}

std::vector<int> parse_id_list(const std::string& key, const std::string& value) {
    std::vector<int> ids;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) ids.push_back(static_cast<int>(parse_long(key, item)));
    }
    return ids;
}

MonitorConfig& monitor_by_name(std::vector<MonitorConfig>& monitors,
                               const std::string& name) {
    for (auto& m : monitors)
        if (m.name == name) return m;
    MonitorConfig m;
    m.name = name;
    monitors.push_back(m);
    return monitors.back();
}

void set_monitor_key(MonitorConfig& m, const std::string& full_key,
                     const std::string& key, const std::string& value) {
    if (key == "method") {
        if (value == "SP") m.method = StopMethod::SP;
        else if (value == "DC") m.method = StopMethod::DC;
        else if (value == "NC") m.method = StopMethod::NC;
        else throw ConfigError("invalid method for '" + full_key + "': " + value);
    } else if (key == "stop_set") {
        if (value == "S") m.stop_set = StopSetKind::S;
        else if (value == "B") m.stop_set = StopSetKind::B;
        else if (value == "U") m.stop_set = StopSetKind::U;
        else throw ConfigError("invalid stop_set for '" + full_key + "': " + value);
    } else if (key == "k") {
        m.window = static_cast<int>(parse_long(full_key, value));
    } else if (key == "K") {
        m.threshold = parse_double(full_key, value);
    } else if (key == "epsilon") {
        m.patience = static_cast<int>(parse_long(full_key, value));
    } else {
        throw ConfigError("unknown key '" + full_key + "'");
    }
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    ExperimentConfig config;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key.rfind("monitor.", 0) == 0) {
            auto rest = key.substr(8);
            auto dot = rest.find('.');
            if (dot == std::string::npos)
                throw ConfigError("unknown key '" + key + "'");
            auto& m = monitor_by_name(config.monitors, rest.substr(0, dot));
            set_monitor_key(m, key, rest.substr(dot + 1), value);
        } else if (key == "dataset.path") {
            config.dataset_path = value;
        } else if (key == "dataset.format") {
            if (value == "jsonl") config.dataset_format = CorpusFormat::Jsonl;
            else if (value == "dirs") config.dataset_format = CorpusFormat::ClassDirectories;
            else throw ConfigError("invalid dataset.format: " + value);
        } else if (key == "dataset.name") {
            config.dataset_name = value;
        } else if (key == "stopwords") {
            config.stopword_path = value;
        } else if (key == "min_count") {
            config.min_count = parse_long(key, value);
        } else if (key == "split.scheme") {
            if (value == "kfold") config.split.kind = SplitScheme::Kind::KFold;
            else if (value == "fixed") config.split.kind = SplitScheme::Kind::Fixed;
            else throw ConfigError("invalid split.scheme: " + value);
        } else if (key == "split.folds") {
            config.split.folds = static_cast<int>(parse_long(key, value));
        } else if (key == "split.train_ids") {
            config.split.train_ids = parse_id_list(key, value);
        } else if (key == "split.test_ids") {
            config.split.test_ids = parse_id_list(key, value);
        } else if (key == "batch_fraction") {
            config.batch_fraction = parse_double(key, value);
        } else if (key == "stop_set_fraction") {
            config.stop_set_fraction = parse_double(key, value);
        } else if (key == "strategy") {
            if (value == "uncertainty") config.strategy = QueryStrategy::Uncertainty;
            else if (value == "random") config.strategy = QueryStrategy::Random;
            else throw ConfigError("invalid strategy: " + value);
        } else if (key == "svm.c") {
            config.svm.C = parse_double(key, value);
        } else if (key == "svm.tol") {
            config.svm.tol = parse_double(key, value);
        } else if (key == "svm.max_iter") {
            config.svm.max_iter = static_cast<int>(parse_long(key, value));
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(parse_long(key, value));
        } else if (key == "out") {
            config.out_dir = value;
        } else if (key == "workers") {
            config.workers = static_cast<int>(parse_long(key, value));
        } else if (key == "distance") {
            if (value == "geometric") config.geometric_distance = true;
            else if (value == "functional") config.geometric_distance = false;
            else throw ConfigError("invalid distance: " + value);
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    return config;
}

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& overrides) {
    if (overrides.seed) config.seed = *overrides.seed;
    if (overrides.workers) config.workers = *overrides.workers;
    if (overrides.out_dir) config.out_dir = *overrides.out_dir;
    if (overrides.strategy) config.strategy = *overrides.strategy;
    if (overrides.geometric_distance)
        config.geometric_distance = *overrides.geometric_distance;
    if (overrides.batch_fraction) config.batch_fraction = *overrides.batch_fraction;
}

void resolve_defaults(ExperimentConfig& config) {
    if (!config.monitors.empty()) return;
    // The full method x stop-set grid from which SP_B is excluded.
    auto add = [&](const char* name, StopMethod method, StopSetKind set) {
        MonitorConfig m;
        m.name = name;
        m.method = method;
        m.stop_set = set;
        config.monitors.push_back(m);
    };
    add("SP_S", StopMethod::SP, StopSetKind::S);
    add("SP_U", StopMethod::SP, StopSetKind::U);
    add("DC_S", StopMethod::DC, StopSetKind::S);
    add("DC_B", StopMethod::DC, StopSetKind::B);
    add("DC_U", StopMethod::DC, StopSetKind::U);
    add("NC_S", StopMethod::NC, StopSetKind::S);
    add("NC_B", StopMethod::NC, StopSetKind::B);
    add("NC_U", StopMethod::NC, StopSetKind::U);
}

void validate_config(const ExperimentConfig& config) {
    if (config.dataset_path.empty())
        throw ConfigError("missing required key 'dataset.path'");
    if (config.batch_fraction <= 0.0 || config.batch_fraction > 1.0)
        throw ConfigError("'batch_fraction' must be in (0, 1]");
    if (config.stop_set_fraction <= 0.0 || config.stop_set_fraction > 1.0)
        throw ConfigError("'stop_set_fraction' must be in (0, 1]");
    if (config.min_count < 0) throw ConfigError("'min_count' must be >= 0");
    if (config.svm.C <= 0.0) throw ConfigError("'svm.c' must be positive");
    if (config.svm.max_iter < 1) throw ConfigError("'svm.max_iter' must be >= 1");
    if (config.workers < 1) throw ConfigError("'workers' must be >= 1");
    if (config.split.kind == SplitScheme::Kind::KFold && config.split.folds < 2)
        throw ConfigError("'split.folds' must be >= 2");
    if (config.monitors.empty()) throw ConfigError("no monitors configured");
    std::vector<std::string> names;
    for (const auto& m : config.monitors) {
        try {
            validate_monitor(m);
        } catch (const StoppingError& e) {
            throw ConfigError(e.what());
        }
        if (std::find(names.begin(), names.end(), m.name) != names.end())
            throw ConfigError("duplicate monitor name '" + m.name + "'");
        names.push_back(m.name);
    }
}

std::string render_config(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "dataset.path = " << config.dataset_path << "\n";
    out << "dataset.format = "
        << (config.dataset_format == CorpusFormat::Jsonl ? "jsonl" : "dirs") << "\n";
    out << "dataset.name = " << config.dataset_name << "\n";
    if (!config.stopword_path.empty())
        out << "stopwords = " << config.stopword_path << "\n";
    out << "min_count = " << config.min_count << "\n";
    if (config.split.kind == SplitScheme::Kind::KFold) {
        out << "split.scheme = kfold\n";
        out << "split.folds = " << config.split.folds << "\n";
    } else {
        out << "split.scheme = fixed\n";
        auto join = [](const std::vector<int>& ids) {
            std::string s;
            for (std::size_t i = 0; i < ids.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(ids[i]);
            }
            return s;
        };
        out << "split.train_ids = " << join(config.split.train_ids) << "\n";
        out << "split.test_ids = " << join(config.split.test_ids) << "\n";
    }
    out << "batch_fraction = " << config.batch_fraction << "\n";
    out << "stop_set_fraction = " << config.stop_set_fraction << "\n";
    out << "strategy = "
        << (config.strategy == QueryStrategy::Uncertainty ? "uncertainty" : "random")
        << "\n";
    out << "svm.c = " << config.svm.C << "\n";
    out << "svm.tol = " << config.svm.tol << "\n";
    out << "svm.max_iter = " << config.svm.max_iter << "\n";
    out << "seed = " << config.seed << "\n";
    out << "out = " << config.out_dir << "\n";
    out << "workers = " << config.workers << "\n";
    out << "distance = " << (config.geometric_distance ? "geometric" : "functional")
        << "\n";
    for (const auto& m : config.monitors) {
        const std::string prefix = "monitor." + m.name + ".";
        out << prefix << "method = " << to_string(m.method) << "\n";
        out << prefix << "stop_set = " << to_string(m.stop_set) << "\n";
        if (m.method == StopMethod::SP) {
            out << prefix << "k = " << m.window << "\n";
            out << prefix << "K = " << m.threshold << "\n";
        } else {
            out << prefix << "epsilon = " << m.patience << "\n";
        }
    }
    return out.str();
}

}  // namespace alstop
