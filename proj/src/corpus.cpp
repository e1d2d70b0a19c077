#include "alstop/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "alstop/rng.hpp"

namespace fs = std::filesystem;

namespace alstop {

std::vector<std::string> Corpus::categories() const {
    std::set<std::string> cats;
    for (const auto& d : docs) cats.insert(d.label);
    return {cats.begin(), cats.end()};
}

namespace {

void finalize(Corpus& corpus) {
    std::sort(corpus.docs.begin(), corpus.docs.end(),
              [](const Document& a, const Document& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < corpus.docs.size(); ++i) {
        if (corpus.docs[i].id == corpus.docs[i - 1].id)
            throw CorpusError("duplicate id '" + corpus.docs[i].id + "'");
    }
}

Corpus load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open " + path);
    Corpus corpus;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw CorpusError(path + ":" + std::to_string(lineno) +
                              ": malformed record: " + e.what());
        }
        if (!rec.is_object() || !rec.contains("id") || !rec.contains("text") ||
            !rec.contains("label") || !rec["id"].is_string() ||
            !rec["text"].is_string() || !rec["label"].is_string())
            throw CorpusError(path + ":" + std::to_string(lineno) +
                              ": record must have string keys id/text/label");
        Document d{rec["id"].get<std::string>(), rec["text"].get<std::string>(),
                   rec["label"].get<std::string>()};
        if (d.label.empty())
            throw CorpusError(path + ":" + std::to_string(lineno) + ": empty label");
        corpus.docs.push_back(std::move(d));
    }
    finalize(corpus);
    return corpus;
}

Corpus load_class_dirs(const std::string& root) {
    if (!fs::is_directory(root)) throw CorpusError(root + " is not a directory");
    Corpus corpus;
    std::vector<fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) class_dirs.push_back(entry.path());
    std::sort(class_dirs.begin(), class_dirs.end());
    for (const auto& dir : class_dirs) {
        const std::string label = dir.filename().string();
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            std::ifstream in(entry.path(), std::ios::binary);
            if (!in) throw CorpusError("cannot open " + entry.path().string());
            std::ostringstream text;
            text << in.rdbuf();
            corpus.docs.push_back(
                {entry.path().filename().string(), text.str(), label});
        }
    }
    finalize(corpus);
    return corpus;
}

}  // namespace

Corpus load_corpus(const std::string& path, CorpusFormat format) {
    switch (format) {
        case CorpusFormat::Jsonl: return load_jsonl(path);
        case CorpusFormat::ClassDirectories: return load_class_dirs(path);
    }
    throw CorpusError("unknown corpus format");
}

std::set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open stopword list " + path);
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n' ||
                                 line.back() == ' '))
            line.pop_back();
        if (!line.empty()) words.insert(line);
    }
    return words;
}

std::vector<std::string> tokenize(const std::string& text,
                                  const std::set<std::string>& stopwords) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            if (!stopwords.count(current)) tokens.push_back(current);
            current.clear();
        }
    };
    for (unsigned char c : text) {
        if (std::isalnum(c))
            current.push_back(static_cast<char>(std::tolower(c)));
        else
            flush();
    }
    flush();
    return tokens;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& token_lists,
                             long min_count) {
    std::map<std::string, long> counts;
    for (const auto& tokens : token_lists)
        for (const auto& t : tokens) ++counts[t];
    Vocabulary vocab;
    std::uint32_t next = 0;
    for (const auto& [term, count] : counts)
        if (count > min_count) vocab.term_to_index_.emplace(term, next++);
    if (vocab.term_to_index_.empty())
        throw CorpusError("no terms survive min_count=" + std::to_string(min_count));
    return vocab;
}

std::optional<std::uint32_t> Vocabulary::index_of(const std::string& term) const {
    auto it = term_to_index_.find(term);
    if (it == term_to_index_.end()) return std::nullopt;
    return it->second;
}

SparseVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
    std::map<std::uint32_t, double> counts;
    for (const auto& t : tokens)
        if (auto idx = vocab.index_of(t)) ++counts[*idx];
    SparseVector v;
    v.entries.assign(counts.begin(), counts.end());
    double norm = v.norm();
    if (norm > 0.0)
        for (auto& [i, value] : v.entries) value /= norm;
    return v;
}

std::vector<BinaryTask> make_tasks(const Corpus& corpus,
                                   const std::vector<std::vector<std::string>>& token_lists,
                                   const Vocabulary& vocab,
                                   std::vector<std::string>* warnings) {
    if (token_lists.size() != corpus.docs.size())
        throw CorpusError("token list count does not match corpus size");
    auto vectors = std::make_shared<std::vector<SparseVector>>();
    auto ids = std::make_shared<std::vector<std::string>>();
    vectors->reserve(corpus.docs.size());
    for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
        vectors->push_back(vectorize(token_lists[i], vocab));
        ids->push_back(corpus.docs[i].id);
    }
    std::vector<BinaryTask> tasks;
    for (const auto& category : corpus.categories()) {
        BinaryTask task;
        task.positive_category = category;
        task.vectors = vectors;
        task.doc_ids = ids;
        task.labels.reserve(corpus.docs.size());
        int positives = 0;
        for (const auto& d : corpus.docs) {
            bool pos = d.label == category;
            positives += pos;
            task.labels.push_back(pos ? 1 : -1);
        }
        if (positives == 0) {
            if (warnings)
                warnings->push_back("category '" + category +
                                    "' has no positive examples; skipped");
            continue;
        }
        tasks.push_back(std::move(task));
    }
    return tasks;
}

std::vector<TaskSplit> split(const BinaryTask& task, const SplitScheme& scheme,
                             std::uint64_t seed) {
    const int n = static_cast<int>(task.size());
    std::vector<TaskSplit> splits;
    if (scheme.kind == SplitScheme::Kind::Fixed) {
        std::unordered_set<int> train(scheme.train_ids.begin(), scheme.train_ids.end());
        for (int id : scheme.test_ids)
            if (train.count(id))
                throw CorpusError("fixed split: id " + std::to_string(id) +
                                  " appears in both train and test");
        TaskSplit s;
        s.train = scheme.train_ids;
        s.test = scheme.test_ids;
        s.fold = 0;
        splits.push_back(std::move(s));
        return splits;
    }
    const int k = scheme.folds;
    if (k < 2 || k > n)
        throw CorpusError("kfold requires 2 <= k <= n (k=" + std::to_string(k) +
                          ", n=" + std::to_string(n) + ")");
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    // Near-equal contiguous folds; the first n % k folds get one extra.
    const int base = n / k, extra = n % k;
    int pos = 0;
    std::vector<std::vector<int>> folds(k);
    for (int f = 0; f < k; ++f) {
        int len = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + pos, order.begin() + pos + len);
        pos += len;
    }
    for (int f = 0; f < k; ++f) {
        TaskSplit s;
        s.fold = f;
        s.test = folds[f];
        for (int g = 0; g < k; ++g)
            if (g != f) s.train.insert(s.train.end(), folds[g].begin(), folds[g].end());
        std::sort(s.train.begin(), s.train.end());
        std::sort(s.test.begin(), s.test.end());
        splits.push_back(std::move(s));
    }
    return splits;
}

Corpus synth_generate(int n_docs, int n_terms, double class_separation,
                      std::uint64_t seed) {
    if (n_docs < 2 || n_terms < 2)
        throw CorpusError("synth_generate requires n_docs >= 2 and n_terms >= 2");
    if (class_separation < 0.0 || class_separation > 1.0)
        throw CorpusError("class_separation must be in [0, 1]");
    Rng rng(seed);
    const int half = n_terms / 2;
    // Category c prefers its own half of the term range; weight of the other
    // half shrinks linearly to zero as separation goes to one.
    auto term_weights = [&](int category) {
        std::vector<double> w(n_terms);
        for (int t = 0; t < n_terms; ++t) {
            bool own = (t < half) == (category == 0);
            w[t] = own ? 1.0 : 1.0 - class_separation;
        }
        return w;
    };
    std::vector<std::vector<double>> cdf(2);
    for (int c = 0; c < 2; ++c) {
        auto w = term_weights(c);
        cdf[c].resize(n_terms);
        double acc = 0.0;
        for (int t = 0; t < n_terms; ++t) {
            acc += w[t];
            cdf[c][t] = acc;
        }
    }
    int width = 1;
    for (int v = n_docs - 1; v >= 10; v /= 10) ++width;
    int term_width = 1;
    for (int v = n_terms - 1; v >= 10; v /= 10) ++term_width;
    Corpus corpus;
    for (int i = 0; i < n_docs; ++i) {
        const int category = i % 2;
        const int length = 20 + static_cast<int>(rng.below(31));
        std::string text;
        for (int j = 0; j < length; ++j) {
            double u = rng.uniform01() * cdf[category].back();
            int t = static_cast<int>(
                std::lower_bound(cdf[category].begin(), cdf[category].end(), u) -
                cdf[category].begin());
            if (t >= n_terms) t = n_terms - 1;
            std::string term = std::to_string(t);
            term.insert(0, term_width - term.size(), '0');
            if (!text.empty()) text.push_back(' ');
            text += "t" + term;
        }
        std::string num = std::to_string(i);
        num.insert(0, width - num.size(), '0');
        corpus.docs.push_back({"d" + num, std::move(text),
                               category == 0 ? "alpha" : "beta"});
    }
    finalize(corpus);
    return corpus;
}

}  // namespace alstop
