#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "alstop/sparse.hpp"

namespace alstop {

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Document {
    std::string id;
    std::string text;
    std::string label;
};

struct Corpus {
    std::vector<Document> docs;  // sorted by id

    std::vector<std::string> categories() const;  // sorted unique labels
};

enum class CorpusFormat { Jsonl, ClassDirectories };

// Loads a corpus from disk. Documents come back sorted by id; duplicate ids
// and malformed records are errors that name the offending file/line.
Corpus load_corpus(const std::string& path, CorpusFormat format);

std::set<std::string> load_stopwords(const std::string& path);

// Lowercased alphanumeric tokens, split on any non-alphanumeric byte,
// stopwords removed, original order preserved.
std::vector<std::string> tokenize(const std::string& text,
                                  const std::set<std::string>& stopwords);

class Vocabulary {
public:
    // Term included iff its total count across the given token lists is
    // strictly greater than min_count. Indices follow lexicographic term
    // order starting at 0. Throws if nothing survives.
    static Vocabulary build(const std::vector<std::vector<std::string>>& token_lists,
                            long min_count = 3);

    std::optional<std::uint32_t> index_of(const std::string& term) const;
    std::size_t size() const { return term_to_index_.size(); }
    const std::map<std::string, std::uint32_t>& terms() const { return term_to_index_; }

private:
    std::map<std::string, std::uint32_t> term_to_index_;
};

// Raw in-vocabulary term counts, L2-normalized. All-OOV input yields an
// empty vector (the unit-norm invariant is waived for it).
SparseVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab);

// One-vs-rest reduction of a multi-category corpus. Feature vectors are
// shared across tasks; only the labelings differ.
struct BinaryTask {
    std::string positive_category;
    std::shared_ptr<const std::vector<SparseVector>> vectors;
    std::shared_ptr<const std::vector<std::string>> doc_ids;
    std::vector<std::int8_t> labels;  // +1 / -1, aligned with vectors

    std::size_t size() const { return labels.size(); }
};

// One task per category present in the corpus, ordered by category name.
// Categories with no positive example are skipped (warning to the sink, if
// provided).
std::vector<BinaryTask> make_tasks(const Corpus& corpus,
                                   const std::vector<std::vector<std::string>>& token_lists,
                                   const Vocabulary& vocab,
                                   std::vector<std::string>* warnings = nullptr);

struct TaskSplit {
    std::vector<int> train;
    std::vector<int> test;
    int fold = 0;
};

struct SplitScheme {
    enum class Kind { Fixed, KFold } kind = Kind::KFold;
    int folds = 10;                // kfold
    std::vector<int> train_ids;    // fixed
    std::vector<int> test_ids;     // fixed
};

std::vector<TaskSplit> split(const BinaryTask& task, const SplitScheme& scheme,
                             std::uint64_t seed);

// Two-category synthetic corpus: each category draws tokens from its own
// term distribution; class_separation=1 makes the supports disjoint,
// class_separation=0 makes the distributions identical. Deterministic per
// seed.
Corpus synth_generate(int n_docs, int n_terms, double class_separation,
                      std::uint64_t seed);

}  // namespace alstop
