#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "alstop/config.hpp"
#include "alstop/corpus.hpp"
#include "alstop/engine.hpp"
#include "alstop/harness.hpp"
#include "alstop/metrics.hpp"
#include "alstop/stopping.hpp"
#include "alstop/svm.hpp"

namespace py = pybind11;
using namespace alstop;

namespace {

std::vector<std::int8_t> to_labels(const std::vector<int>& labels) {
    std::vector<std::int8_t> out;
    out.reserve(labels.size());
    for (int y : labels) {
        if (y != 1 && y != -1)
            throw py::value_error("labels must be +1 or -1");
        out.push_back(static_cast<std::int8_t>(y));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Active learning stopping-criteria benchmark core";

    py::register_exception<CorpusError>(m, "CorpusError");
    py::register_exception<SvmError>(m, "SvmError");
    py::register_exception<StoppingError>(m, "StoppingError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<SparseVector>(m, "SparseVector")
        .def(py::init([](const std::vector<std::pair<std::uint32_t, double>>& entries) {
                 SparseVector v;
                 v.entries = entries;
                 for (std::size_t i = 1; i < v.entries.size(); ++i)
                     if (v.entries[i].first <= v.entries[i - 1].first)
                         throw py::value_error("indices must be strictly increasing");
                 return v;
             }),
             py::arg("entries") = std::vector<std::pair<std::uint32_t, double>>{})
        .def_readonly("entries", &SparseVector::entries)
        .def("norm", &SparseVector::norm)
        .def("__len__", [](const SparseVector& v) { return v.entries.size(); });

    py::class_<SvmModel>(m, "SvmModel")
        .def_readonly("weights", &SvmModel::weights)
        .def_readonly("bias", &SvmModel::bias)
        .def_readonly("alphas", &SvmModel::alphas)
        .def_readonly("C", &SvmModel::C)
        .def_readonly("constant_fallback", &SvmModel::constant_fallback)
        .def("weight_norm", &SvmModel::weight_norm);

    m.def(
        "train_svm",
        [](const std::vector<SparseVector>& examples, const std::vector<int>& labels,
           double C, double tol, int max_iter, std::uint64_t seed) {
            SvmParams params{C, tol, max_iter, seed};
            return train_svm(examples, to_labels(labels), params);
        },
        py::arg("examples"), py::arg("labels"), py::arg("C") = 1.0,
        py::arg("tol") = 1e-4, py::arg("max_iter") = 1000, py::arg("seed") = 0);
    m.def("decision_value", &decision_value, py::arg("model"), py::arg("x"));
    m.def("predict", &predict, py::arg("model"), py::arg("x"));
    m.def("hyperplane_distance", &hyperplane_distance, py::arg("model"), py::arg("x"));
    m.def("dual_objective", &dual_objective, py::arg("model"));

    m.def(
        "tokenize",
        [](const std::string& text, const std::vector<std::string>& stopwords) {
            return tokenize(text, {stopwords.begin(), stopwords.end()});
        },
        py::arg("text"), py::arg("stopwords") = std::vector<std::string>{});

    py::class_<Vocabulary>(m, "Vocabulary")
        .def_static("build", &Vocabulary::build, py::arg("token_lists"),
                    py::arg("min_count") = 3)
        .def("index_of", &Vocabulary::index_of, py::arg("term"))
        .def("__len__", &Vocabulary::size)
        .def("terms", [](const Vocabulary& v) { return v.terms(); });

    m.def("vectorize", &vectorize, py::arg("tokens"), py::arg("vocab"));

    m.def(
        "kappa",
        [](const std::vector<int>& a, const std::vector<int>& b) {
            return kappa(to_labels(a), to_labels(b));
        },
        py::arg("preds_a"), py::arg("preds_b"));

    m.def(
        "confusion",
        [](const std::vector<int>& preds, const std::vector<int>& gold) {
            auto c = confusion(to_labels(preds), to_labels(gold));
            return py::dict(py::arg("tp") = c.tp, py::arg("fp") = c.fp,
                            py::arg("tn") = c.tn, py::arg("fn") = c.fn);
        },
        py::arg("preds"), py::arg("gold"));
    m.def(
        "f_beta",
        [](long tp, long fp, long tn, long fn, double beta) {
            return f_beta(ConfusionCounts{tp, fp, tn, fn}, beta);
        },
        py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"), py::arg("beta"));
    m.def(
        "accuracy",
        [](long tp, long fp, long tn, long fn) {
            return accuracy(ConfusionCounts{tp, fp, tn, fn});
        },
        py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"));
    m.def(
        "balanced_accuracy",
        [](long tp, long fp, long tn, long fn) {
            return balanced_accuracy(ConfusionCounts{tp, fp, tn, fn});
        },
        py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"));

    m.def(
        "synth_corpus_jsonl",
        [](int n_docs, int n_terms, double sep, std::uint64_t seed) {
            auto corpus = synth_generate(n_docs, n_terms, sep, seed);
            std::vector<py::dict> docs;
            for (const auto& d : corpus.docs)
                docs.push_back(py::dict(py::arg("id") = d.id, py::arg("text") = d.text,
                                        py::arg("label") = d.label));
            return docs;
        },
        py::arg("n_docs"), py::arg("n_terms"), py::arg("class_separation"),
        py::arg("seed"));

    m.def(
        "run_experiment",
        [](const std::string& config_path) {
            auto config = parse_config_file(config_path);
            resolve_defaults(config);
            validate_config(config);
            run_experiment(config);
            return config.out_dir;
        },
        py::arg("config_path"),
        "Parse a harness config file, run the full grid and write the CSV "
        "outputs; returns the output directory.");
}
