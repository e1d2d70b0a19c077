#include "alstop/svm.hpp"

#include <algorithm>
#include <cmath>

#include "alstop/rng.hpp"

namespace alstop {

SvmModel train_svm(std::span<const SparseVector> examples,
                   std::span<const std::int8_t> labels, const SvmParams& params) {
    if (examples.empty()) throw SvmError("cannot train on an empty example list");
    if (examples.size() != labels.size())
        throw SvmError("example/label count mismatch");
    if (params.C <= 0.0) throw SvmError("C must be positive");

    SvmModel model;
    model.C = params.C;

    bool has_pos = false, has_neg = false;
    for (auto y : labels) (y > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) {
        model.constant_fallback = has_pos ? 1 : -1;
        model.alphas.assign(examples.size(), 0.0);
        return model;
    }

    std::size_t dim = 0;
    for (const auto& x : examples)
        if (!x.entries.empty())
            dim = std::max(dim, static_cast<std::size_t>(x.entries.back().first) + 1);

    const std::size_t n = examples.size();
    const std::size_t bias_index = dim;
    std::vector<double> w(dim + 1, 0.0);  // last slot is the bias feature
    std::vector<double> alpha(n, 0.0);
    std::vector<double> q_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 1.0;  // bias feature
        for (const auto& [idx, v] : examples[i].entries) s += v * v;
        q_diag[i] = s;
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(params.seed);

    for (int epoch = 0; epoch < params.max_iter; ++epoch) {
        rng.shuffle(order);
        double max_violation = 0.0;
        for (std::size_t i : order) {
            const double y = labels[i];
            double f = w[bias_index];
            for (const auto& [idx, v] : examples[i].entries) f += w[idx] * v;
            const double g = y * f - 1.0;

            double pg = g;
            if (alpha[i] <= 0.0)
                pg = std::min(g, 0.0);
            else if (alpha[i] >= params.C)
                pg = std::max(g, 0.0);
            max_violation = std::max(max_violation, std::fabs(pg));
            if (pg == 0.0) continue;

            const double a_new =
                std::clamp(alpha[i] - g / q_diag[i], 0.0, params.C);
            const double delta = (a_new - alpha[i]) * y;
            if (delta == 0.0) continue;
            for (const auto& [idx, v] : examples[i].entries) w[idx] += delta * v;
            w[bias_index] += delta;
            alpha[i] = a_new;
        }
        if (max_violation < params.tol) break;
    }

    model.bias = w[bias_index];
    w.pop_back();
    model.weights = std::move(w);
    model.alphas = std::move(alpha);
    return model;
}

double decision_value(const SvmModel& model, const SparseVector& x) {
    if (model.constant_fallback) return 0.0;
    return x.dot(model.weights) + model.bias;
}

int predict(const SvmModel& model, const SparseVector& x) {
    if (model.constant_fallback) return *model.constant_fallback;
    return decision_value(model, x) < 0.0 ? -1 : 1;
}

double hyperplane_distance(const SvmModel& model, const SparseVector& x) {
    const double norm = model.weight_norm();
    if (norm == 0.0) return 0.0;
    return std::fabs(decision_value(model, x)) / norm;
}

double dual_objective(const SvmModel& model) {
    double sum_alpha = 0.0;
    for (double a : model.alphas) sum_alpha += a;
    double norm_sq = model.bias * model.bias;
    for (double w : model.weights) norm_sq += w * w;
    return sum_alpha - 0.5 * norm_sq;
}

}  // namespace alstop
