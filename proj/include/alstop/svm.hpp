#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "alstop/sparse.hpp"

namespace alstop {

struct SvmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// L2-regularized L1-hinge linear SVM trained by dual coordinate descent.
// The bias is an appended constant feature of value 1 (regularized bias),
// kept separate from the feature weights after training so that geometric
// distances use the feature-space norm only.
struct SvmModel {
    std::vector<double> weights;          // per feature index
    double bias = 0.0;
    std::vector<double> alphas;           // per training example, in [0, C]
    double C = 1.0;
    std::optional<int> constant_fallback; // set when training data is single-class

    double weight_norm() const {
        double s = 0.0;
        for (double w : weights) s += w * w;
        return std::sqrt(s);
    }
};

struct SvmParams {
    double C = 1.0;
    double tol = 1e-4;
    int max_iter = 1000;  // epochs
    std::uint64_t seed = 0;
};

SvmModel train_svm(std::span<const SparseVector> examples,
                   std::span<const std::int8_t> labels, const SvmParams& params);

// w.x + b; 0 for a constant-fallback model.
double decision_value(const SvmModel& model, const SparseVector& x);

// sign of the decision value; exact zero maps to +1. A constant-fallback
// model returns its stored label.
int predict(const SvmModel& model, const SparseVector& x);

// |w.x + b| / ||w||; 0 when ||w|| = 0.
double hyperplane_distance(const SvmModel& model, const SparseVector& x);

// Dual objective sum(alpha) - 1/2 ||w_aug||^2 with the bias feature included;
// used by optimality checks.
double dual_objective(const SvmModel& model);

}  // namespace alstop
