#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace alstop {

struct MetricsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfusionCounts {
    long tp = 0, fp = 0, tn = 0, fn = 0;

    long total() const { return tp + fp + tn + fn; }
};

ConfusionCounts confusion(std::span<const std::int8_t> preds,
                          std::span<const std::int8_t> gold);

// (1+b^2) P R / (b^2 P + R); any zero-denominator component makes it 0.
double f_beta(const ConfusionCounts& c, double beta);

double accuracy(const ConfusionCounts& c);

// Mean of per-class recalls. If a class is absent from gold its recall term
// is 0 and *degenerate (when given) is set.
double balanced_accuracy(const ConfusionCounts& c, bool* degenerate = nullptr);

struct MetricsReport {
    double ann = 0.0;    // annotations acquired (real: macro averages fractional)
    double ann_p = 0.0;  // ann / |full dataset for the task|
    double f1 = 0.0;
    double f2 = 0.0;
    double acc = 0.0;
    double bac = 0.0;
    bool degenerate = false;  // some class was absent from gold
};

MetricsReport metrics_from_confusion(const ConfusionCounts& c, long annotations,
                                     long dataset_size);

// Unweighted arithmetic mean of every field.
MetricsReport aggregate_macro(std::span<const MetricsReport> reports);

}  // namespace alstop
