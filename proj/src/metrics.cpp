#include "alstop/metrics.hpp"

namespace alstop {

ConfusionCounts confusion(std::span<const std::int8_t> preds,
                          std::span<const std::int8_t> gold) {
    if (preds.size() != gold.size())
        throw MetricsError("prediction/gold length mismatch");
    if (preds.empty()) throw MetricsError("empty prediction list");
    ConfusionCounts c;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (gold[i] > 0)
            (preds[i] > 0 ? c.tp : c.fn) += 1;
        else
            (preds[i] > 0 ? c.fp : c.tn) += 1;
    }
    return c;
}

double f_beta(const ConfusionCounts& c, double beta) {
    if (beta <= 0.0) throw MetricsError("beta must be positive");
    if (c.tp + c.fp == 0 || c.tp + c.fn == 0) return 0.0;
    const double p = static_cast<double>(c.tp) / (c.tp + c.fp);
    const double r = static_cast<double>(c.tp) / (c.tp + c.fn);
    const double b2 = beta * beta;
    const double denom = b2 * p + r;
    if (denom == 0.0) return 0.0;
    return (1.0 + b2) * p * r / denom;
}

double accuracy(const ConfusionCounts& c) {
    const long total = c.total();
    if (total == 0) throw MetricsError("empty confusion counts");
    return static_cast<double>(c.tp + c.tn) / total;
}

double balanced_accuracy(const ConfusionCounts& c, bool* degenerate) {
    if (c.total() == 0) throw MetricsError("empty confusion counts");
    bool flag = false;
    double pos_recall = 0.0, neg_recall = 0.0;
    if (c.tp + c.fn > 0)
        pos_recall = static_cast<double>(c.tp) / (c.tp + c.fn);
    else
        flag = true;
    if (c.tn + c.fp > 0)
        neg_recall = static_cast<double>(c.tn) / (c.tn + c.fp);
    else
        flag = true;
    if (degenerate) *degenerate = flag;
    return 0.5 * (pos_recall + neg_recall);
}

MetricsReport metrics_from_confusion(const ConfusionCounts& c, long annotations,
                                     long dataset_size) {
    MetricsReport r;
    r.ann = static_cast<double>(annotations);
    r.ann_p = dataset_size > 0 ? static_cast<double>(annotations) / dataset_size : 0.0;
    r.f1 = f_beta(c, 1.0);
    r.f2 = f_beta(c, 2.0);
    r.acc = accuracy(c);
    r.bac = balanced_accuracy(c, &r.degenerate);
    return r;
}

MetricsReport aggregate_macro(std::span<const MetricsReport> reports) {
    if (reports.empty()) throw MetricsError("nothing to aggregate");
    MetricsReport out;
    for (const auto& r : reports) {
        out.ann += r.ann;
        out.ann_p += r.ann_p;
        out.f1 += r.f1;
        out.f2 += r.f2;
        out.acc += r.acc;
        out.bac += r.bac;
        out.degenerate = out.degenerate || r.degenerate;
    }
    const double n = static_cast<double>(reports.size());
    out.ann /= n;
    out.ann_p /= n;
    out.f1 /= n;
    out.f2 /= n;
    out.acc /= n;
    out.bac /= n;
    return out;
}

}  // namespace alstop
