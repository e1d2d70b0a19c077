#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace alstop {

// Sorted sparse feature vector. Indices strictly increasing, no stored zeros.
struct SparseVector {
    std::vector<std::pair<std::uint32_t, double>> entries;

    bool empty() const { return entries.empty(); }

    double norm() const {
        double s = 0.0;
        for (const auto& [i, v] : entries) s += v * v;
        return std::sqrt(s);
    }

    // Dot product against a dense weight vector; indices past the dense
    // vector's length contribute zero.
    double dot(const std::vector<double>& w) const {
        double s = 0.0;
        for (const auto& [i, v] : entries)
            if (i < w.size()) s += w[i] * v;
        return s;
    }

    bool operator==(const SparseVector& other) const = default;
};

}  // namespace alstop
