#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace alstop {

// Deterministic RNG helpers. std::shuffle and the distribution classes are
// implementation-defined, so sampling is done with explicit algorithms to
// keep output files reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Sample k distinct elements from v, order randomized.
    template <typename T>
    std::vector<T> sample_without_replacement(std::vector<T> v, std::size_t k) {
        if (k > v.size()) k = v.size();
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(below(v.size() - i));
            std::swap(v[i], v[j]);
        }
        v.resize(k);
        return v;
    }

private:
    std::mt19937_64 gen_;
};

// FNV-1a over the textual key; used to derive per-run seeds so that
// reordering the experiment grid cannot change any individual run.
inline std::uint64_t hash_seed(std::uint64_t master, std::string_view dataset,
                               std::string_view task, int fold) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= '|';
        h *= 0x100000001b3ULL;
    };
    mix(std::to_string(master));
    mix(dataset);
    mix(task);
    mix(std::to_string(fold));
    return h;
}

inline long round_half_up(double x) {
    return static_cast<long>(std::floor(x + 0.5));
}

}  // namespace alstop
