#include <doctest.h>

#include <cmath>

#include "alstop/rng.hpp"
#include "alstop/stopping.hpp"

using namespace alstop;

namespace {

// Independent 2x2 contingency-table kappa.
double kappa_table(const std::vector<std::int8_t>& a,
                   const std::vector<std::int8_t>& b) {
    double table[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < a.size(); ++i)
        table[a[i] > 0 ? 0 : 1][b[i] > 0 ? 0 : 1] += 1.0;
    const double n = static_cast<double>(a.size());
    const double ao = (table[0][0] + table[1][1]) / n;
    const double row0 = (table[0][0] + table[0][1]) / n;
    const double col0 = (table[0][0] + table[1][0]) / n;
    const double ae = row0 * col0 + (1 - row0) * (1 - col0);
    if (ae >= 1.0) return ao == 1.0 ? 1.0 : 0.0;
    return (ao - ae) / (1.0 - ae);
}

std::optional<int> run_conf_sequence(StopMethod mode, int patience,
                                     const std::vector<double>& values) {
    ConfState state;
    state.mode = mode;
    state.patience = patience;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const int iteration = static_cast<int>(i) + 1;
        if (mode == StopMethod::DC)
            dc_update(state, values[i], iteration);
        else
            nc_update(state, values[i], iteration);
    }
    return state.stopped_at;
}

}  // namespace

TEST_CASE("kappa hand cases") {
    std::vector<std::int8_t> a{1, 1, -1, -1}, b{1, -1, 1, -1};
    CHECK(kappa(a, b) == doctest::Approx(0.0).epsilon(1e-12));

    a = {1, 1, 1, -1};
    b = {1, 1, -1, -1};
    CHECK(kappa(a, b) == doctest::Approx(0.5).epsilon(1e-12));

    a = {1, -1, 1};
    CHECK(kappa(a, a) == 1.0);

    std::vector<std::int8_t> empty;
    CHECK_THROWS_AS(kappa(empty, empty), StoppingError);
    std::vector<std::int8_t> short_list{1};
    CHECK_THROWS_AS(kappa(a, short_list), StoppingError);
}

TEST_CASE("kappa degenerate chance agreement") {
    std::vector<std::int8_t> all_pos{1, 1, 1};
    CHECK(kappa(all_pos, all_pos) == 1.0);
    std::vector<std::int8_t> all_neg{-1, -1, -1};
    CHECK(kappa(all_pos, all_neg) == 0.0);
}

TEST_CASE("kappa matches the contingency-table oracle") {
    Rng rng(777);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(500);
        std::vector<std::int8_t> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.below(2) ? 1 : -1;
            b[i] = rng.below(4) ? a[i] : static_cast<std::int8_t>(-a[i]);
        }
        const double ours = kappa(a, b);
        CHECK(std::fabs(ours - kappa_table(a, b)) <= 1e-12);
        CHECK(std::fabs(ours - kappa(b, a)) <= 1e-15);  // symmetry
        CHECK(ours >= -1.0 - 1e-12);
        CHECK(ours <= 1.0 + 1e-12);
    }
}

TEST_CASE("monitor validation rejects SP with the batch set") {
    MonitorConfig cfg;
    cfg.method = StopMethod::SP;
    cfg.stop_set = StopSetKind::S;
    CHECK_NOTHROW(validate_monitor(cfg));
    cfg.stop_set = StopSetKind::B;
    CHECK_THROWS_AS(validate_monitor(cfg), StoppingError);
    cfg.method = StopMethod::NC;
    cfg.stop_set = StopSetKind::U;
    CHECK_NOTHROW(validate_monitor(cfg));
}

TEST_CASE("resolve_stop_set selects the right id lists") {
    PoolState pool;
    pool.unlabeled = {2, 4, 6};
    pool.batch = {1, 3};
    std::vector<int> fixed{0, 5, 7};
    CHECK(resolve_stop_set(StopSetKind::S, fixed, pool) == fixed);
    CHECK(resolve_stop_set(StopSetKind::B, fixed, pool) == pool.batch);
    CHECK(resolve_stop_set(StopSetKind::U, fixed, pool) == pool.unlabeled);
    pool.unlabeled.clear();
    CHECK(resolve_stop_set(StopSetKind::U, fixed, pool).empty());
}

TEST_CASE("sp window rule") {
    SPState state;
    state.window_size = 3;
    state.threshold = 0.99;
    state.window = {0.992, 0.990, 0.991};
    CHECK(*state.window_mean() == doctest::Approx(0.991));
    CHECK(*state.window_mean() >= state.threshold);

    // Two values only: continue regardless of mean.
    SPState partial;
    partial.window_size = 3;
    partial.threshold = 0.99;
    partial.window = {0.992, 0.990};
    CHECK(static_cast<int>(partial.window.size()) < partial.window_size);

    SPState below;
    below.window = {0.99, 0.99, 0.9899};
    CHECK(*below.window_mean() < 0.99);
}

TEST_CASE("sp_update drives the window from model predictions") {
    // Hand-built constant models over three one-feature points.
    std::vector<SparseVector> vectors(3);
    for (std::size_t i = 0; i < 3; ++i)
        vectors[i].entries = {{0, i == 0 ? -1.0 : 1.0}};
    SvmModel pos;
    pos.weights = {1.0};
    SvmModel neg;
    neg.weights = {-1.0};
    std::vector<int> ids{0, 1, 2};

    SPState state;
    state.window_size = 2;
    state.threshold = 0.99;
    // Identical models agree perfectly: kappa 1 each round, stop when full.
    CHECK_FALSE(sp_update(state, pos, pos, ids, vectors, 1));
    CHECK(sp_update(state, pos, pos, ids, vectors, 2));
    CHECK(state.stopped_at == 2);
    // Sticky even when later agreement would be poor.
    CHECK(sp_update(state, pos, neg, ids, vectors, 3));
    CHECK(state.stopped_at == 2);
}

TEST_CASE("dc strict decrease rule") {
    CHECK(run_conf_sequence(StopMethod::DC, 3, {0.5, 0.4, 0.3, 0.2}) == 4);
    CHECK_FALSE(run_conf_sequence(StopMethod::DC, 3, {0.5, 0.4, 0.4, 0.3}).has_value());
    CHECK_FALSE(run_conf_sequence(StopMethod::DC, 3, {0.5, 0.5, 0.5, 0.5, 0.5}).has_value());
}

TEST_CASE("nc non-increase rule") {
    CHECK(run_conf_sequence(StopMethod::NC, 3, {0.5, 0.5, 0.5, 0.5}) == 4);
    CHECK(run_conf_sequence(StopMethod::NC, 3, {0.5, 0.4, 0.3, 0.2}) == 4);
    CHECK_FALSE(run_conf_sequence(StopMethod::NC, 3, {0.5, 0.6, 0.5, 0.4}).has_value());
}

TEST_CASE("conf is the mean distance over the stop set") {
    SvmModel model;
    model.weights = {1.0};  // unit norm: distance == |x0|
    std::vector<SparseVector> vectors(3);
    vectors[0].entries = {{0, 1.0}};
    vectors[1].entries = {{0, -2.0}};
    vectors[2].entries = {{0, 3.0}};
    std::vector<int> ids{0, 1, 2};
    CHECK(conf(model, ids, vectors) == doctest::Approx(2.0));

    std::vector<int> one{2};
    CHECK(conf(model, one, vectors) == doctest::Approx(3.0));

    SvmModel fallback;
    fallback.constant_fallback = 1;
    CHECK(conf(fallback, ids, vectors) == 0.0);

    std::vector<int> none;
    CHECK_THROWS_AS(conf(model, none, vectors), StoppingError);

    // functional variant scales by the weight norm
    model.weights = {2.0};
    CHECK(conf(model, ids, vectors, /*geometric=*/false) == doctest::Approx(4.0));
    CHECK(conf(model, ids, vectors, /*geometric=*/true) == doctest::Approx(2.0));
}

TEST_CASE("nc never stops later than dc on the same sequence") {
    Rng rng(2024);
    for (int trial = 0; trial < 100000; ++trial) {
        const int len = 4 + static_cast<int>(rng.below(12));
        std::vector<double> values(len);
        for (auto& v : values)
            v = std::round(rng.uniform01() * 8.0) / 8.0;  // ties are common
        const int patience = 1 + static_cast<int>(rng.below(3));
        auto nc = run_conf_sequence(StopMethod::NC, patience, values);
        auto dc = run_conf_sequence(StopMethod::DC, patience, values);
        if (dc) {
            REQUIRE(nc.has_value());
            CHECK(*nc <= *dc);
        }
    }
}

TEST_CASE("raising K or k never makes SP stop earlier") {
    Rng rng(4141);
    auto stop_iteration = [](const std::vector<double>& agreements, int k, double K) {
        SPState state;
        state.window_size = k;
        state.threshold = K;
        for (std::size_t i = 0; i < agreements.size(); ++i) {
            if (state.stopped_at) break;
            state.window.push_back(agreements[i]);
            while (static_cast<int>(state.window.size()) > k) state.window.pop_front();
            if (static_cast<int>(state.window.size()) == k &&
                *state.window_mean() >= K)
                state.stopped_at = static_cast<int>(i) + 1;
        }
        return state.stopped_at;
    };
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> agreements(20);
        for (auto& a : agreements) a = rng.uniform01();
        const int k = 1 + static_cast<int>(rng.below(4));
        const double K = rng.uniform01();
        // Raising the threshold can only delay the stop.
        auto base = stop_iteration(agreements, k, K);
        auto higher_thresh = stop_iteration(agreements, k, std::min(1.0, K + 0.1));
        if (higher_thresh) {
            REQUIRE(base.has_value());
            CHECK(*base <= *higher_thresh);
        }
        // Raising the window size can only delay the stop when agreement is
        // non-decreasing (the widened window admits only smaller values).
        std::sort(agreements.begin(), agreements.end());
        auto sorted_base = stop_iteration(agreements, k, K);
        auto higher_k = stop_iteration(agreements, k + 1, K);
        if (higher_k) {
            REQUIRE(sorted_base.has_value());
            CHECK(*sorted_base <= *higher_k);
        }
    }
}

TEST_CASE("conf monitors are sticky") {
    ConfState state;
    state.mode = StopMethod::NC;
    state.patience = 2;
    nc_update(state, 0.5, 1);
    nc_update(state, 0.4, 2);
    nc_update(state, 0.3, 3);
    REQUIRE(state.stopped_at == 3);
    nc_update(state, 9.9, 4);  // rising again changes nothing
    CHECK(state.stopped_at == 3);
}

TEST_CASE("kappa bootstrap diagnostic is finite and small for high agreement") {
    Rng rng(5);
    std::vector<std::int8_t> a(400), b(400);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = rng.below(2) ? 1 : -1;
        b[i] = rng.below(20) ? a[i] : static_cast<std::int8_t>(-a[i]);
    }
    const double se = kappa_bootstrap_se(a, b, 200, 1);
    CHECK(se >= 0.0);
    CHECK(se < 0.2);
}
