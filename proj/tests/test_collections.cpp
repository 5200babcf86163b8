#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "maxiset/collections.hpp"
#include "maxiset/errors.hpp"
#include "maxiset/gwn.hpp"
#include "maxiset/rng.hpp"

using maxiset::collection_spec;
using maxiset::errc;
using maxiset::error;
using maxiset::index_set;
using maxiset::model_spec;
using maxiset::observation;
using maxiset::penalty_rule;
using maxiset::wavelet_coeffs;

namespace {

errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    return errc::ok;
}

observation random_obs(int depth, std::int64_t n, std::uint64_t draw, double scale) {
    observation obs;
    obs.n = n;
    obs.coeffs = wavelet_coeffs::zeros(depth);
    maxiset::counter_rng g(91);
    obs.coeffs.alpha00 = scale * g.normal(draw, 0, 0);
    for (int j = 0; j < depth; ++j)
        for (int k = 0; k < (1 << j); ++k)
            obs.coeffs.at(j, k) =
                scale * g.normal(draw, static_cast<std::uint32_t>(j + 1), static_cast<std::uint32_t>(k));
    return obs;
}

bool same_model(const model_spec& a, const model_spec& b) {
    return a.kind == b.kind && a.level == b.level && a.dim == b.dim && a.indices == b.indices;
}

} // namespace

TEST_CASE("lambda_n evaluates the penalty scale") {
    CHECK(maxiset::lambda_n(penalty_rule::constant(2.0), 5) == 2.0);
    CHECK(maxiset::lambda_n(penalty_rule::constant(2.0), 1000000) == 2.0);
    CHECK(maxiset::lambda_n(penalty_rule::log_n(2.0), 8) == doctest::Approx(2.0 * std::log(8.0)).epsilon(1e-15));
    CHECK(code_of([] { maxiset::lambda_n(penalty_rule::log_n(4.0), 1); }) == errc::degenerate_penalty);
    CHECK(code_of([] { maxiset::lambda_n(penalty_rule::constant(0.0), 10); }) == errc::degenerate_penalty);
    CHECK(code_of([] { maxiset::lambda_n(penalty_rule::constant(-1.0), 10); }) == errc::degenerate_penalty);
    CHECK(code_of([] { maxiset::lambda_n(penalty_rule::constant(1.0), 0); }) == errc::invalid_argument);
}

TEST_CASE("j0_of brackets n/lambda_n between consecutive powers of two") {
    CHECK(maxiset::j0_of(1024, penalty_rule::constant(2.0)) == 9);  // ratio exactly 512
    CHECK(maxiset::j0_of(100, penalty_rule::constant(3.0)) == 5);   // ratio 33.3
    CHECK(maxiset::j0_of(8, penalty_rule::constant(1.0)) == 3);     // ratio exactly 8
    CHECK(maxiset::j0_of(7, penalty_rule::constant(1.0)) == 2);
    CHECK(maxiset::j0_of(1, penalty_rule::constant(1.0)) == 0);
    CHECK(maxiset::j0_of(1024, penalty_rule::log_n(1.0)) == 7);     // ratio 147.7
    CHECK(code_of([] { maxiset::j0_of(4, penalty_rule::constant(8.0)); }) == errc::noise_too_large);
    // Defining property over a sweep: 2^j0 <= n/lambda < 2^{j0+1}.
    for (std::int64_t n : {3, 17, 100, 4095, 4096, 4097, 1000000}) {
        for (auto pen : {penalty_rule::constant(1.5), penalty_rule::log_n(2.0)}) {
            int j0 = maxiset::j0_of(n, pen);
            double ratio = static_cast<double>(n) / maxiset::lambda_n(pen, n);
            CHECK(std::exp2(j0) <= ratio);
            CHECK(ratio < std::exp2(j0 + 1));
        }
    }
}

TEST_CASE("collection validation and level extent") {
    CHECK_NOTHROW(maxiset::validate(collection_spec::sieve(0)));
    CHECK_NOTHROW(maxiset::validate(collection_spec::hybrid(2.0001, 4)));
    CHECK_NOTHROW(maxiset::validate(collection_spec::hybrid_trunc(3.0, 4, 4)));
    CHECK(code_of([] { maxiset::validate(collection_spec::sieve(-1)); }) == errc::invalid_argument);
    CHECK(code_of([] { maxiset::validate(collection_spec::hybrid(2.0, 4)); }) == errc::invalid_argument);
    CHECK(code_of([] { maxiset::validate(collection_spec::hybrid_trunc(3.0, 5, 4)); }) == errc::invalid_argument);

    CHECK(maxiset::level_extent(collection_spec::sieve(3)) == 3);
    CHECK(maxiset::level_extent(collection_spec::full(5)) == 5);
    CHECK(maxiset::level_extent(collection_spec::hybrid(3.0, 7)) == 7);
    CHECK(maxiset::level_extent(collection_spec::hybrid_trunc(3.0, 2, 7)) == 7);
}

TEST_CASE("hybrid_budget: hand values, exactness and the width cap") {
    CHECK(maxiset::hybrid_budget(0, 0, 3.0) == 1);
    CHECK(maxiset::hybrid_budget(2, 2, 3.0) == 4);
    CHECK(maxiset::hybrid_budget(2, 3, 3.0) == 0);      // floor(4/8)
    CHECK(maxiset::hybrid_budget(4, 5, 2.5) == 2);      // floor(16 * 2^-2.5) = floor(2.83)
    CHECK(maxiset::hybrid_budget(10, 13, 2.5) == 32);   // 1024 * 4^-2.5 = 32 exactly
    CHECK(maxiset::hybrid_budget(20, 21, 3.0) == 131072); // 2^20 / 8, integer path
    CHECK(maxiset::hybrid_budget(3, 3, 4.0) == 8);      // equals the level width
    CHECK(maxiset::hybrid_budget(6, 6, 2.1) == 64);
    CHECK(code_of([] { maxiset::hybrid_budget(5, 3, 3.0); }) == errc::invalid_argument);
    // The cap never produces more indices than the level holds.
    for (int J = 0; J <= 12; ++J)
        for (int j = J; j <= 14; ++j)
            for (double theta : {2.5, 3.0, 4.0})
                CHECK(maxiset::hybrid_budget(J, j, theta) <= (std::int64_t{1} << j));
}

TEST_CASE("dim_DJ: hand values and the truncated/untruncated relation") {
    CHECK(maxiset::dim_DJ(0, 3.0, 0) == 1);
    CHECK(maxiset::dim_DJ(0, 3.0, 1) == 2);
    CHECK(maxiset::dim_DJ(2, 3.0, 6) == 8);
    CHECK(maxiset::dim_DJ(4, 2.5, 8) == 35); // 16 + 16 + 2 + 1 + 0
    CHECK(maxiset::dim_DJ_untruncated(0, 3.0) == 2);
    CHECK(maxiset::dim_DJ_untruncated(2, 3.0) == 8);
    CHECK(maxiset::dim_DJ_untruncated(4, 2.5) == 35);
    for (int J = 0; J <= 12; ++J)
        for (double theta : {2.5, 3.0, 4.0}) {
            std::int64_t full = maxiset::dim_DJ_untruncated(J, theta);
            // Truncation can only shrink, and grows monotonically to the limit.
            std::int64_t prev = 0;
            for (int jt = J; jt <= J + 40; ++jt) {
                std::int64_t d = maxiset::dim_DJ(J, theta, jt);
                CHECK(d >= prev);
                CHECK(d <= full);
                prev = d;
            }
            CHECK(prev == full); // budgets are exhausted well before J + 40
        }
}

TEST_CASE("dim_DJ_untruncated stays within the geometric band") {
    // 2^J <= D_J <= 2^J * (1 + sum_{d>=1} d^-theta).  The partial zeta sum is
    // a lower bound for the series, so using it makes the upper check stricter.
    for (double theta : {2.5, 3.0, 4.0}) {
        double zeta_partial = 0.0;
        for (int d = 1; d <= 100000; ++d) zeta_partial += std::pow(d, -theta);
        for (int J = 0; J <= 16; ++J) {
            double dim = static_cast<double>(maxiset::dim_DJ_untruncated(J, theta));
            CHECK(dim >= std::exp2(J));
            CHECK(dim <= std::exp2(J) * (1.0 + zeta_partial));
        }
    }
}

TEST_CASE("slow-decay budgets reach levels past the 62-bit width range safely") {
    // theta = 2.5, J = 15 keeps budgets positive up to level 78: the level
    // width 2^j is unrepresentable there, but it also cannot bind (budgets
    // never exceed 2^J), so the tail must run out to zero without wrapping.
    CHECK(maxiset::hybrid_budget(15, 78, 2.5) == 1); // 2^15 * 64^-2.5 = 2^0
    CHECK(maxiset::hybrid_budget(15, 79, 2.5) == 0); // exponent turns negative
    CHECK(maxiset::hybrid_budget(15, 100, 2.5) == 0);
    // The accumulated dimensions stay in the geometric band well past the
    // depths any witness stores.
    double zeta_partial = 0.0;
    for (int d = 1; d <= 100000; ++d) zeta_partial += std::pow(d, -2.5);
    for (int J : {15, 16, 20, 40}) {
        double dim = static_cast<double>(maxiset::dim_DJ_untruncated(J, 2.5));
        CHECK(dim >= std::exp2(J));
        CHECK(dim <= std::exp2(J) * (1.0 + zeta_partial));
    }
    // The level range itself is a domain bound.
    CHECK(code_of([] { maxiset::hybrid_budget(63, 70, 2.5); }) == errc::invalid_argument);
    CHECK(code_of([] { maxiset::dim_DJ_untruncated(63, 2.5); }) == errc::invalid_argument);
    CHECK(code_of([] { maxiset::dim_DJ(63, 2.5, 70); }) == errc::invalid_argument);
}

TEST_CASE("model_spec factories and membership") {
    auto s = model_spec::sieve(2);
    CHECK(s.dim == 4); // phi00 + 1 + 2
    CHECK(s.contains(0, 0));
    CHECK(s.contains(1, 1));
    CHECK_FALSE(s.contains(2, 0));

    auto m = model_spec::subset(index_set{{1, 0}, {3, 5}});
    CHECK(m.dim == 3);
    CHECK(m.contains(1, 0));
    CHECK(m.contains(3, 5));
    CHECK_FALSE(m.contains(1, 1));
    CHECK_FALSE(m.contains(0, 0));
}

TEST_CASE("sieve selection minimizes the penalized contrast by hand") {
    observation obs;
    obs.n = 4;
    obs.coeffs = wavelet_coeffs::zeros(2);
    obs.coeffs.alpha00 = 1.0;
    obs.coeffs.at(0, 0) = 0.9;
    obs.coeffs.at(1, 0) = 0.1;
    obs.coeffs.at(1, 1) = 0.1;
    auto pen = penalty_rule::constant(1.0);
    auto coll = collection_spec::sieve(2);
    // criteria: N=0: -1 + 1/4;  N=1: -1.81 + 2/4;  N=2: -1.83 + 4/4.
    auto m = maxiset::select_model(obs, coll, pen);
    CHECK(m.kind == maxiset::model_kind::sieve);
    CHECK(m.level == 1);
    CHECK(m.dim == 2);
    CHECK(maxiset::model_criterion(obs, m, coll, pen) == doctest::Approx(-1.31).epsilon(1e-15));
}

TEST_CASE("exact criterion ties break toward the smaller dimension") {
    observation obs;
    obs.n = 1;
    obs.coeffs = wavelet_coeffs::zeros(1);
    obs.coeffs.alpha00 = 0.7;
    obs.coeffs.at(0, 0) = 1.0; // crit(N=0) = -0.49+1 equals crit(N=1) = -1.49+2
    auto m = maxiset::select_model(obs, collection_spec::sieve(1), penalty_rule::constant(1.0));
    CHECK(m.level == 0);
    CHECK(m.dim == 1);
    CHECK(m.indices.empty());
}

TEST_CASE("full-collection selection keeps exactly the strict threshold exceedances") {
    observation obs;
    obs.n = 4;
    obs.coeffs = wavelet_coeffs::zeros(2);
    obs.coeffs.alpha00 = 5.0;
    obs.coeffs.at(0, 0) = 1.0;  // |.| == sqrt(lambda/n) = 1: excluded (strict)
    obs.coeffs.at(1, 0) = 1.25; // included
    obs.coeffs.at(1, 1) = -1.0; // excluded
    auto m = maxiset::select_model(obs, collection_spec::full(2), penalty_rule::constant(4.0));
    CHECK(m.kind == maxiset::model_kind::subset);
    CHECK(m.indices == index_set{{1, 0}});
    CHECK(m.dim == 2);
}

TEST_CASE("enumerate_models counts the small collections by hand") {
    CHECK(maxiset::enumerate_models(collection_spec::sieve(3), 1000).size() == 4);   // N = 0..3
    CHECK(maxiset::enumerate_models(collection_spec::full(3), 1000).size() == 128);  // 2^7 subsets
    CHECK(maxiset::enumerate_models(collection_spec::hybrid_trunc(3.0, 3, 5), 1000).size() == 19);
    CHECK(maxiset::enumerate_models(collection_spec::hybrid(3.0, 4), 1000).size() == 5);
    CHECK(maxiset::enumerate_models(collection_spec::hybrid(3.0, 5), 1000).size() == 21);
    // Guards: too many subsets, or more detail indices than the bitmask holds.
    CHECK(code_of([] { maxiset::enumerate_models(collection_spec::full(5), 1000000); }) ==
          errc::collection_too_large);
    CHECK(code_of([] { maxiset::enumerate_models(collection_spec::full(7), 1000000); }) ==
          errc::collection_too_large);
}

TEST_CASE("every enumerated budgeted model has the common dimension of its J") {
    auto coll = collection_spec::hybrid_trunc(3.0, 3, 5);
    for (const auto& m : maxiset::enumerate_models(coll, 1000)) {
        REQUIRE(m.kind == maxiset::model_kind::hybrid);
        CHECK(m.dim == maxiset::dim_DJ(m.level, 3.0, 5));
    }
}

TEST_CASE("fast selection agrees with brute-force enumeration") {
    struct scenario {
        collection_spec coll;
        int depth;
        penalty_rule pen;
    };
    std::vector<scenario> scenarios = {
        {collection_spec::full(3), 3, penalty_rule::constant(2.0)},
        {collection_spec::sieve(4), 4, penalty_rule::constant(2.0)},
        {collection_spec::sieve(4), 4, penalty_rule::log_n(1.0)},
        {collection_spec::hybrid_trunc(3.0, 3, 5), 5, penalty_rule::constant(2.0)},
        {collection_spec::hybrid(3.0, 5), 5, penalty_rule::constant(2.0)},
        {collection_spec::hybrid(3.0, 4), 4, penalty_rule::constant(2.0, true)},
        {collection_spec::hybrid_trunc(3.0, 3, 5), 5, penalty_rule::constant(2.0, true)},
    };
    int scen_idx = 0;
    for (const auto& sc : scenarios) {
        CAPTURE(scen_idx);
        for (std::uint64_t draw = 0; draw < 50; ++draw) {
            auto obs = random_obs(sc.depth, 16, draw + 1000 * static_cast<std::uint64_t>(scen_idx), 0.5);
            auto fast = maxiset::select_model(obs, sc.coll, sc.pen);
            auto brute = maxiset::brute_force_select(obs, sc.coll, sc.pen);
            CAPTURE(draw);
            CHECK(same_model(fast, brute));
            CHECK(maxiset::model_criterion(obs, fast, sc.coll, sc.pen) ==
                  maxiset::model_criterion(obs, brute, sc.coll, sc.pen));
        }
        ++scen_idx;
    }
}

TEST_CASE("penalized_dim charges the untruncated dimension only when asked") {
    auto coll = collection_spec::hybrid(3.0, 4);
    auto plain = penalty_rule::constant(2.0);
    auto over = penalty_rule::constant(2.0, true);
    auto models = maxiset::enumerate_models(coll, 1000);
    for (const auto& m : models) {
        CHECK(maxiset::penalized_dim(m, coll, plain) == m.dim);
        CHECK(maxiset::penalized_dim(m, coll, over) == maxiset::dim_DJ_untruncated(m.level, 3.0));
    }
    // J = 3 truncated at 4 levels: 8 + 8 = 16 kept, but 8 + 8 + 1 = 17 charged.
    bool saw_gap = false;
    for (const auto& m : models)
        if (m.level == 3) {
            CHECK(m.dim == 16);
            CHECK(maxiset::penalized_dim(m, coll, over) == 17);
            saw_gap = true;
        }
    CHECK(saw_gap);
    // Non-budgeted models are never over-charged.
    auto s = model_spec::sieve(2);
    CHECK(maxiset::penalized_dim(s, collection_spec::sieve(4), over) == s.dim);
}

TEST_CASE("model_criterion evaluates one model directly") {
    observation obs;
    obs.n = 10;
    obs.coeffs = wavelet_coeffs::zeros(2);
    obs.coeffs.alpha00 = 2.0;
    obs.coeffs.at(1, 0) = 3.0;
    obs.coeffs.at(0, 0) = 1.0;
    auto m = model_spec::subset(index_set{{1, 0}});
    auto crit = maxiset::model_criterion(obs, m, collection_spec::full(2), penalty_rule::constant(5.0));
    CHECK(crit == doctest::Approx(-(4.0 + 9.0) + 5.0 * 2.0 / 10.0).epsilon(1e-15));
}

TEST_CASE("project zeroes everything outside the model") {
    auto c = wavelet_coeffs::zeros(3);
    c.alpha00 = 1.5;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < (1 << j); ++k) c.at(j, k) = 10.0 * j + k + 1;

    auto m = model_spec::subset(index_set{{0, 0}, {2, 3}});
    auto p = maxiset::project(c, m);
    CHECK(p.alpha00 == 1.5);
    CHECK(p.at(0, 0) == c.at(0, 0));
    CHECK(p.at(2, 3) == c.at(2, 3));
    CHECK(p.at(1, 0) == 0.0);
    CHECK(p.at(1, 1) == 0.0);
    CHECK(p.at(2, 0) == 0.0);

    auto again = maxiset::project(p, m);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < (1 << j); ++k) CHECK(again.at(j, k) == p.at(j, k));

    auto sieve = maxiset::project(c, model_spec::sieve(2));
    CHECK(sieve.at(0, 0) == c.at(0, 0));
    CHECK(sieve.at(1, 1) == c.at(1, 1));
    CHECK(sieve.at(2, 2) == 0.0);

    CHECK(code_of([&] { maxiset::project(c, model_spec::subset(index_set{{5, 0}})); }) ==
          errc::shape_mismatch);
}

TEST_CASE("risk_decomposition matches a direct excluded-energy sum") {
    maxiset::counter_rng g(4242);
    for (std::uint64_t draw = 0; draw < 20; ++draw) {
        auto c = wavelet_coeffs::zeros(4);
        c.alpha00 = g.normal(draw, 0, 0);
        index_set idx;
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < (1 << j); ++k) {
                c.at(j, k) = g.normal(draw, static_cast<std::uint32_t>(j + 1), static_cast<std::uint32_t>(k));
                if (g.normal(draw, 20, static_cast<std::uint32_t>(16 * j + k)) > 0.0) idx.insert({j, k});
            }
        auto m = model_spec::subset(idx);
        auto rd = maxiset::risk_decomposition(c, m);
        double excluded = 0.0;
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < (1 << j); ++k)
                if (!m.contains(j, k)) excluded += c.at(j, k) * c.at(j, k);
        CHECK(rd.bias_sq == doctest::Approx(excluded).epsilon(1e-12));
        CHECK(rd.dim == m.dim);
    }
}

TEST_CASE("selection propagates penalty and shape errors") {
    auto obs = random_obs(2, 16, 0, 0.5);
    CHECK(code_of([&] { maxiset::select_model(obs, collection_spec::full(3), penalty_rule::constant(2.0)); }) ==
          errc::shape_mismatch);
    obs.n = 1;
    CHECK(code_of([&] { maxiset::select_model(obs, collection_spec::full(2), penalty_rule::log_n(4.0)); }) ==
          errc::degenerate_penalty);
}
