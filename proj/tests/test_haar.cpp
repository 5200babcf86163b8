#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "maxiset/coeffs.hpp"
#include "maxiset/errors.hpp"
#include "maxiset/haar.hpp"
#include "maxiset/rng.hpp"

using maxiset::error;
using maxiset::wavelet_coeffs;

namespace {

// Haar mother wavelet on [0,1): +1 on [0,1/2), -1 on [1/2,1), 0 elsewhere.
double mother(double u) {
    if (u < 0.0 || u >= 1.0) return 0.0;
    return u < 0.5 ? 1.0 : -1.0;
}

double psi(int j, int k, double t) { return std::exp2(j * 0.5) * mother(std::exp2(j) * t - k); }

// Independent oracle: coefficients as quadrature inner products
// (1/N) * sum_i x_i * psi_jk(i/N) of the step function with values x_i.
// Exact for j < log2(N) because psi_jk is constant on each sample cell.
wavelet_coeffs analyze_by_quadrature(const std::vector<double>& x) {
    int n = static_cast<int>(x.size());
    int depth = 0;
    while ((1 << depth) < n) ++depth;
    auto c = wavelet_coeffs::zeros(depth);
    for (int i = 0; i < n; ++i) c.alpha00 += x[static_cast<std::size_t>(i)];
    c.alpha00 /= n;
    for (int j = 0; j < depth; ++j)
        for (int k = 0; k < (1 << j); ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += x[static_cast<std::size_t>(i)] * psi(j, k, static_cast<double>(i) / n);
            c.at(j, k) = acc / n;
        }
    return c;
}

std::vector<double> random_samples(int len, std::uint64_t rep) {
    maxiset::counter_rng g(777);
    std::vector<double> x(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) x[static_cast<std::size_t>(i)] = g.normal(rep, 1, static_cast<std::uint32_t>(i));
    return x;
}

} // namespace

TEST_CASE("two-sample step (1,-1) has unit first detail coefficient") {
    auto c = maxiset::analyze({1.0, -1.0});
    REQUIRE(c.depth() == 1);
    CHECK(c.alpha00 == doctest::Approx(0.0));
    CHECK(c.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("constant samples load only the scaling coefficient") {
    auto c = maxiset::analyze(std::vector<double>(8, 3.25));
    CHECK(c.alpha00 == doctest::Approx(3.25));
    for (int j = 0; j < c.depth(); ++j)
        for (int k = 0; k < (1 << j); ++k) CHECK(c.at(j, k) == doctest::Approx(0.0));
}

TEST_CASE("analyze matches the quadrature oracle") {
    for (int len : {1, 2, 4, 16, 64}) {
        auto x = random_samples(len, static_cast<std::uint64_t>(len));
        auto fast = maxiset::analyze(x);
        auto slow = analyze_by_quadrature(x);
        REQUIRE(fast.depth() == slow.depth());
        CHECK(fast.alpha00 == doctest::Approx(slow.alpha00).epsilon(1e-12));
        for (int j = 0; j < fast.depth(); ++j)
            for (int k = 0; k < (1 << j); ++k)
                CHECK(fast.at(j, k) == doctest::Approx(slow.at(j, k)).epsilon(1e-12));
    }
}

TEST_CASE("synthesize of a single basis coefficient samples that basis function") {
    const int depth = 4, n = 1 << depth;
    for (auto [j, k] : {std::pair{0, 0}, std::pair{2, 1}, std::pair{3, 7}}) {
        auto c = wavelet_coeffs::zeros(depth);
        c.at(j, k) = 1.0;
        auto x = maxiset::synthesize(c);
        REQUIRE(static_cast<int>(x.size()) == n);
        for (int i = 0; i < n; ++i)
            CHECK(x[static_cast<std::size_t>(i)] ==
                  doctest::Approx(psi(j, k, static_cast<double>(i) / n)).epsilon(1e-12));
    }
    auto c = wavelet_coeffs::zeros(depth);
    c.alpha00 = 2.5;
    auto x = maxiset::synthesize(c);
    for (double v : x) CHECK(v == doctest::Approx(2.5));
}

TEST_CASE("analyze/synthesize round-trip and Parseval identity") {
    for (int rep = 0; rep < 10; ++rep) {
        auto x = random_samples(64, static_cast<std::uint64_t>(100 + rep));
        auto c = maxiset::analyze(x);
        auto back = maxiset::synthesize(c);
        REQUIRE(back.size() == x.size());
        double sumsq = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
            sumsq += x[i] * x[i];
        }
        // Orthonormality under the averaging inner product.
        CHECK(maxiset::l2_norm_sq(c) == doctest::Approx(sumsq / static_cast<double>(x.size())).epsilon(1e-12));
    }
    // And the reverse direction: analyze(synthesize(c)) == c.
    auto c = wavelet_coeffs::zeros(5);
    maxiset::counter_rng g(5150);
    for (int j = 0; j < 5; ++j)
        for (int k = 0; k < (1 << j); ++k)
            c.at(j, k) = g.normal(0, static_cast<std::uint32_t>(j + 1), static_cast<std::uint32_t>(k));
    c.alpha00 = g.normal(0, 0, 0);
    auto round = maxiset::analyze(maxiset::synthesize(c));
    CHECK(round.alpha00 == doctest::Approx(c.alpha00).epsilon(1e-12));
    for (int j = 0; j < 5; ++j)
        for (int k = 0; k < (1 << j); ++k)
            CHECK(round.at(j, k) == doctest::Approx(c.at(j, k)).epsilon(1e-12));
}

TEST_CASE("analyze rejects non-power-of-two input") {
    CHECK_THROWS_AS(maxiset::analyze({}), error);
    CHECK_THROWS_AS(maxiset::analyze({1.0, 2.0, 3.0}), error);
    CHECK_THROWS_AS(maxiset::analyze(std::vector<double>(12, 0.0)), error);
}

TEST_CASE("synthesize validates its input shape") {
    auto bad = wavelet_coeffs::zeros(3);
    bad.levels[2].pop_back();
    CHECK_THROWS_AS(maxiset::synthesize(bad), error);
}
