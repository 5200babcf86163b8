#include "maxiset/gwn.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "maxiset/errors.hpp"
#include "maxiset/rng.hpp"

namespace maxiset {

namespace detail {
double lambda_value(const penalty_rule& pen, std::int64_t n); // collections.cpp
}

observation observe(const wavelet_coeffs& s, std::int64_t n, std::uint64_t seed,
                    std::uint64_t rep, int noise_depth) {
    validate(s);
    if (n < 1) raise(errc::invalid_argument, "n must be >= 1, got " + std::to_string(n));
    observation obs{s, n, seed};
    const int depth =
        noise_depth < 0 ? s.depth() : std::min(noise_depth, s.depth());
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const counter_rng rng(seed);
    obs.coeffs.alpha00 += scale * rng.normal(rep, 0, 0);
    for (int j = 0; j < depth; ++j) {
        auto& lvl = obs.coeffs.levels[static_cast<std::size_t>(j)];
        const auto slot = static_cast<std::uint32_t>(j + 1);
        for (std::size_t k = 0; k < lvl.size(); ++k)
            lvl[k] += scale * rng.normal(rep, slot, static_cast<std::uint32_t>(k));
    }
    return obs;
}

double kraft_sum(const collection_spec& coll, std::int64_t n, const penalty_rule& pen) {
    validate(coll);
    const double lam = lambda_n(pen, n);
    if (!(lam > 1.0))
        raise(errc::penalty_too_small,
              "lambda_n = " + std::to_string(lam) + " <= 1: the exponential weights need lambda_n > 1");
    const double c = 0.5 * (std::sqrt(lam) - 1.0) * (std::sqrt(lam) - 1.0);
    switch (coll.kind) {
        case collection_kind::sieve_trunc: {
            double sum = 0.0;
            for (int N = 0; N <= coll.j0; ++N)
                sum += std::exp(-c * static_cast<double>(std::int64_t{1} << N));
            return sum;
        }
        case collection_kind::full: {
            // sum over subsets I of the j0 detail levels of e^{-c(1+|I|)}
            // = e^{-c} (1+e^{-c})^{2^{j0}-1}; log space keeps the power stable
            const double n_idx = static_cast<double>((std::int64_t{1} << coll.j0) - 1);
            const double log_sum = -c + n_idx * std::log1p(std::exp(-c));
            return std::exp(log_sum);
        }
        case collection_kind::hybrid:
        case collection_kind::hybrid_trunc: {
            const int J_hi = coll.kind == collection_kind::hybrid ? coll.j_trunc : coll.j0;
            double sum = 0.0;
            for (int J = 0; J <= J_hi; ++J)
                sum += std::exp(-c * static_cast<double>(dim_DJ(J, coll.theta, coll.j_trunc)));
            return sum;
        }
    }
    raise(errc::invalid_argument, "unknown collection kind");
}

an_estimate estimate_An_prob(const collection_spec& coll, std::int64_t n,
                             const penalty_rule& pen, std::int64_t reps,
                             std::uint64_t seed) {
    validate(coll);
    if (reps < 1) raise(errc::invalid_argument, "reps must be >= 1");
    // lambda may legitimately be 0 here (the event is then a.s. empty)
    const double lam = detail::lambda_value(pen, n);

    const auto models = enumerate_models(coll, 10000);
    const auto M = static_cast<std::int64_t>(models.size());
    if (M * (M + 1) / 2 > 10000)
        raise(errc::collection_too_large,
              "A_n scan over " + std::to_string(M * (M + 1) / 2) +
                  " model pairs exceeds the guard of 10^4");

    // Precompute each pair's union of detail indices and summed dimension.
    const int extent = level_extent(coll);
    struct pair_info {
        std::vector<level_pos> uni;
        std::int64_t dims = 2;
    };
    std::vector<pair_info> pairs;
    pairs.reserve(static_cast<std::size_t>(M * (M + 1) / 2));
    for (std::int64_t a = 0; a < M; ++a) {
        for (std::int64_t b = a; b < M; ++b) {
            pair_info p;
            p.dims = models[static_cast<std::size_t>(a)].dim + models[static_cast<std::size_t>(b)].dim;
            for (int j = 0; j < extent; ++j)
                for (int k = 0; k < (1 << j); ++k)
                    if (models[static_cast<std::size_t>(a)].contains(j, k) ||
                        models[static_cast<std::size_t>(b)].contains(j, k))
                        p.uni.emplace_back(j, k);
            pairs.push_back(std::move(p));
        }
    }

    const counter_rng rng(seed);
    std::int64_t hits = 0;
    wavelet_coeffs z = wavelet_coeffs::zeros(extent);
    for (std::int64_t rep = 0; rep < reps; ++rep) {
        const auto r = static_cast<std::uint64_t>(rep);
        z.alpha00 = rng.normal(r, 0, 0);
        for (int j = 0; j < extent; ++j) {
            auto& lvl = z.levels[static_cast<std::size_t>(j)];
            for (std::size_t k = 0; k < lvl.size(); ++k)
                lvl[k] = rng.normal(r, static_cast<std::uint32_t>(j + 1),
                                    static_cast<std::uint32_t>(k));
        }
        const double a2 = z.alpha00 * z.alpha00;
        bool ok = true;
        for (const auto& p : pairs) {
            double norm_sq = a2;
            for (const auto& [j, k] : p.uni) {
                const double v = z.at(j, k);
                norm_sq += v * v;
            }
            if (norm_sq > lam * static_cast<double>(p.dims)) {
                ok = false;
                break;
            }
        }
        if (ok) ++hits;
    }

    const double p_hat = static_cast<double>(hits) / static_cast<double>(reps);
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(reps));
    return {p_hat, se};
}

} // namespace maxiset
