#pragma once

#include <cstdint>

#include "maxiset/coeffs.hpp"
#include "maxiset/collections.hpp"

namespace maxiset {

// Sequence-domain realization of the white noise model at noise level
// 1/sqrt(n): every coefficient is observed plus an independent N(0, 1/n)
// error.  By orthonormality of the basis this is an exact reduction of the
// continuous model, so no path simulation is needed.
struct observation {
    wavelet_coeffs coeffs; // noisy alpha00_hat and beta_hat
    std::int64_t n = 1;    // inverse squared noise level
    std::uint64_t seed = 0;
};

// beta_hat_{jk} = beta_{jk} + z_{jk}/sqrt(n), alpha00 likewise, with all z
// independent standard normals drawn from the counter-based stream keyed by
// (seed; rep, j, k).  Equal (s, n, seed, rep) give bitwise-equal output.
//
// noise_depth limits noise to levels j < noise_depth (default: all levels).
// Statistics that only read levels below some extent are unchanged by the
// limit; the Monte Carlo drivers use it to skip draws they never consume.
observation observe(const wavelet_coeffs& s, std::int64_t n, std::uint64_t seed,
                    std::uint64_t rep = 0, int noise_depth = -1);

// The exponential series sum_m exp(-(sqrt(lambda_n)-1)^2 D_m / 2) over the
// collection.  Full collection: closed form e^-c (1+e^-c)^(2^j0 - 1) with
// c = (sqrt(lambda_n)-1)^2/2, evaluated in log space (may round to +inf for
// lambda_n barely above 1).  Sieve/budgeted: one term per N (resp. J).
// Throws penalty_too_small unless lambda_n > 1.
double kraft_sum(const collection_spec& coll, std::int64_t n, const penalty_rule& pen);

struct an_estimate {
    double prob = 0.0;   // Monte Carlo estimate
    double stderr_ = 0.0; // binomial standard error
};

// Monte Carlo estimate of
//   P{ sup_{m,m'} ||W restricted to span(m)+span(m')||^2 / (D_m + D_m') <= lambda_n }
// where W has independent standard-normal coordinates (one per detail index
// plus the alpha00 slot), drawn fresh each replication.  The squared norm over
// m+m' sums z^2 over the union of the index sets plus the alpha00 slot;
// the denominator adds the two model dimensions.
// Guard: at most 10^4 unordered model pairs (with repetition), else
// collection_too_large.
an_estimate estimate_An_prob(const collection_spec& coll, std::int64_t n,
                             const penalty_rule& pen, std::int64_t reps,
                             std::uint64_t seed);

} // namespace maxiset
