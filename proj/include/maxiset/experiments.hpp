#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "maxiset/coeffs.hpp"
#include "maxiset/collections.hpp"
#include "maxiset/gwn.hpp"
#include "maxiset/spaces.hpp"

namespace maxiset {

// ---------------------------------------------------------------------------
// Collection families: the per-n instantiation of a collection, truncated at
// the admissible resolution j0(n)
// ---------------------------------------------------------------------------

struct collection_family {
    collection_kind kind = collection_kind::full;
    double theta = 3.0; // budgeted only
    int j_trunc = 18;   // budgeted only: exclusive upper level of the models

    collection_spec at(std::int64_t n, const penalty_rule& pen) const;

    static collection_family sieve() { return {collection_kind::sieve_trunc, 0.0, 0}; }
    static collection_family full() { return {collection_kind::full, 0.0, 0}; }
    static collection_family hybrid(double theta, int j_trunc) {
        return {collection_kind::hybrid_trunc, theta, j_trunc};
    }
};

// Dyadic grid 2^lo, 2^(lo+1), ..., 2^hi.
std::vector<std::int64_t> dyadic_grid(int lo, int hi);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct rate_point {
    std::int64_t n = 0;
    double lambda = 0.0;
    double value = 0.0;
    double stderr_ = 0.0;
};

// A (n, value) series with its fitted log-log slope against lambda_n/n, so
// constant and log penalties share one predicted exponent.
struct rate_report {
    std::vector<rate_point> series;
    double slope = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
};

// Least squares of log(value) on log(lambda_n/n); fills the slope fields.
// Values must be positive and the series at least 3 points long for the
// stderr to be meaningful.
void fit_loglog(rate_report& report);

struct mc_stat {
    double mean = 0.0;
    double stderr_ = 0.0;
};

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

// Sample mean/standard error over `reps` replications of the squared loss
// ||project(observation, selected model) - s||^2 (computed within s's depth).
// Replications use the counter-based stream, so the result is independent of
// `jobs` (worker threads) and bitwise reproducible for equal (seed, inputs).
mc_stat mc_risk(const wavelet_coeffs& s, const collection_spec& coll,
                const penalty_rule& pen, std::int64_t n, std::int64_t reps,
                std::uint64_t seed, int jobs = 1);

// Deterministic series Q(s, n) over the grid, collections truncated per n.
rate_report q_curve(const wavelet_coeffs& s, const collection_family& fam,
                    const penalty_rule& pen, const std::vector<std::int64_t>& n_grid);

// Monte Carlo risk series over the grid.
rate_report risk_curve(const wavelet_coeffs& s, const collection_family& fam,
                       const penalty_rule& pen, const std::vector<std::int64_t>& n_grid,
                       std::int64_t reps, std::uint64_t seed, int jobs = 1);

// Both sides of the risk-rate <-> Q-rate equivalence, normalized by rho^2:
// consistent iff the two normalized series classify identically (bounded with
// bounded, diverging with diverging) and neither is inconclusive.
struct equivalence_result {
    rate_report q_normalized;
    rate_report risk_normalized;
    series_verdict q_verdict;
    series_verdict risk_verdict;
    bool consistent = false;
};
equivalence_result equivalence_check(const wavelet_coeffs& s, const collection_family& fam,
                                     const penalty_rule& pen,
                                     const std::vector<std::int64_t>& n_grid, double alpha,
                                     std::int64_t reps, std::uint64_t seed, int jobs = 1);

// Empirical counterpart of the oracle inequality: for each n the ratio
//   mean risk / (Q(s,n) + (1 + kraft_sum)/n),
// reported with its maximum over the grid.  Requires lambda_n > 1 on the grid.
struct oracle_row {
    std::int64_t n = 0;
    double lambda = 0.0;
    double risk = 0.0;
    double risk_stderr = 0.0;
    double q = 0.0;
    double kraft = 0.0;
    double ratio = 0.0;
};
struct oracle_result {
    std::vector<oracle_row> rows;
    double max_ratio = 0.0;
};
oracle_result oracle_check(const wavelet_coeffs& s, const collection_family& fam,
                           const penalty_rule& pen, const std::vector<std::int64_t>& n_grid,
                           std::int64_t reps, std::uint64_t seed, int jobs = 1);

// ---------------------------------------------------------------------------
// Membership matrix
// ---------------------------------------------------------------------------

// Witness signals x functionals, each cell a finite-scale verdict.  Verdicts
// scan levels/budget parameters in [0, j_max]; the witnesses are generated
// deeper (min(j_max + 6, 22)) so energy tails near the scan boundary are not
// flattened by the truncation itself.
struct embedding_cell {
    series_verdict besov2_tail;
    series_verdict weak_rearr, weak_below, weak_count;
    series_verdict hybrid_A;
    series_verdict nonlinear_A_sieve, nonlinear_A_full, nonlinear_A_hybrid;
};
struct embedding_report_result {
    double alpha = 0.0, theta = 0.0;
    int j_max = 0;
    int witness_depth = 0;
    std::map<std::string, embedding_cell> rows; // keys: s0, s1, besov_extremal
};
embedding_report_result embedding_report(double alpha, double theta, int j_max);

} // namespace maxiset
