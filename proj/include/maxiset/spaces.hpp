#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxiset/coeffs.hpp"
#include "maxiset/collections.hpp"

namespace maxiset {

// ---------------------------------------------------------------------------
// Finite-scale boundedness verdicts
// ---------------------------------------------------------------------------

enum class verdict { bounded, diverging, inconclusive };

const char* to_string(verdict v);

// A sup-type functional reported together with the series it is the sup of,
// so boundedness/divergence remains visible from finite data.
struct sup_series {
    std::vector<double> values;
    double sup = 0.0; // max of values (0 for an empty series)
};

struct series_verdict {
    double value = 0.0;        // the sup at truncation
    double growth_ratio = 1.0; // max(second half) / max(first half)
    verdict v = verdict::inconclusive;
};

// Split the series in half and compare the half maxima S1, S2:
//   diverging     when S2/S1 >= growth_factor;
//   bounded       when S2/S1 <= 1, or the top-half band max/min <= band_factor,
//                 or the final value has fallen back below S1;
//   inconclusive  otherwise.
// Asymptotic statements can only be proxied at finite truncation; these
// factor thresholds are the configurable proxies.
series_verdict classify_series(const std::vector<double>& values,
                               double growth_factor = 2.0,
                               double band_factor = 4.0);

// ---------------------------------------------------------------------------
// Approximation-space functionals
// ---------------------------------------------------------------------------

// inf_m { ||s_m - s||^2 + lambda_n D_m / n } over the collection, computed by
// running the model selector on the noise-free coefficients (the deterministic
// criterion differs from the target by the constant ||s||^2, so the same
// argmin applies).
double Q_functional(const wavelet_coeffs& s, const collection_spec& coll,
                    const penalty_rule& pen, std::int64_t n);

// Level-wise l_p smoothness series: values[j] = 2^{j p (alpha + 1/2 - 1/p)}
// * sum_k |beta_{jk}|^p, for 0 <= j < depth.  Requires p >= 1, alpha > 0.
sup_series besov_series(const wavelet_coeffs& s, double alpha, double p);

// Energy-tail series: values[J] = 2^{2 J alpha/(1+2 alpha)} * tail_energy(J),
// for 0 <= J <= depth.  Requires alpha > 0.
sup_series besov2_tail_series(const wavelet_coeffs& s, double alpha);

// Weak (rearrangement) functionals, exact sups over their step functions:
//   rearr = sup_n n^{1/q} |beta|_(n)          (global non-increasing rearrangement)
//   below = sup_u u^{q-2} sum beta^2 1{|beta| <= u}
//   count = sup_u u^q #{|beta| > u}
// Requires 0 < q < 2.
struct weak_besov_values {
    double rearr = 0.0;
    double below = 0.0;
    double count = 0.0;
};
weak_besov_values weak_besov_functionals(const wavelet_coeffs& s, double q);

// Same three functionals evaluated on the truncations to depth J for
// J = 0..depth; series index J.  Bounded series <-> membership is decidable
// from finite data the same way as for the other sup functionals.
struct weak_besov_series {
    sup_series rearr, below, count;
};
weak_besov_series weak_besov_depth_series(const wavelet_coeffs& s, double q);

// Budgeted-residual series: values[J] = 2^{2 J alpha} * E_J with
//   E_J = sum_{J <= j < depth} sum_{rank > floor(2^J (j-J+1)^-theta)} |beta_j|^2_(rank)
// (1-based ranks of the level-wise non-increasing rearrangement; the inner
// sum is empty when the budget reaches the level width).
// Requires alpha > 0, theta > 2.
sup_series hybrid_A_series(const wavelet_coeffs& s, double alpha, double theta);

// Best-approximation series under a dimension budget:
// values for M = m_first..M_max hold M^{2 alpha} * inf_{D_m <= M} ||s_m - s||^2,
// with the inner infimum in closed form per collection:
//   full    -> global rearrangement tail past rank M          (m_first = 1)
//   sieve   -> tail energy at the largest N with 2^N <= M     (m_first = 1)
//   budgeted-> E_J at the largest J with D_J <= M             (m_first = D_0)
struct budget_series {
    std::vector<double> values;
    std::int64_t m_first = 1;
    double sup = 0.0;
};
budget_series nonlinear_A_series(const wavelet_coeffs& s, const collection_spec& coll,
                                 double alpha, std::int64_t M_max);

// Linear-truncation series over a noise grid:
// values[i] = rate_rho(pen, n_i, alpha)^-1 * sqrt(tail_energy(s, j0(n_i))).
// Throws insufficient_depth unless j0(n) < depth for every grid point.
sup_series linear_L_series(const wavelet_coeffs& s, const penalty_rule& pen,
                           double alpha, const std::vector<std::int64_t>& n_grid);

// Target rate (lambda_n/n)^{alpha/(1+2 alpha)}.
// Throws degenerate_rate when lambda_n >= n.
double rate_rho(const penalty_rule& pen, std::int64_t n, double alpha);

// Explicit constants controlling how large the penalty scale must be:
//   g(delta, alpha0)       = (1-delta)^{2 alpha0/(2 alpha0+1)} - 1 + delta,
//   upsilon(delta, p, alpha0) = (8/(p g)) (16/g + 1).
// Domains: delta in (0, 1/2], p in (0,1), alpha0 > 0; g lands in (0,1).
struct penalty_constants {
    double g = 0.0;
    double upsilon = 0.0;
};
penalty_constants sufficient_penalty_constants(double delta, double p, double alpha0);

} // namespace maxiset
