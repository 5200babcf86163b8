#pragma once

#include <cstdint>
#include <vector>

#include "maxiset/coeffs.hpp"

namespace maxiset {

struct observation; // gwn.hpp

// ---------------------------------------------------------------------------
// Penalties
// ---------------------------------------------------------------------------

enum class penalty_kind { constant, log_n };

// Dimension-proportional penalty pen(m) = lambda_n * D_m / n with either
// lambda_n = lambda0 or lambda_n = lambda0 * log(n).  over_penalize applies
// to the truncated budgeted collection only: the criterion then charges the
// untruncated common dimension of the budget parameter J instead of the
// model's stored (truncated) dimension.
struct penalty_rule {
    penalty_kind kind = penalty_kind::constant;
    double lambda0 = 1.0;
    bool over_penalize = false;

    static penalty_rule constant(double lambda0, bool over_penalize = false) {
        return {penalty_kind::constant, lambda0, over_penalize};
    }
    static penalty_rule log_n(double lambda0, bool over_penalize = false) {
        return {penalty_kind::log_n, lambda0, over_penalize};
    }
};

// lambda0 (constant) or lambda0 * log(n) (natural log).
// Throws degenerate_penalty when the result is <= 0 (e.g. log penalty at n=1).
double lambda_n(const penalty_rule& pen, std::int64_t n);

// The unique integer j0 with 2^j0 <= n/lambda_n < 2^{j0+1}.
// Throws noise_too_large when n/lambda_n < 1.
int j0_of(std::int64_t n, const penalty_rule& pen);

// ---------------------------------------------------------------------------
// Collections
// ---------------------------------------------------------------------------

enum class collection_kind {
    sieve_trunc, // nested models span{phi00, psi_jk : j < N}, N in [0, j0]
    full,        // every subset of the detail indices with level < j0
    hybrid,      // budgeted: full below J, floor(2^J (j-J+1)^-theta) above, J in [0, j_trunc]
    hybrid_trunc // budgeted with the scan truncated to J in [0, j0]
};

struct collection_spec {
    collection_kind kind = collection_kind::full;
    int j0 = 0;         // sieve_trunc / full / hybrid_trunc
    double theta = 3.0; // hybrid / hybrid_trunc, must be > 2
    int j_trunc = 0;    // hybrid / hybrid_trunc: exclusive upper level of the models

    static collection_spec sieve(int j0) { return {collection_kind::sieve_trunc, j0, 0.0, j0}; }
    static collection_spec full(int j0) { return {collection_kind::full, j0, 0.0, j0}; }
    static collection_spec hybrid(double theta, int j_trunc) {
        return {collection_kind::hybrid, j_trunc, theta, j_trunc};
    }
    static collection_spec hybrid_trunc(double theta, int j0, int j_trunc) {
        return {collection_kind::hybrid_trunc, j0, theta, j_trunc};
    }
};

// Throws invalid_argument on parameter-domain violations (theta <= 2,
// negative levels, j0 > j_trunc for the truncated budgeted collection).
void validate(const collection_spec& coll);

// Number of levels the collection's models can touch (exclusive upper level).
int level_extent(const collection_spec& coll);

// Per-level budget floor(2^J (j-J+1)^-theta) for level j >= J, capped at the
// level width 2^j.  Exact for the integer/power-of-two parameter combinations
// used by the tests; long-double fallback otherwise.
std::int64_t hybrid_budget(int J, int j, double theta);

// Common dimension of the budgeted model with parameter J and levels < j_trunc:
//   2^J + sum_{J <= j < j_trunc} min(floor(2^J (j-J+1)^-theta), 2^j),
// the 2^J term counting phi00 plus all full levels j < J.
std::int64_t dim_DJ(int J, double theta, int j_trunc);

// Untruncated common dimension: the same sum continued until the budgets
// vanish (they do once (j-J+1)^theta > 2^J, so the sum is finite).
std::int64_t dim_DJ_untruncated(int J, double theta);

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

enum class model_kind {
    sieve,  // all detail indices with level < N, plus phi00
    subset, // an arbitrary detail index set, plus phi00
    hybrid  // full levels below J plus budgeted per-level index sets above
};

struct model_spec {
    model_kind kind = model_kind::subset;
    int level = 0;      // N (sieve) or J (hybrid)
    index_set indices;  // detail indices (subset: all of them; hybrid: all kept ones)
    std::int64_t dim = 1; // phi00 plus the number of detail indices

    bool contains(int j, int k) const;

    static model_spec sieve(int N);
    static model_spec subset(index_set idx);
};

// ---------------------------------------------------------------------------
// Selection
// ---------------------------------------------------------------------------

// Exact minimizer of the penalized contrast
//   -(alpha00_hat^2 + sum_{i in m} beta_hat_i^2) + lambda_n * D_m / n
// over the collection.  For the full collection this reduces to keeping
// exactly the indices with |beta_hat| > sqrt(lambda_n/n) (strict inequality).
// Criterion ties break toward the smaller dimension, then the smaller N or J,
// then the lexicographically smaller index set.
// Throws shape_mismatch when the collection reaches past the stored depth.
model_spec select_model(const observation& obs, const collection_spec& coll,
                        const penalty_rule& pen);

// Exhaustive reference selector: same criterion and tie-break, but by direct
// enumeration of every model in the collection.  Guard: at most `max_models`
// models (default 10^6), else collection_too_large.
model_spec brute_force_select(const observation& obs, const collection_spec& coll,
                              const penalty_rule& pen,
                              std::int64_t max_models = 1000000);

// Every model of the collection, materialized.  Guard as above.
std::vector<model_spec> enumerate_models(const collection_spec& coll,
                                         std::int64_t max_models);

// Penalized criterion value of one explicit model against an observation.
double model_criterion(const observation& obs, const model_spec& m,
                       const collection_spec& coll, const penalty_rule& pen);

// Dimension charged by the penalty: m.dim, except the untruncated common
// dimension for budgeted models under over_penalize.
std::int64_t penalized_dim(const model_spec& m, const collection_spec& coll,
                           const penalty_rule& pen);

// Copy of c with every coefficient outside m zeroed; alpha00 always kept.
// Throws shape_mismatch when m's indices lie outside c's depth.
wavelet_coeffs project(const wavelet_coeffs& c, const model_spec& m);

struct risk_decomp {
    double bias_sq = 0.0;   // sum of squared coefficients outside m
    std::int64_t dim = 1;   // m.dim
};

risk_decomp risk_decomposition(const wavelet_coeffs& s, const model_spec& m);

} // namespace maxiset
