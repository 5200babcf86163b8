#include "maxiset/collections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "maxiset/errors.hpp"
#include "maxiset/gwn.hpp"

namespace maxiset {

// ---------------------------------------------------------------------------
// Penalties
// ---------------------------------------------------------------------------

namespace detail {

// Raw lambda value with no positivity check; estimate_An_prob tolerates 0.
double lambda_value(const penalty_rule& pen, std::int64_t n) {
    if (n < 1) raise(errc::invalid_argument, "n must be >= 1, got " + std::to_string(n));
    if (pen.kind == penalty_kind::log_n) return pen.lambda0 * std::log(static_cast<double>(n));
    return pen.lambda0;
}

} // namespace detail

double lambda_n(const penalty_rule& pen, std::int64_t n) {
    const double lam = detail::lambda_value(pen, n);
    if (!(lam > 0.0))
        raise(errc::degenerate_penalty,
              "lambda_n = " + std::to_string(lam) + " at n = " + std::to_string(n) +
                  "; the penalty scale must be positive");
    return lam;
}

int j0_of(std::int64_t n, const penalty_rule& pen) {
    const double lam = lambda_n(pen, n);
    const double nd = static_cast<double>(n);
    if (nd < lam)
        raise(errc::noise_too_large, "n/lambda_n = " + std::to_string(nd / lam) +
                                         " < 1: no admissible resolution level");
    // ldexp scales by exact powers of two, so both defining inequalities are
    // checked without introducing extra rounding.
    int j0 = static_cast<int>(std::floor(std::log2(nd / lam)));
    while (std::ldexp(lam, j0) > nd) --j0;
    while (std::ldexp(lam, j0 + 1) <= nd) ++j0;
    return j0;
}

// ---------------------------------------------------------------------------
// Collections
// ---------------------------------------------------------------------------

void validate(const collection_spec& coll) {
    const bool budgeted =
        coll.kind == collection_kind::hybrid || coll.kind == collection_kind::hybrid_trunc;
    if (coll.j0 < 0 || coll.j_trunc < 0)
        raise(errc::invalid_argument, "collection levels must be nonnegative");
    if (budgeted && !(coll.theta > 2.0))
        raise(errc::invalid_argument,
              "budget decay theta must exceed 2, got " + std::to_string(coll.theta));
    if (coll.kind == collection_kind::hybrid_trunc && coll.j0 > coll.j_trunc)
        raise(errc::invalid_argument, "budget scan bound j0 = " + std::to_string(coll.j0) +
                                          " exceeds level bound j_trunc = " +
                                          std::to_string(coll.j_trunc));
}

int level_extent(const collection_spec& coll) {
    switch (coll.kind) {
        case collection_kind::sieve_trunc:
        case collection_kind::full:
            return coll.j0;
        case collection_kind::hybrid:
        case collection_kind::hybrid_trunc:
            return coll.j_trunc;
    }
    return 0;
}

std::int64_t hybrid_budget(int J, int j, double theta) {
    if (j < J) raise(errc::invalid_argument, "budgets are defined for levels j >= J");
    if (J > 62) raise(errc::invalid_argument, "budget parameter J exceeds the 62-bit level range");
    const std::int64_t top = std::int64_t{1} << J;
    const std::int64_t d = static_cast<std::int64_t>(j) - J + 1;
    if (d == 1) return top; // j == J: the budget 2^J exactly fills the level

    std::int64_t b;
    const double theta_r = std::round(theta);
    if (std::fabs(theta - theta_r) < 1e-12) {
        // integer exponent: exact via integer arithmetic
        std::int64_t p = 1;
        bool overflow = false;
        for (int i = 0; i < static_cast<int>(theta_r); ++i) {
            if (p > top / d) { overflow = true; break; }
            p *= d;
        }
        b = overflow ? 0 : top / p;
    } else {
        // 2^(J - theta*log2(d)), floored; the nudge absorbs roundoff when the
        // true value is an integer (e.g. power-of-two d with dyadic exponent)
        const long double e = static_cast<long double>(J) -
                              static_cast<long double>(theta) * std::log2(static_cast<long double>(d));
        if (e < 0.0L) return 0;
        b = static_cast<std::int64_t>(std::floor(std::exp2(e) + 1e-9L));
    }
    // Cap at the level width.  Slow budget decay keeps b > 0 far above the
    // 62-bit width range (e.g. theta = 2.5, J = 15 reaches j = 78); there the
    // width cannot bind (b <= 2^J << 2^j), so only shift when it can.
    return j < 63 ? std::min(b, std::int64_t{1} << j) : b;
}

std::int64_t dim_DJ(int J, double theta, int j_trunc) {
    if (J < 0 || J > j_trunc)
        raise(errc::invalid_argument, "budget parameter J = " + std::to_string(J) +
                                          " outside [0, " + std::to_string(j_trunc) + "]");
    if (J > 62) raise(errc::invalid_argument, "budget parameter J exceeds the 62-bit level range");
    if (!(theta > 2.0)) raise(errc::invalid_argument, "budget decay theta must exceed 2");
    std::int64_t dim = std::int64_t{1} << J; // phi00 plus the full levels j < J
    for (int j = J; j < j_trunc; ++j) dim += hybrid_budget(J, j, theta);
    return dim;
}

std::int64_t dim_DJ_untruncated(int J, double theta) {
    if (J < 0) raise(errc::invalid_argument, "budget parameter J must be nonnegative");
    if (J > 62) raise(errc::invalid_argument, "budget parameter J exceeds the 62-bit level range");
    if (!(theta > 2.0)) raise(errc::invalid_argument, "budget decay theta must exceed 2");
    std::int64_t dim = std::int64_t{1} << J;
    for (int j = J;; ++j) {
        const std::int64_t b = hybrid_budget(J, j, theta);
        if (b == 0) break; // budgets are non-increasing in j, nothing further
        dim += b;
    }
    return dim;
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

bool model_spec::contains(int j, int k) const {
    switch (kind) {
        case model_kind::sieve:
            return j < level;
        case model_kind::subset:
        case model_kind::hybrid:
            return indices.count({j, k}) > 0;
    }
    return false;
}

model_spec model_spec::sieve(int N) {
    model_spec m;
    m.kind = model_kind::sieve;
    m.level = N;
    m.dim = std::int64_t{1} << N;
    return m;
}

model_spec model_spec::subset(index_set idx) {
    model_spec m;
    m.kind = model_kind::subset;
    m.indices = std::move(idx);
    m.dim = 1 + static_cast<std::int64_t>(m.indices.size());
    return m;
}

// ---------------------------------------------------------------------------
// Selection
// ---------------------------------------------------------------------------

namespace {

// (criterion, dim, level, indices) with the documented tie-break order.
struct candidate {
    double crit = 0.0;
    std::int64_t dim = 0;
    int level = 0;
    const index_set* indices = nullptr; // optional; empty sets compare equal

    bool better_than(const candidate& o) const {
        if (crit != o.crit) return crit < o.crit;
        if (dim != o.dim) return dim < o.dim;
        if (level != o.level) return level < o.level;
        if (indices && o.indices) return *indices < *o.indices;
        return false;
    }
};

void require_extent(const observation& obs, const collection_spec& coll) {
    if (level_extent(coll) > obs.coeffs.depth())
        raise(errc::shape_mismatch,
              "collection reaches level " + std::to_string(level_extent(coll)) +
                  " but the observation stores depth " + std::to_string(obs.coeffs.depth()));
}

double level_energy(const wavelet_coeffs& c, int j) {
    double e = 0.0;
    for (double v : c.levels[static_cast<std::size_t>(j)]) e += v * v;
    return e;
}

model_spec select_sieve(const observation& obs, const collection_spec& coll, double lam) {
    const double nd = static_cast<double>(obs.n);
    const double a2 = obs.coeffs.alpha00 * obs.coeffs.alpha00;
    candidate best;
    int best_N = 0;
    double captured = a2;
    for (int N = 0; N <= coll.j0; ++N) {
        if (N > 0) captured += level_energy(obs.coeffs, N - 1);
        const std::int64_t dim = std::int64_t{1} << N;
        const candidate cand{-captured + lam * static_cast<double>(dim) / nd, dim, N, nullptr};
        if (N == 0 || cand.better_than(best)) {
            best = cand;
            best_N = N;
        }
    }
    return model_spec::sieve(best_N);
}

model_spec select_full(const observation& obs, const collection_spec& coll, double lam) {
    const double thr = std::sqrt(lam / static_cast<double>(obs.n));
    index_set keep;
    for (int j = 0; j < coll.j0; ++j) {
        const auto& lvl = obs.coeffs.levels[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k < lvl.size(); ++k)
            if (std::fabs(lvl[k]) > thr) keep.emplace(j, static_cast<int>(k));
    }
    return model_spec::subset(std::move(keep));
}

// Positions of one level ordered by |value| descending, ties by position.
std::vector<int> level_order(const wavelet_coeffs& c, int j) {
    const auto& lvl = c.levels[static_cast<std::size_t>(j)];
    std::vector<int> order(lvl.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::fabs(lvl[static_cast<std::size_t>(a)]) > std::fabs(lvl[static_cast<std::size_t>(b)]);
    });
    return order;
}

model_spec select_hybrid(const observation& obs, const collection_spec& coll,
                         const penalty_rule& pen, double lam) {
    const int J_hi = coll.kind == collection_kind::hybrid ? coll.j_trunc : coll.j0;
    const int jt = coll.j_trunc;
    const double nd = static_cast<double>(obs.n);
    const double a2 = obs.coeffs.alpha00 * obs.coeffs.alpha00;

    // per level: positions sorted by |beta_hat| desc, prefix sums of squares
    std::vector<std::vector<int>> order(static_cast<std::size_t>(jt));
    std::vector<std::vector<double>> prefix(static_cast<std::size_t>(jt));
    for (int j = 0; j < jt; ++j) {
        order[static_cast<std::size_t>(j)] = level_order(obs.coeffs, j);
        const auto& lvl = obs.coeffs.levels[static_cast<std::size_t>(j)];
        auto& pre = prefix[static_cast<std::size_t>(j)];
        pre.assign(lvl.size() + 1, 0.0);
        for (std::size_t i = 0; i < lvl.size(); ++i) {
            const double v = lvl[static_cast<std::size_t>(order[static_cast<std::size_t>(j)][i])];
            pre[i + 1] = pre[i] + v * v;
        }
    }

    candidate best;
    int best_J = 0;
    double full_below = a2; // energy of the full levels j < J
    for (int J = 0; J <= J_hi; ++J) {
        if (J > 0) full_below += level_energy(obs.coeffs, J - 1);
        double captured = full_below;
        bool saturated = true; // every budget hits its level width
        for (int j = J; j < jt; ++j) {
            const auto b = static_cast<std::size_t>(hybrid_budget(J, j, coll.theta));
            captured += prefix[static_cast<std::size_t>(j)][b];
            saturated = saturated && b == (std::size_t{1} << j);
        }
        const std::int64_t dim = dim_DJ(J, coll.theta, jt);
        const std::int64_t charged =
            pen.over_penalize ? dim_DJ_untruncated(J, coll.theta) : dim;
        const candidate cand{-captured + lam * static_cast<double>(charged) / nd, dim, J, nullptr};
        if (J == 0 || cand.better_than(best)) {
            best = cand;
            best_J = J;
        }
        // Budgets are nondecreasing in J, so once they saturate every level the
        // later parameters repeat this very model; keep its smallest J.
        if (saturated) break;
    }

    model_spec m;
    m.kind = model_kind::hybrid;
    m.level = best_J;
    for (int j = 0; j < best_J; ++j)
        for (int k = 0; k < (1 << j); ++k) m.indices.emplace(j, k);
    for (int j = best_J; j < jt; ++j) {
        const auto b = static_cast<std::size_t>(hybrid_budget(best_J, j, coll.theta));
        for (std::size_t i = 0; i < b; ++i)
            m.indices.emplace(j, order[static_cast<std::size_t>(j)][i]);
    }
    m.dim = dim_DJ(best_J, coll.theta, jt);
    return m;
}

} // namespace

model_spec select_model(const observation& obs, const collection_spec& coll,
                        const penalty_rule& pen) {
    validate(coll);
    require_extent(obs, coll);
    const double lam = lambda_n(pen, obs.n);
    switch (coll.kind) {
        case collection_kind::sieve_trunc:
            return select_sieve(obs, coll, lam);
        case collection_kind::full:
            return select_full(obs, coll, lam);
        case collection_kind::hybrid:
        case collection_kind::hybrid_trunc:
            return select_hybrid(obs, coll, pen, lam);
    }
    raise(errc::invalid_argument, "unknown collection kind");
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

std::vector<level_pos> detail_indices_below(int j_hi) {
    std::vector<level_pos> out;
    for (int j = 0; j < j_hi; ++j)
        for (int k = 0; k < (1 << j); ++k) out.emplace_back(j, k);
    return out;
}

// Binomial coefficient capped at `cap` (avoids overflow in count estimates).
std::int64_t choose_capped(std::int64_t n, std::int64_t k, std::int64_t cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        if (r > cap) return cap + 1;
        r = r * (n - k + i) / i; // exact: partial products of C(n, .) are integers
    }
    return std::min(r, cap + 1);
}

void enumerate_hybrid_level(const std::vector<std::pair<int, std::int64_t>>& quotas,
                            std::size_t li, model_spec& partial, int J, int jt, double theta,
                            std::vector<model_spec>& out) {
    if (li == quotas.size()) {
        model_spec m = partial;
        m.kind = model_kind::hybrid;
        m.level = J;
        m.dim = dim_DJ(J, theta, jt);
        out.push_back(std::move(m));
        return;
    }
    const auto [j, b] = quotas[li];
    const int width = 1 << j;
    // all b-subsets of {0..width-1} in lexicographic order
    std::vector<int> comb(static_cast<std::size_t>(b));
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
        for (int k : comb) partial.indices.emplace(j, k);
        enumerate_hybrid_level(quotas, li + 1, partial, J, jt, theta, out);
        for (int k : comb) partial.indices.erase({j, k});

        int i = static_cast<int>(comb.size()) - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == width - static_cast<int>(comb.size()) + i) --i;
        if (i < 0) break;
        ++comb[static_cast<std::size_t>(i)];
        for (std::size_t t = static_cast<std::size_t>(i) + 1; t < comb.size(); ++t)
            comb[t] = comb[t - 1] + 1;
    }
}

} // namespace

std::vector<model_spec> enumerate_models(const collection_spec& coll, std::int64_t max_models) {
    validate(coll);
    std::vector<model_spec> out;
    switch (coll.kind) {
        case collection_kind::sieve_trunc: {
            for (int N = 0; N <= coll.j0; ++N) out.push_back(model_spec::sieve(N));
            break;
        }
        case collection_kind::full: {
            const std::int64_t n_idx = (std::int64_t{1} << coll.j0) - 1;
            if (n_idx > 62 || (std::int64_t{1} << n_idx) > max_models)
                raise(errc::collection_too_large,
                      "full collection over " + std::to_string(n_idx) +
                          " indices exceeds the enumeration guard of " + std::to_string(max_models));
            const auto idx = detail_indices_below(coll.j0);
            for (std::int64_t mask = 0; mask < (std::int64_t{1} << n_idx); ++mask) {
                index_set s;
                for (std::int64_t b = 0; b < n_idx; ++b)
                    if (mask & (std::int64_t{1} << b)) s.insert(idx[static_cast<std::size_t>(b)]);
                out.push_back(model_spec::subset(std::move(s)));
            }
            break;
        }
        case collection_kind::hybrid:
        case collection_kind::hybrid_trunc: {
            const int J_hi = coll.kind == collection_kind::hybrid ? coll.j_trunc : coll.j0;
            // count before materializing
            std::int64_t total = 0;
            for (int J = 0; J <= J_hi; ++J) {
                std::int64_t per_J = 1;
                for (int j = J; j < coll.j_trunc; ++j) {
                    per_J = std::min(per_J * choose_capped(std::int64_t{1} << j,
                                                           hybrid_budget(J, j, coll.theta),
                                                           max_models),
                                     max_models + 1);
                }
                total = std::min(total + per_J, max_models + 1);
            }
            if (total > max_models)
                raise(errc::collection_too_large,
                      "budgeted collection exceeds the enumeration guard of " +
                          std::to_string(max_models));
            for (int J = 0; J <= J_hi; ++J) {
                std::vector<std::pair<int, std::int64_t>> quotas;
                for (int j = J; j < coll.j_trunc; ++j)
                    quotas.emplace_back(j, hybrid_budget(J, j, coll.theta));
                model_spec partial;
                for (int j = 0; j < J; ++j)
                    for (int k = 0; k < (1 << j); ++k) partial.indices.emplace(j, k);
                enumerate_hybrid_level(quotas, 0, partial, J, coll.j_trunc, coll.theta, out);
            }
            break;
        }
    }
    return out;
}

double model_criterion(const observation& obs, const model_spec& m,
                       const collection_spec& coll, const penalty_rule& pen) {
    const double lam = lambda_n(pen, obs.n);
    double captured = obs.coeffs.alpha00 * obs.coeffs.alpha00;
    if (m.kind == model_kind::sieve) {
        for (int j = 0; j < m.level; ++j) captured += level_energy(obs.coeffs, j);
    } else {
        for (const auto& [j, k] : m.indices) {
            const double v = obs.coeffs.at(j, k);
            captured += v * v;
        }
    }
    const std::int64_t charged = penalized_dim(m, coll, pen);
    return -captured + lam * static_cast<double>(charged) / static_cast<double>(obs.n);
}

std::int64_t penalized_dim(const model_spec& m, const collection_spec& coll,
                           const penalty_rule& pen) {
    const bool budgeted =
        coll.kind == collection_kind::hybrid || coll.kind == collection_kind::hybrid_trunc;
    if (pen.over_penalize && budgeted && m.kind == model_kind::hybrid)
        return dim_DJ_untruncated(m.level, coll.theta);
    return m.dim;
}

model_spec brute_force_select(const observation& obs, const collection_spec& coll,
                              const penalty_rule& pen, std::int64_t max_models) {
    require_extent(obs, coll);
    const auto models = enumerate_models(coll, max_models);
    const model_spec* best = nullptr;
    candidate best_cand;
    for (const auto& m : models) {
        const candidate cand{model_criterion(obs, m, coll, pen), m.dim, m.level, &m.indices};
        if (!best || cand.better_than(best_cand)) {
            best = &m;
            best_cand = cand;
        }
    }
    return *best;
}

// ---------------------------------------------------------------------------
// Projection
// ---------------------------------------------------------------------------

wavelet_coeffs project(const wavelet_coeffs& c, const model_spec& m) {
    wavelet_coeffs out = wavelet_coeffs::zeros(c.depth());
    out.alpha00 = c.alpha00; // every model spans phi00
    if (m.kind == model_kind::sieve) {
        if (m.level > c.depth())
            raise(errc::shape_mismatch, "model level " + std::to_string(m.level) +
                                            " exceeds stored depth " + std::to_string(c.depth()));
        for (int j = 0; j < m.level; ++j) out.levels[static_cast<std::size_t>(j)] = c.levels[static_cast<std::size_t>(j)];
        return out;
    }
    for (const auto& [j, k] : m.indices) {
        if (j < 0 || j >= c.depth() || k < 0 || k >= (1 << j))
            raise(errc::shape_mismatch, "model index (" + std::to_string(j) + ", " +
                                            std::to_string(k) + ") outside stored depth " +
                                            std::to_string(c.depth()));
        out.at(j, k) = c.at(j, k);
    }
    return out;
}

risk_decomp risk_decomposition(const wavelet_coeffs& s, const model_spec& m) {
    if (m.kind == model_kind::sieve && m.level > s.depth())
        raise(errc::shape_mismatch, "model level exceeds stored depth");
    double bias = 0.0;
    for (int j = 0; j < s.depth(); ++j) {
        const auto& lvl = s.levels[static_cast<std::size_t>(j)];
        if (m.kind == model_kind::sieve) {
            if (j >= m.level)
                for (double v : lvl) bias += v * v;
            continue;
        }
        for (std::size_t k = 0; k < lvl.size(); ++k)
            if (!m.contains(j, static_cast<int>(k))) bias += lvl[k] * lvl[k];
    }
    if (m.kind != model_kind::sieve) {
        for (const auto& [j, k] : m.indices)
            if (j < 0 || j >= s.depth() || k < 0 || k >= (1 << j))
                raise(errc::shape_mismatch, "model index outside stored depth");
    }
    return {bias, m.dim};
}

} // namespace maxiset
