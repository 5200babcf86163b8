#include "maxiset/spaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "maxiset/errors.hpp"
#include "maxiset/gwn.hpp"

namespace maxiset {

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

const char* to_string(verdict v) {
    switch (v) {
        case verdict::bounded: return "bounded";
        case verdict::diverging: return "diverging";
        case verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

series_verdict classify_series(const std::vector<double>& values, double growth_factor,
                               double band_factor) {
    series_verdict out;
    for (double v : values) out.value = std::max(out.value, v);
    if (values.size() < 2) {
        out.v = verdict::inconclusive;
        return out;
    }
    const std::size_t mid = values.size() / 2;
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < mid; ++i) s1 = std::max(s1, values[i]);
    for (std::size_t i = mid; i < values.size(); ++i) s2 = std::max(s2, values[i]);
    out.growth_ratio = s1 > 0.0 ? s2 / s1
                       : s2 > 0.0 ? std::numeric_limits<double>::infinity()
                                  : 1.0;
    if (out.growth_ratio >= growth_factor) {
        out.v = verdict::diverging;
        return out;
    }
    // bounded: no net growth, or the top half sits in a narrow band, or the
    // series has fallen back below the first-half peak
    bool bounded = out.growth_ratio <= 1.0;
    if (!bounded) {
        double bmax = 0.0, bmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = mid; i < values.size(); ++i) {
            bmax = std::max(bmax, values[i]);
            bmin = std::min(bmin, values[i]);
        }
        if (bmin > 0.0 && bmax / bmin <= band_factor) bounded = true;
    }
    if (!bounded && values.back() <= s1) bounded = true;
    out.v = bounded ? verdict::bounded : verdict::inconclusive;
    return out;
}

// ---------------------------------------------------------------------------
// Deterministic approximation functionals
// ---------------------------------------------------------------------------

double Q_functional(const wavelet_coeffs& s, const collection_spec& coll,
                    const penalty_rule& pen, std::int64_t n) {
    observation obs{s, n, 0};
    const model_spec m = select_model(obs, coll, pen);
    const risk_decomp rd = risk_decomposition(s, m);
    const double lam = lambda_n(pen, n);
    return rd.bias_sq +
           lam * static_cast<double>(penalized_dim(m, coll, pen)) / static_cast<double>(n);
}

sup_series besov_series(const wavelet_coeffs& s, double alpha, double p) {
    if (!(alpha > 0.0)) raise(errc::invalid_argument, "alpha must be positive");
    if (!(p >= 1.0)) raise(errc::invalid_argument, "p must be >= 1");
    validate(s);
    sup_series out;
    out.values.reserve(static_cast<std::size_t>(s.depth()));
    for (int j = 0; j < s.depth(); ++j) {
        double sum = 0.0;
        for (double v : s.levels[static_cast<std::size_t>(j)]) {
            if (v == 0.0) continue;
            sum += p == 2.0 ? v * v : std::pow(std::fabs(v), p);
        }
        // 2^{j p (alpha + 1/2 - 1/p)} = 2^{j (p(alpha+1/2) - 1)}
        const double w = std::exp2(static_cast<double>(j) * (p * (alpha + 0.5) - 1.0));
        out.values.push_back(w * sum);
        out.sup = std::max(out.sup, out.values.back());
    }
    return out;
}

sup_series besov2_tail_series(const wavelet_coeffs& s, double alpha) {
    if (!(alpha > 0.0)) raise(errc::invalid_argument, "alpha must be positive");
    validate(s);
    const int depth = s.depth();
    std::vector<double> suffix(static_cast<std::size_t>(depth) + 1, 0.0);
    for (int j = depth - 1; j >= 0; --j) {
        double e = 0.0;
        for (double v : s.levels[static_cast<std::size_t>(j)]) e += v * v;
        suffix[static_cast<std::size_t>(j)] = suffix[static_cast<std::size_t>(j) + 1] + e;
    }
    const double expo = 2.0 * alpha / (1.0 + 2.0 * alpha);
    sup_series out;
    out.values.reserve(static_cast<std::size_t>(depth) + 1);
    for (int J = 0; J <= depth; ++J) {
        out.values.push_back(std::exp2(expo * J) * suffix[static_cast<std::size_t>(J)]);
        out.sup = std::max(out.sup, out.values.back());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Weak functionals
// ---------------------------------------------------------------------------

namespace {

// All three weak functionals from one descending magnitude rearrangement.
// The sups over the threshold u are exact: both step maps attain their sup in
// the limit at the distinct magnitudes, giving the discrete maxima below.
weak_besov_values weak_from_sorted(const std::vector<double>& r, double q) {
    weak_besov_values w;
    const double inv_q = 1.0 / q;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] == 0.0) break; // descending: nothing but zeros follow
        const double n1 = static_cast<double>(i + 1);
        w.rearr = std::max(w.rearr, std::pow(n1, inv_q) * r[i]);
        // u^q #{|beta| > u} -> v^q #{|beta| >= v} as u -> v^-
        if (i + 1 == r.size() || r[i + 1] != r[i])
            w.count = std::max(w.count, n1 * std::pow(r[i], q));
    }
    // u^{q-2} sum_{|beta| <= u} beta^2, evaluated at each distinct magnitude
    double cum = 0.0;
    for (std::size_t t = r.size(); t-- > 0;) {
        cum += r[t] * r[t];
        const bool boundary = t == 0 || r[t - 1] != r[t];
        if (boundary && r[t] > 0.0)
            w.below = std::max(w.below, std::pow(r[t], q - 2.0) * cum);
    }
    return w;
}

void check_q(double q) {
    if (!(q > 0.0 && q < 2.0))
        raise(errc::invalid_argument, "q must lie in (0, 2), got " + std::to_string(q));
}

} // namespace

weak_besov_values weak_besov_functionals(const wavelet_coeffs& s, double q) {
    check_q(q);
    validate(s);
    return weak_from_sorted(rearrange_global(s), q);
}

weak_besov_series weak_besov_depth_series(const wavelet_coeffs& s, double q) {
    check_q(q);
    validate(s);
    weak_besov_series out;
    std::vector<double> acc; // descending rearrangement of levels < J
    std::vector<double> merged;
    for (int J = 0; J <= s.depth(); ++J) {
        if (J > 0) {
            const auto& lvl = s.levels[static_cast<std::size_t>(J - 1)];
            std::vector<double> mags(lvl.size());
            std::transform(lvl.begin(), lvl.end(), mags.begin(),
                           [](double v) { return std::fabs(v); });
            std::sort(mags.begin(), mags.end(), std::greater<double>());
            merged.resize(acc.size() + mags.size());
            std::merge(acc.begin(), acc.end(), mags.begin(), mags.end(), merged.begin(),
                       std::greater<double>());
            acc.swap(merged);
        }
        const weak_besov_values w = weak_from_sorted(acc, q);
        out.rearr.values.push_back(w.rearr);
        out.below.values.push_back(w.below);
        out.count.values.push_back(w.count);
        out.rearr.sup = std::max(out.rearr.sup, w.rearr);
        out.below.sup = std::max(out.below.sup, w.below);
        out.count.sup = std::max(out.count.sup, w.count);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Budgeted residual series
// ---------------------------------------------------------------------------

namespace {

// Per level: prefix sums of the descending sorted squares; pre[j][i] is the
// energy of the i largest magnitudes of level j.
std::vector<std::vector<double>> sorted_square_prefixes(const wavelet_coeffs& s) {
    std::vector<std::vector<double>> pre(static_cast<std::size_t>(s.depth()));
    for (int j = 0; j < s.depth(); ++j) {
        const auto& lvl = s.levels[static_cast<std::size_t>(j)];
        std::vector<double> mags(lvl.size());
        std::transform(lvl.begin(), lvl.end(), mags.begin(),
                       [](double v) { return std::fabs(v); });
        std::sort(mags.begin(), mags.end(), std::greater<double>());
        auto& p = pre[static_cast<std::size_t>(j)];
        p.assign(mags.size() + 1, 0.0);
        for (std::size_t i = 0; i < mags.size(); ++i) p[i + 1] = p[i] + mags[i] * mags[i];
    }
    return pre;
}

// E_J: energy past the per-level budgets, summed over levels J..depth-1.
double budget_residual(const std::vector<std::vector<double>>& pre, int J, double theta) {
    double e = 0.0;
    for (int j = J; j < static_cast<int>(pre.size()); ++j) {
        const auto& p = pre[static_cast<std::size_t>(j)];
        const auto b = static_cast<std::size_t>(hybrid_budget(J, j, theta));
        e += p.back() - p[std::min(b, p.size() - 1)];
    }
    return e;
}

} // namespace

sup_series hybrid_A_series(const wavelet_coeffs& s, double alpha, double theta) {
    if (!(alpha > 0.0)) raise(errc::invalid_argument, "alpha must be positive");
    if (!(theta > 2.0)) raise(errc::invalid_argument, "theta must exceed 2");
    validate(s);
    const auto pre = sorted_square_prefixes(s);
    sup_series out;
    out.values.reserve(static_cast<std::size_t>(s.depth()));
    for (int J = 0; J < s.depth(); ++J) {
        out.values.push_back(std::exp2(2.0 * alpha * J) * budget_residual(pre, J, theta));
        out.sup = std::max(out.sup, out.values.back());
    }
    return out;
}

budget_series nonlinear_A_series(const wavelet_coeffs& s, const collection_spec& coll,
                                 double alpha, std::int64_t M_max) {
    if (!(alpha > 0.0)) raise(errc::invalid_argument, "alpha must be positive");
    if (M_max < 1) raise(errc::invalid_argument, "M_max must be >= 1");
    validate(coll);
    validate(s);
    budget_series out;
    const double two_alpha = 2.0 * alpha;

    switch (coll.kind) {
        case collection_kind::full: {
            // best M-term capture is the M globally largest magnitudes
            const auto r = rearrange_global(s);
            std::vector<double> tail(r.size() + 1, 0.0);
            for (std::size_t i = r.size(); i-- > 0;) tail[i] = tail[i + 1] + r[i] * r[i];
            out.m_first = 1;
            for (std::int64_t M = 1; M <= M_max; ++M) {
                const auto idx = std::min(static_cast<std::size_t>(M), r.size());
                out.values.push_back(std::pow(static_cast<double>(M), two_alpha) * tail[idx]);
            }
            break;
        }
        case collection_kind::sieve_trunc: {
            // suffix[N] = tail energy past level N, precomputed once so the M
            // loop stays linear
            std::vector<double> suffix(static_cast<std::size_t>(s.depth()) + 1, 0.0);
            for (int j = s.depth() - 1; j >= 0; --j) {
                double e = 0.0;
                for (double v : s.levels[static_cast<std::size_t>(j)]) e += v * v;
                suffix[static_cast<std::size_t>(j)] = suffix[static_cast<std::size_t>(j) + 1] + e;
            }
            out.m_first = 1;
            for (std::int64_t M = 1; M <= M_max; ++M) {
                const int N = std::min(
                    static_cast<int>(std::bit_width(static_cast<std::uint64_t>(M))) - 1,
                    s.depth());
                out.values.push_back(std::pow(static_cast<double>(M), two_alpha) *
                                     suffix[static_cast<std::size_t>(N)]);
            }
            break;
        }
        case collection_kind::hybrid:
        case collection_kind::hybrid_trunc: {
            // the approximation family is the untruncated one: budgets at every
            // level of s, dimensions accumulated until the budgets vanish
            const auto pre = sorted_square_prefixes(s);
            std::vector<std::int64_t> dims;   // dims[J] = untruncated D_J
            std::vector<double> residuals;    // E_J over the stored levels
            for (int J = 0;; ++J) {
                const std::int64_t d = dim_DJ_untruncated(J, coll.theta);
                if (d > M_max && J > 0) break;
                dims.push_back(d);
                residuals.push_back(budget_residual(pre, std::min(J, s.depth()), coll.theta));
                if (d > M_max) break;
            }
            out.m_first = dims.front();
            if (M_max < out.m_first)
                raise(errc::invalid_argument,
                      "M_max = " + std::to_string(M_max) + " below the smallest model dimension " +
                          std::to_string(out.m_first));
            std::size_t J = 0;
            for (std::int64_t M = out.m_first; M <= M_max; ++M) {
                while (J + 1 < dims.size() && dims[J + 1] <= M) ++J;
                out.values.push_back(std::pow(static_cast<double>(M), two_alpha) * residuals[J]);
            }
            break;
        }
    }
    for (double v : out.values) out.sup = std::max(out.sup, v);
    return out;
}

sup_series linear_L_series(const wavelet_coeffs& s, const penalty_rule& pen, double alpha,
                           const std::vector<std::int64_t>& n_grid) {
    validate(s);
    sup_series out;
    out.values.reserve(n_grid.size());
    for (std::int64_t n : n_grid) {
        const int j0 = j0_of(n, pen);
        if (j0 >= s.depth())
            raise(errc::insufficient_depth,
                  "truncation level " + std::to_string(j0) + " at n = " + std::to_string(n) +
                      " reaches past the stored depth " + std::to_string(s.depth()));
        const double rho = rate_rho(pen, n, alpha);
        out.values.push_back(std::sqrt(tail_energy(s, j0)) / rho);
        out.sup = std::max(out.sup, out.values.back());
    }
    return out;
}

double rate_rho(const penalty_rule& pen, std::int64_t n, double alpha) {
    if (!(alpha > 0.0)) raise(errc::invalid_argument, "alpha must be positive");
    const double lam = lambda_n(pen, n);
    const double nd = static_cast<double>(n);
    if (lam >= nd)
        raise(errc::degenerate_rate, "lambda_n = " + std::to_string(lam) +
                                         " >= n = " + std::to_string(n) +
                                         ": the target rate degenerates");
    return std::pow(lam / nd, alpha / (1.0 + 2.0 * alpha));
}

penalty_constants sufficient_penalty_constants(double delta, double p, double alpha0) {
    if (!(delta > 0.0 && delta <= 0.5))
        raise(errc::invalid_argument, "delta must lie in (0, 1/2]");
    if (!(p > 0.0 && p < 1.0)) raise(errc::invalid_argument, "p must lie in (0, 1)");
    if (!(alpha0 > 0.0)) raise(errc::invalid_argument, "alpha0 must be positive");
    penalty_constants out;
    out.g = std::pow(1.0 - delta, 2.0 * alpha0 / (2.0 * alpha0 + 1.0)) - 1.0 + delta;
    out.upsilon = 8.0 / (p * out.g) * (16.0 / out.g + 1.0);
    return out;
}

} // namespace maxiset
