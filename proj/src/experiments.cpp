#include "maxiset/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "maxiset/errors.hpp"
#include "maxiset/signals.hpp"

namespace maxiset {

// ---------------------------------------------------------------------------
// Families and grids
// ---------------------------------------------------------------------------

collection_spec collection_family::at(std::int64_t n, const penalty_rule& pen) const {
    const int j0 = j0_of(n, pen);
    switch (kind) {
        case collection_kind::sieve_trunc:
            return collection_spec::sieve(j0);
        case collection_kind::full:
            return collection_spec::full(j0);
        case collection_kind::hybrid:
            return collection_spec::hybrid(theta, j_trunc);
        case collection_kind::hybrid_trunc:
            // the budget scan stops at the admissible resolution, never past
            // the family's level bound
            return collection_spec::hybrid_trunc(theta, std::min(j0, j_trunc), j_trunc);
    }
    raise(errc::invalid_argument, "unknown collection kind");
}

std::vector<std::int64_t> dyadic_grid(int lo, int hi) {
    if (lo < 0 || hi < lo || hi > 62)
        raise(errc::invalid_argument, "dyadic grid bounds must satisfy 0 <= lo <= hi <= 62");
    std::vector<std::int64_t> grid;
    grid.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int k = lo; k <= hi; ++k) grid.push_back(std::int64_t{1} << k);
    return grid;
}

// ---------------------------------------------------------------------------
// Log-log fit
// ---------------------------------------------------------------------------

void fit_loglog(rate_report& report) {
    const std::size_t m = report.series.size();
    if (m < 2) raise(errc::invalid_argument, "log-log fit needs at least 2 points");
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& p = report.series[i];
        if (!(p.value > 0.0))
            raise(errc::invalid_argument, "log-log fit needs positive values, got " +
                                              std::to_string(p.value) + " at n = " +
                                              std::to_string(p.n));
        x[i] = std::log(p.lambda / static_cast<double>(p.n));
        y[i] = std::log(p.value);
    }
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= static_cast<double>(m);
    ybar /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
        syy += (y[i] - ybar) * (y[i] - ybar);
    }
    if (!(sxx > 0.0)) raise(errc::invalid_argument, "log-log fit needs a nonconstant grid");
    report.slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = y[i] - ybar - report.slope * (x[i] - xbar);
        rss += r * r;
    }
    report.slope_stderr =
        m > 2 ? std::sqrt(rss / static_cast<double>(m - 2) / sxx) : 0.0;
    report.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
}

// ---------------------------------------------------------------------------
// Monte Carlo risk
// ---------------------------------------------------------------------------

namespace {

wavelet_coeffs truncate_levels(const wavelet_coeffs& s, int depth) {
    wavelet_coeffs t = wavelet_coeffs::zeros(depth);
    t.alpha00 = s.alpha00;
    for (int j = 0; j < depth; ++j) t.levels[static_cast<std::size_t>(j)] = s.levels[static_cast<std::size_t>(j)];
    return t;
}

double detail_energy(const wavelet_coeffs& s) {
    double e = 0.0;
    for (const auto& lvl : s.levels)
        for (double v : lvl) e += v * v;
    return e;
}

// Squared loss of the selected projection against the full signal s.  Both
// projection and selection only touch levels below the collection extent, so
// the excluded energy splits into (within-extent part) + (tail past extent),
// folded together in `excluded = detail_total - captured`.
double one_rep_loss(const wavelet_coeffs& s_trunc, double detail_total,
                    const collection_spec& coll, const penalty_rule& pen, std::int64_t n,
                    std::uint64_t seed, std::uint64_t rep) {
    const observation obs = observe(s_trunc, n, seed, rep);
    const model_spec m = select_model(obs, coll, pen);
    const double da = obs.coeffs.alpha00 - s_trunc.alpha00;
    double loss = da * da;
    double captured = 0.0;
    if (m.kind == model_kind::sieve) {
        for (int j = 0; j < m.level; ++j) {
            const auto& sl = s_trunc.levels[static_cast<std::size_t>(j)];
            const auto& ol = obs.coeffs.levels[static_cast<std::size_t>(j)];
            for (std::size_t k = 0; k < sl.size(); ++k) {
                const double d = ol[k] - sl[k];
                loss += d * d;
                captured += sl[k] * sl[k];
            }
        }
    } else {
        for (const auto& [j, k] : m.indices) {
            const double sv = s_trunc.at(j, k);
            const double d = obs.coeffs.at(j, k) - sv;
            loss += d * d;
            captured += sv * sv;
        }
    }
    return loss + std::max(detail_total - captured, 0.0);
}

} // namespace

mc_stat mc_risk(const wavelet_coeffs& s, const collection_spec& coll,
                const penalty_rule& pen, std::int64_t n, std::int64_t reps,
                std::uint64_t seed, int jobs) {
    if (reps < 1) raise(errc::invalid_argument, "reps must be >= 1");
    validate(coll);
    validate(s);
    const int extent = level_extent(coll);
    if (extent > s.depth())
        raise(errc::shape_mismatch, "collection reaches level " + std::to_string(extent) +
                                        " but the signal stores depth " +
                                        std::to_string(s.depth()));
    const wavelet_coeffs s_trunc = truncate_levels(s, extent);
    const double detail_total = detail_energy(s);

    const int workers =
        static_cast<int>(std::min<std::int64_t>(std::max(jobs, 1), reps));
    std::vector<double> losses(static_cast<std::size_t>(reps), 0.0);
    if (workers == 1) {
        for (std::int64_t rep = 0; rep < reps; ++rep)
            losses[static_cast<std::size_t>(rep)] =
                one_rep_loss(s_trunc, detail_total, coll, pen, n, seed,
                             static_cast<std::uint64_t>(rep));
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::int64_t rep = w; rep < reps; rep += workers)
                        losses[static_cast<std::size_t>(rep)] =
                            one_rep_loss(s_trunc, detail_total, coll, pen, n, seed,
                                         static_cast<std::uint64_t>(rep));
                } catch (...) {
                    errs[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errs)
            if (e) std::rethrow_exception(e);
    }

    // fixed-order reduction: the mean is identical for every `jobs`
    mc_stat out;
    for (double l : losses) out.mean += l;
    out.mean /= static_cast<double>(reps);
    if (reps > 1) {
        double ss = 0.0;
        for (double l : losses) ss += (l - out.mean) * (l - out.mean);
        out.stderr_ = std::sqrt(ss / static_cast<double>(reps - 1) /
                                static_cast<double>(reps));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

rate_report q_curve(const wavelet_coeffs& s, const collection_family& fam,
                    const penalty_rule& pen, const std::vector<std::int64_t>& n_grid) {
    if (n_grid.empty()) raise(errc::invalid_argument, "empty n grid");
    rate_report report;
    for (std::int64_t n : n_grid) {
        const collection_spec coll = fam.at(n, pen);
        report.series.push_back(
            {n, lambda_n(pen, n), Q_functional(s, coll, pen, n), 0.0});
    }
    fit_loglog(report);
    return report;
}

rate_report risk_curve(const wavelet_coeffs& s, const collection_family& fam,
                       const penalty_rule& pen, const std::vector<std::int64_t>& n_grid,
                       std::int64_t reps, std::uint64_t seed, int jobs) {
    if (n_grid.empty()) raise(errc::invalid_argument, "empty n grid");
    rate_report report;
    for (std::int64_t n : n_grid) {
        const collection_spec coll = fam.at(n, pen);
        const mc_stat stat = mc_risk(s, coll, pen, n, reps, seed, jobs);
        report.series.push_back({n, lambda_n(pen, n), stat.mean, stat.stderr_});
    }
    fit_loglog(report);
    return report;
}

equivalence_result equivalence_check(const wavelet_coeffs& s, const collection_family& fam,
                                     const penalty_rule& pen,
                                     const std::vector<std::int64_t>& n_grid, double alpha,
                                     std::int64_t reps, std::uint64_t seed, int jobs) {
    equivalence_result out;
    out.q_normalized = q_curve(s, fam, pen, n_grid);
    out.risk_normalized = risk_curve(s, fam, pen, n_grid, reps, seed, jobs);
    for (auto& p : out.q_normalized.series) {
        const double rho = rate_rho(pen, p.n, alpha);
        p.value /= rho * rho;
    }
    for (auto& p : out.risk_normalized.series) {
        const double rho = rate_rho(pen, p.n, alpha);
        p.value /= rho * rho;
        p.stderr_ /= rho * rho;
    }
    fit_loglog(out.q_normalized);
    fit_loglog(out.risk_normalized);
    std::vector<double> qv, rv;
    for (const auto& p : out.q_normalized.series) qv.push_back(p.value);
    for (const auto& p : out.risk_normalized.series) rv.push_back(p.value);
    out.q_verdict = classify_series(qv);
    out.risk_verdict = classify_series(rv);
    out.consistent = out.q_verdict.v == out.risk_verdict.v &&
                     out.q_verdict.v != verdict::inconclusive;
    return out;
}

oracle_result oracle_check(const wavelet_coeffs& s, const collection_family& fam,
                           const penalty_rule& pen, const std::vector<std::int64_t>& n_grid,
                           std::int64_t reps, std::uint64_t seed, int jobs) {
    if (n_grid.empty()) raise(errc::invalid_argument, "empty n grid");
    oracle_result out;
    for (std::int64_t n : n_grid) {
        const collection_spec coll = fam.at(n, pen);
        oracle_row row;
        row.n = n;
        row.lambda = lambda_n(pen, n);
        const mc_stat stat = mc_risk(s, coll, pen, n, reps, seed, jobs);
        row.risk = stat.mean;
        row.risk_stderr = stat.stderr_;
        row.q = Q_functional(s, coll, pen, n);
        row.kraft = kraft_sum(coll, n, pen);
        const double denom = row.q + (1.0 + row.kraft) / static_cast<double>(n);
        row.ratio = row.risk / denom;
        out.max_ratio = std::max(out.max_ratio, row.ratio);
        out.rows.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Membership matrix
// ---------------------------------------------------------------------------

namespace {

series_verdict classify_first(const std::vector<double>& v, std::size_t count) {
    const std::size_t take = std::min(count, v.size());
    return classify_series(std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(take)));
}

embedding_cell membership_cell(const wavelet_coeffs& s, double alpha, double theta,
                               int j_max) {
    const double q = 2.0 / (1.0 + 2.0 * alpha);
    const auto scan = static_cast<std::size_t>(j_max) + 1;
    embedding_cell cell;
    cell.besov2_tail = classify_first(besov2_tail_series(s, alpha).values, scan);
    const weak_besov_series wk = weak_besov_depth_series(s, q);
    cell.weak_rearr = classify_first(wk.rearr.values, scan);
    cell.weak_below = classify_first(wk.below.values, scan);
    cell.weak_count = classify_first(wk.count.values, scan);
    cell.hybrid_A = classify_first(hybrid_A_series(s, alpha, theta).values, scan);
    const std::int64_t M_max = std::int64_t{1} << j_max;
    cell.nonlinear_A_sieve = classify_series(
        nonlinear_A_series(s, collection_spec::sieve(0), alpha, M_max).values);
    cell.nonlinear_A_full = classify_series(
        nonlinear_A_series(s, collection_spec::full(0), alpha, M_max).values);
    cell.nonlinear_A_hybrid = classify_series(
        nonlinear_A_series(s, collection_spec::hybrid(theta, 0), alpha, M_max).values);
    return cell;
}

} // namespace

embedding_report_result embedding_report(double alpha, double theta, int j_max) {
    if (!(alpha > 0.0)) raise(errc::invalid_argument, "alpha must be positive");
    if (!(theta > 2.0)) raise(errc::invalid_argument, "theta must exceed 2");
    if (j_max < 2 || j_max > 22)
        raise(errc::invalid_argument, "j_max must lie in [2, 22]");
    embedding_report_result out;
    out.alpha = alpha;
    out.theta = theta;
    out.j_max = j_max;
    out.witness_depth = std::min(j_max + 6, 22);
    out.rows.emplace("s0", membership_cell(s0(out.witness_depth), alpha, theta, j_max));
    out.rows.emplace("s1",
                     membership_cell(s1(alpha, out.witness_depth), alpha, theta, j_max));
    out.rows.emplace(
        "besov_extremal",
        membership_cell(besov_extremal(alpha, out.witness_depth), alpha, theta, j_max));
    return out;
}

} // namespace maxiset
