#include "maxiset.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "maxiset/collections.hpp"
#include "maxiset/errors.hpp"
#include "maxiset/experiments.hpp"
#include "maxiset/gwn.hpp"
#include "maxiset/haar.hpp"
#include "maxiset/signals.hpp"
#include "maxiset/spaces.hpp"

using njson = nlohmann::ordered_json;

struct mxs_coeffs {
    maxiset::wavelet_coeffs v;
};

namespace {

thread_local std::string g_last_error;

mxs_status map_code(maxiset::errc c) {
    switch (c) {
        case maxiset::errc::ok: return MXS_OK;
        case maxiset::errc::invalid_argument: return MXS_ERR_INVALID_ARGUMENT;
        case maxiset::errc::shape_mismatch: return MXS_ERR_SHAPE_MISMATCH;
        case maxiset::errc::level_out_of_range: return MXS_ERR_LEVEL_OUT_OF_RANGE;
        case maxiset::errc::penalty_too_small: return MXS_ERR_PENALTY_TOO_SMALL;
        case maxiset::errc::degenerate_penalty: return MXS_ERR_DEGENERATE_PENALTY;
        case maxiset::errc::degenerate_rate: return MXS_ERR_DEGENERATE_RATE;
        case maxiset::errc::noise_too_large: return MXS_ERR_NOISE_TOO_LARGE;
        case maxiset::errc::collection_too_large: return MXS_ERR_COLLECTION_TOO_LARGE;
        case maxiset::errc::insufficient_depth: return MXS_ERR_INSUFFICIENT_DEPTH;
        case maxiset::errc::io_error: return MXS_ERR_IO;
        case maxiset::errc::parse_error: return MXS_ERR_PARSE;
    }
    return MXS_ERR_UNKNOWN;
}

template <typename F>
mxs_status guarded(F&& f) noexcept {
    try {
        f();
        g_last_error.clear();
        return MXS_OK;
    } catch (const maxiset::error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MXS_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown failure";
        return MXS_ERR_UNKNOWN;
    }
}

void require(const void* p, const char* name) {
    if (!p) maxiset::raise(maxiset::errc::invalid_argument, std::string(name) + " is null");
}

// The C++ accessor is deliberately unchecked (selection hot path); the C
// boundary validates indices itself so callers get a status, not UB.
void check_index(const maxiset::wavelet_coeffs& v, int j, int k) {
    if (j < 0 || j >= v.depth() || k < 0 || k >= (1 << j))
        maxiset::raise(maxiset::errc::level_out_of_range,
                       "(" + std::to_string(j) + ", " + std::to_string(k) +
                           ") outside an array of depth " + std::to_string(v.depth()));
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) maxiset::raise(maxiset::errc::io_error, "allocation failure");
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

maxiset::penalty_rule to_penalty(const mxs_penalty* pen) {
    require(pen, "pen");
    if (pen->kind != MXS_PENALTY_CONSTANT && pen->kind != MXS_PENALTY_LOGN)
        maxiset::raise(maxiset::errc::invalid_argument,
                       "unknown penalty kind " + std::to_string(pen->kind));
    maxiset::penalty_rule r;
    r.kind = pen->kind == MXS_PENALTY_LOGN ? maxiset::penalty_kind::log_n
                                           : maxiset::penalty_kind::constant;
    r.lambda0 = pen->lambda0;
    r.over_penalize = pen->over_penalize != 0;
    return r;
}

maxiset::collection_spec to_collection(const mxs_collection* coll) {
    require(coll, "coll");
    maxiset::collection_spec c;
    switch (coll->kind) {
        case MXS_COLLECTION_SIEVE: c.kind = maxiset::collection_kind::sieve_trunc; break;
        case MXS_COLLECTION_FULL: c.kind = maxiset::collection_kind::full; break;
        case MXS_COLLECTION_HYBRID: c.kind = maxiset::collection_kind::hybrid; break;
        case MXS_COLLECTION_HYBRID_TRUNC:
            c.kind = maxiset::collection_kind::hybrid_trunc;
            break;
        default:
            maxiset::raise(maxiset::errc::invalid_argument,
                           "unknown collection kind " + std::to_string(coll->kind));
    }
    c.j0 = coll->j0;
    c.theta = coll->theta;
    c.j_trunc = coll->j_trunc;
    maxiset::validate(c);
    return c;
}

maxiset::collection_family to_family(const mxs_collection* coll) {
    require(coll, "coll");
    maxiset::collection_family f;
    switch (coll->kind) {
        case MXS_COLLECTION_SIEVE: return maxiset::collection_family::sieve();
        case MXS_COLLECTION_FULL: return maxiset::collection_family::full();
        case MXS_COLLECTION_HYBRID:
        case MXS_COLLECTION_HYBRID_TRUNC:
            return maxiset::collection_family::hybrid(coll->theta, coll->j_trunc);
    }
    maxiset::raise(maxiset::errc::invalid_argument,
                   "unknown collection kind " + std::to_string(coll->kind));
}

std::vector<std::int64_t> to_grid(const int64_t* n_grid, size_t grid_len) {
    require(n_grid, "n_grid");
    if (grid_len == 0)
        maxiset::raise(maxiset::errc::invalid_argument, "empty n grid");
    return {n_grid, n_grid + grid_len};
}

njson model_to_json(const maxiset::model_spec& m) {
    njson out;
    switch (m.kind) {
        case maxiset::model_kind::sieve:
            out["variant"] = "sieve";
            out["N"] = m.level;
            break;
        case maxiset::model_kind::subset:
            out["variant"] = "subset";
            break;
        case maxiset::model_kind::hybrid:
            out["variant"] = "hybrid";
            out["J"] = m.level;
            break;
    }
    njson idx = njson::array();
    for (const auto& [j, k] : m.indices) idx.push_back(njson::array({j, k}));
    out["indices"] = std::move(idx);
    out["dim"] = m.dim;
    return out;
}

njson report_to_json(const maxiset::rate_report& r) {
    njson rows = njson::array();
    for (const auto& p : r.series) {
        rows.push_back(njson{{"n", p.n},
                             {"lambda_n", p.lambda},
                             {"value", p.value},
                             {"stderr", p.stderr_}});
    }
    return njson{{"series", std::move(rows)},
                 {"slope", r.slope},
                 {"slope_stderr", r.slope_stderr},
                 {"r_squared", r.r_squared}};
}

njson verdict_to_json(const maxiset::series_verdict& v) {
    return njson{{"value", v.value},
                 {"growth_ratio", v.growth_ratio},
                 {"verdict", maxiset::to_string(v.v)}};
}

njson sup_series_to_json(const maxiset::sup_series& s) {
    const maxiset::series_verdict v = maxiset::classify_series(s.values);
    njson out = verdict_to_json(v);
    out["series"] = s.values;
    return out;
}

// Budget series can hold tens of thousands of points; the report keeps the
// dyadic subsample (plus the final point) while the verdict uses every point.
njson budget_series_to_json(const maxiset::budget_series& s) {
    const maxiset::series_verdict v = maxiset::classify_series(s.values);
    njson out = verdict_to_json(v);
    out["m_first"] = s.m_first;
    njson sub = njson::array();
    const auto size = static_cast<std::int64_t>(s.values.size());
    const auto push = [&](std::int64_t M) {
        sub.push_back(njson::array({M, s.values[static_cast<std::size_t>(M - s.m_first)]}));
    };
    std::int64_t last_pushed = -1;
    for (std::int64_t M = s.m_first; M - s.m_first < size;) {
        push(M);
        last_pushed = M;
        std::int64_t p = 1;
        while (p <= M) p <<= 1; // next power of two strictly above M
        M = p;
    }
    if (size > 0 && last_pushed != s.m_first + size - 1) push(s.m_first + size - 1);
    out["series"] = std::move(sub);
    return out;
}

} // namespace

extern "C" {

const char* mxs_last_error(void) { return g_last_error.c_str(); }

const char* mxs_version(void) { return "0.1.0"; }

void mxs_string_free(char* s) { std::free(s); }
void mxs_buffer_free(double* p) { std::free(p); }

/* ------------------------------------------------------------------------- */

mxs_status mxs_coeffs_zeros(int depth, mxs_coeffs** out) {
    return guarded([&] {
        require(out, "out");
        auto* c = new mxs_coeffs{maxiset::wavelet_coeffs::zeros(depth)};
        *out = c;
    });
}

mxs_status mxs_coeffs_signal(const char* name, double alpha, int j_max, mxs_coeffs** out) {
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        const std::string id(name);
        maxiset::wavelet_coeffs v;
        if (id == "zero")
            v = maxiset::wavelet_coeffs::zeros(j_max);
        else if (id == "s0")
            v = maxiset::s0(j_max);
        else if (id == "s1")
            v = maxiset::s1(alpha, j_max);
        else if (id == "besov_extremal")
            v = maxiset::besov_extremal(alpha, j_max);
        else
            maxiset::raise(maxiset::errc::invalid_argument,
                           "unknown signal name '" + id +
                               "' (expected zero, s0, s1, or besov_extremal)");
        *out = new mxs_coeffs{std::move(v)};
    });
}

void mxs_coeffs_free(mxs_coeffs* c) { delete c; }

int mxs_coeffs_depth(const mxs_coeffs* c) { return c ? c->v.depth() : -1; }

mxs_status mxs_coeffs_get_alpha00(const mxs_coeffs* c, double* out) {
    return guarded([&] {
        require(c, "c");
        require(out, "out");
        *out = c->v.alpha00;
    });
}

mxs_status mxs_coeffs_set_alpha00(mxs_coeffs* c, double value) {
    return guarded([&] {
        require(c, "c");
        c->v.alpha00 = value;
    });
}

mxs_status mxs_coeffs_get(const mxs_coeffs* c, int j, int k, double* out) {
    return guarded([&] {
        require(c, "c");
        require(out, "out");
        check_index(c->v, j, k);
        *out = c->v.at(j, k);
    });
}

mxs_status mxs_coeffs_set(mxs_coeffs* c, int j, int k, double value) {
    return guarded([&] {
        require(c, "c");
        check_index(c->v, j, k);
        c->v.at(j, k) = value;
    });
}

mxs_status mxs_coeffs_l2_norm_sq(const mxs_coeffs* c, double* out) {
    return guarded([&] {
        require(c, "c");
        require(out, "out");
        *out = maxiset::l2_norm_sq(c->v);
    });
}

mxs_status mxs_coeffs_to_json(const mxs_coeffs* c, char** out_json) {
    return guarded([&] {
        require(c, "c");
        require(out_json, "out_json");
        njson out;
        out["alpha00"] = c->v.alpha00;
        out["levels"] = c->v.levels;
        *out_json = dup_string(out.dump());
    });
}

mxs_status mxs_coeffs_from_json(const char* json, mxs_coeffs** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        const njson doc = njson::parse(json, nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("alpha00") ||
            !doc.contains("levels") || !doc["alpha00"].is_number() ||
            !doc["levels"].is_array())
            maxiset::raise(maxiset::errc::parse_error,
                           "expected {\"alpha00\": number, \"levels\": [[...], ...]}");
        maxiset::wavelet_coeffs v;
        v.alpha00 = doc["alpha00"].get<double>();
        for (const auto& lvl : doc["levels"]) {
            if (!lvl.is_array())
                maxiset::raise(maxiset::errc::parse_error, "levels must be arrays of numbers");
            std::vector<double> row;
            row.reserve(lvl.size());
            for (const auto& x : lvl) {
                if (!x.is_number())
                    maxiset::raise(maxiset::errc::parse_error,
                                   "levels must be arrays of numbers");
                row.push_back(x.get<double>());
            }
            v.levels.push_back(std::move(row));
        }
        maxiset::validate(v); // dyadic level widths
        *out = new mxs_coeffs{std::move(v)};
    });
}

/* ------------------------------------------------------------------------- */

mxs_status mxs_haar_analyze(const double* data, size_t len, mxs_coeffs** out) {
    return guarded([&] {
        require(data, "data");
        require(out, "out");
        const std::vector<double> x(data, data + len);
        *out = new mxs_coeffs{maxiset::analyze(x)};
    });
}

mxs_status mxs_haar_synthesize(const mxs_coeffs* c, double** out_data, size_t* out_len) {
    return guarded([&] {
        require(c, "c");
        require(out_data, "out_data");
        require(out_len, "out_len");
        const std::vector<double> x = maxiset::synthesize(c->v);
        auto* buf = static_cast<double*>(std::malloc(x.size() * sizeof(double)));
        if (!buf) maxiset::raise(maxiset::errc::io_error, "allocation failure");
        std::memcpy(buf, x.data(), x.size() * sizeof(double));
        *out_data = buf;
        *out_len = x.size();
    });
}

/* ------------------------------------------------------------------------- */

mxs_status mxs_lambda_n(const mxs_penalty* pen, int64_t n, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = maxiset::lambda_n(to_penalty(pen), n);
    });
}

mxs_status mxs_j0(const mxs_penalty* pen, int64_t n, int* out) {
    return guarded([&] {
        require(out, "out");
        *out = maxiset::j0_of(n, to_penalty(pen));
    });
}

mxs_status mxs_rate_rho(const mxs_penalty* pen, int64_t n, double alpha, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = maxiset::rate_rho(to_penalty(pen), n, alpha);
    });
}

mxs_status mxs_dim_DJ(int J, double theta, int j_trunc, int64_t* out) {
    return guarded([&] {
        require(out, "out");
        *out = maxiset::dim_DJ(J, theta, j_trunc);
    });
}

mxs_status mxs_dim_DJ_untruncated(int J, double theta, int64_t* out) {
    return guarded([&] {
        require(out, "out");
        *out = maxiset::dim_DJ_untruncated(J, theta);
    });
}

mxs_status mxs_penalty_constants(double delta, double p, double alpha0, double* g,
                                 double* upsilon) {
    return guarded([&] {
        require(g, "g");
        require(upsilon, "upsilon");
        const maxiset::penalty_constants c =
            maxiset::sufficient_penalty_constants(delta, p, alpha0);
        *g = c.g;
        *upsilon = c.upsilon;
    });
}

mxs_status mxs_kraft_sum(const mxs_collection* coll, int64_t n, const mxs_penalty* pen,
                         double* out) {
    return guarded([&] {
        require(out, "out");
        *out = maxiset::kraft_sum(to_collection(coll), n, to_penalty(pen));
    });
}

mxs_status mxs_q_functional(const mxs_coeffs* s, const mxs_collection* coll,
                            const mxs_penalty* pen, int64_t n, double* out) {
    return guarded([&] {
        require(s, "s");
        require(out, "out");
        *out = maxiset::Q_functional(s->v, to_collection(coll), to_penalty(pen), n);
    });
}

/* ------------------------------------------------------------------------- */

mxs_status mxs_observe(const mxs_coeffs* s, int64_t n, uint64_t seed, uint64_t rep,
                       mxs_coeffs** out) {
    return guarded([&] {
        require(s, "s");
        require(out, "out");
        *out = new mxs_coeffs{maxiset::observe(s->v, n, seed, rep).coeffs};
    });
}

mxs_status mxs_select_report(const mxs_coeffs* s, const mxs_collection* coll,
                             const mxs_penalty* pen, int64_t n, uint64_t seed,
                             char** out_json) {
    return guarded([&] {
        require(s, "s");
        require(out_json, "out_json");
        const maxiset::collection_spec c = to_collection(coll);
        const maxiset::penalty_rule p = to_penalty(pen);
        const maxiset::observation obs = maxiset::observe(s->v, n, seed);
        const maxiset::model_spec m = maxiset::select_model(obs, c, p);
        const maxiset::risk_decomp rd = maxiset::risk_decomposition(s->v, m);

        double loss = 0.0;
        {
            const double da = obs.coeffs.alpha00 - s->v.alpha00;
            loss = da * da + rd.bias_sq;
            if (m.kind == maxiset::model_kind::sieve) {
                for (int j = 0; j < m.level; ++j)
                    for (int k = 0; k < (1 << j); ++k) {
                        const double d = obs.coeffs.at(j, k) - s->v.at(j, k);
                        loss += d * d;
                    }
            } else {
                for (const auto& [j, k] : m.indices) {
                    const double d = obs.coeffs.at(j, k) - s->v.at(j, k);
                    loss += d * d;
                }
            }
        }

        njson out;
        out["n"] = n;
        out["lambda_n"] = maxiset::lambda_n(p, n);
        out["seed"] = seed;
        out["model"] = model_to_json(m);
        out["criterion"] = maxiset::model_criterion(obs, m, c, p);
        out["bias_sq"] = rd.bias_sq;
        out["loss"] = loss;
        *out_json = dup_string(out.dump());
    });
}

mxs_status mxs_mc_risk(const mxs_coeffs* s, const mxs_collection* coll,
                       const mxs_penalty* pen, int64_t n, int64_t reps, uint64_t seed,
                       int jobs, double* mean, double* stderr_out) {
    return guarded([&] {
        require(s, "s");
        require(mean, "mean");
        require(stderr_out, "stderr_out");
        const maxiset::mc_stat stat =
            maxiset::mc_risk(s->v, to_collection(coll), to_penalty(pen), n, reps, seed, jobs);
        *mean = stat.mean;
        *stderr_out = stat.stderr_;
    });
}

mxs_status mxs_an_prob(const mxs_collection* coll, int64_t n, const mxs_penalty* pen,
                       int64_t reps, uint64_t seed, double* prob, double* stderr_out) {
    return guarded([&] {
        require(prob, "prob");
        require(stderr_out, "stderr_out");
        const maxiset::an_estimate est =
            maxiset::estimate_An_prob(to_collection(coll), n, to_penalty(pen), reps, seed);
        *prob = est.prob;
        *stderr_out = est.stderr_;
    });
}

/* ------------------------------------------------------------------------- */

mxs_status mxs_q_curve(const mxs_coeffs* s, const mxs_collection* fam,
                       const mxs_penalty* pen, const int64_t* n_grid, size_t grid_len,
                       char** out_json) {
    return guarded([&] {
        require(s, "s");
        require(out_json, "out_json");
        const maxiset::rate_report r =
            maxiset::q_curve(s->v, to_family(fam), to_penalty(pen), to_grid(n_grid, grid_len));
        *out_json = dup_string(report_to_json(r).dump());
    });
}

mxs_status mxs_risk_curve(const mxs_coeffs* s, const mxs_collection* fam,
                          const mxs_penalty* pen, const int64_t* n_grid, size_t grid_len,
                          int64_t reps, uint64_t seed, int jobs, char** out_json) {
    return guarded([&] {
        require(s, "s");
        require(out_json, "out_json");
        const maxiset::rate_report r =
            maxiset::risk_curve(s->v, to_family(fam), to_penalty(pen),
                                to_grid(n_grid, grid_len), reps, seed, jobs);
        *out_json = dup_string(report_to_json(r).dump());
    });
}

mxs_status mxs_equivalence_check(const mxs_coeffs* s, const mxs_collection* fam,
                                 const mxs_penalty* pen, const int64_t* n_grid,
                                 size_t grid_len, double alpha, int64_t reps,
                                 uint64_t seed, int jobs, char** out_json) {
    return guarded([&] {
        require(s, "s");
        require(out_json, "out_json");
        const maxiset::equivalence_result r = maxiset::equivalence_check(
            s->v, to_family(fam), to_penalty(pen), to_grid(n_grid, grid_len), alpha, reps,
            seed, jobs);
        njson out;
        out["alpha"] = alpha;
        out["q_normalized"] = report_to_json(r.q_normalized);
        out["q_normalized"]["classification"] = verdict_to_json(r.q_verdict);
        out["risk_normalized"] = report_to_json(r.risk_normalized);
        out["risk_normalized"]["classification"] = verdict_to_json(r.risk_verdict);
        out["consistent"] = r.consistent;
        *out_json = dup_string(out.dump());
    });
}

mxs_status mxs_oracle_check(const mxs_coeffs* s, const mxs_collection* fam,
                            const mxs_penalty* pen, const int64_t* n_grid,
                            size_t grid_len, int64_t reps, uint64_t seed, int jobs,
                            char** out_json) {
    return guarded([&] {
        require(s, "s");
        require(out_json, "out_json");
        const maxiset::oracle_result r =
            maxiset::oracle_check(s->v, to_family(fam), to_penalty(pen),
                                  to_grid(n_grid, grid_len), reps, seed, jobs);
        njson rows = njson::array();
        for (const auto& row : r.rows) {
            rows.push_back(njson{{"n", row.n},
                                 {"lambda_n", row.lambda},
                                 {"risk", row.risk},
                                 {"risk_stderr", row.risk_stderr},
                                 {"q", row.q},
                                 {"kraft", row.kraft},
                                 {"ratio", row.ratio}});
        }
        njson out;
        out["rows"] = std::move(rows);
        out["max_ratio"] = r.max_ratio;
        *out_json = dup_string(out.dump());
    });
}

mxs_status mxs_spaces_report(const mxs_coeffs* s, double alpha, double theta,
                             const mxs_penalty* pen, const int64_t* n_grid,
                             size_t grid_len, char** out_json) {
    return guarded([&] {
        require(s, "s");
        require(out_json, "out_json");
        const double q = 2.0 / (1.0 + 2.0 * alpha);
        njson fns;
        fns["besov_p2"] = sup_series_to_json(maxiset::besov_series(s->v, alpha, 2.0));
        fns["besov2_tail"] = sup_series_to_json(maxiset::besov2_tail_series(s->v, alpha));
        const maxiset::weak_besov_series wk = maxiset::weak_besov_depth_series(s->v, q);
        fns["weak_rearr"] = sup_series_to_json(wk.rearr);
        fns["weak_below"] = sup_series_to_json(wk.below);
        fns["weak_count"] = sup_series_to_json(wk.count);
        fns["hybrid_A"] = sup_series_to_json(maxiset::hybrid_A_series(s->v, alpha, theta));
        const std::int64_t M_max = std::int64_t{1} << std::min(s->v.depth(), 16);
        fns["nonlinear_A_sieve"] = budget_series_to_json(maxiset::nonlinear_A_series(
            s->v, maxiset::collection_spec::sieve(0), alpha, M_max));
        fns["nonlinear_A_full"] = budget_series_to_json(maxiset::nonlinear_A_series(
            s->v, maxiset::collection_spec::full(0), alpha, M_max));
        fns["nonlinear_A_hybrid"] = budget_series_to_json(maxiset::nonlinear_A_series(
            s->v, maxiset::collection_spec::hybrid(theta, 0), alpha, M_max));
        if (grid_len > 0) {
            fns["linear_L"] = sup_series_to_json(maxiset::linear_L_series(
                s->v, to_penalty(pen), alpha, to_grid(n_grid, grid_len)));
        }
        njson out;
        out["alpha"] = alpha;
        out["theta"] = theta;
        out["q"] = q;
        out["depth"] = s->v.depth();
        out["functionals"] = std::move(fns);
        *out_json = dup_string(out.dump());
    });
}

mxs_status mxs_embedding_report(double alpha, double theta, int j_max, char** out_json) {
    return guarded([&] {
        require(out_json, "out_json");
        const maxiset::embedding_report_result r =
            maxiset::embedding_report(alpha, theta, j_max);
        njson rows;
        for (const auto& [name, cell] : r.rows) {
            njson c;
            c["besov2_tail"] = verdict_to_json(cell.besov2_tail);
            c["weak_rearr"] = verdict_to_json(cell.weak_rearr);
            c["weak_below"] = verdict_to_json(cell.weak_below);
            c["weak_count"] = verdict_to_json(cell.weak_count);
            c["hybrid_A"] = verdict_to_json(cell.hybrid_A);
            c["nonlinear_A_sieve"] = verdict_to_json(cell.nonlinear_A_sieve);
            c["nonlinear_A_full"] = verdict_to_json(cell.nonlinear_A_full);
            c["nonlinear_A_hybrid"] = verdict_to_json(cell.nonlinear_A_hybrid);
            rows[name] = std::move(c);
        }
        njson out;
        out["alpha"] = r.alpha;
        out["theta"] = r.theta;
        out["j_max"] = r.j_max;
        out["witness_depth"] = r.witness_depth;
        out["rows"] = std::move(rows);
        *out_json = dup_string(out.dump());
    });
}

} // extern "C"
