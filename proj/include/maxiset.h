/* C interface to the maxiset library.
 *
 * Conventions:
 *   - Every fallible function returns an mxs_status; MXS_OK (0) means success.
 *     On failure, mxs_last_error() returns a thread-local message describing
 *     the violated precondition.
 *   - Output parameters are written only on success.
 *   - Objects returned through mxs_coeffs** are owned by the caller and must
 *     be released with mxs_coeffs_free; strings returned through char** with
 *     mxs_string_free; double buffers with mxs_buffer_free.
 *   - Handles are opaque; the library is internally thread-safe for
 *     concurrent use of distinct handles, and read-only sharing of one handle
 *     across threads is safe.
 */
#ifndef MAXISET_H
#define MAXISET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mxs_status {
    MXS_OK = 0,
    MXS_ERR_INVALID_ARGUMENT = 1,
    MXS_ERR_SHAPE_MISMATCH = 2,
    MXS_ERR_LEVEL_OUT_OF_RANGE = 3,
    MXS_ERR_PENALTY_TOO_SMALL = 4,
    MXS_ERR_DEGENERATE_PENALTY = 5,
    MXS_ERR_DEGENERATE_RATE = 6,
    MXS_ERR_NOISE_TOO_LARGE = 7,
    MXS_ERR_COLLECTION_TOO_LARGE = 8,
    MXS_ERR_INSUFFICIENT_DEPTH = 9,
    MXS_ERR_IO = 10,
    MXS_ERR_PARSE = 11,
    MXS_ERR_UNKNOWN = 99
} mxs_status;

/* Message for the most recent failure on this thread ("" if none). */
const char* mxs_last_error(void);

/* Library version string (static storage; do not free). */
const char* mxs_version(void);

void mxs_string_free(char* s);
void mxs_buffer_free(double* p);

/* ------------------------------------------------------------------------- */
/* Coefficient arrays                                                        */
/* ------------------------------------------------------------------------- */

typedef struct mxs_coeffs mxs_coeffs;

/* Zero array with `depth` dyadic detail levels (level j holds 2^j slots). */
mxs_status mxs_coeffs_zeros(int depth, mxs_coeffs** out);

/* Named test signals: "zero", "s0", "s1", "besov_extremal".
 * alpha is consumed by s1 / besov_extremal and ignored otherwise. */
mxs_status mxs_coeffs_signal(const char* name, double alpha, int j_max, mxs_coeffs** out);

void mxs_coeffs_free(mxs_coeffs* c);

int mxs_coeffs_depth(const mxs_coeffs* c);
mxs_status mxs_coeffs_get_alpha00(const mxs_coeffs* c, double* out);
mxs_status mxs_coeffs_set_alpha00(mxs_coeffs* c, double value);
mxs_status mxs_coeffs_get(const mxs_coeffs* c, int j, int k, double* out);
mxs_status mxs_coeffs_set(mxs_coeffs* c, int j, int k, double value);
mxs_status mxs_coeffs_l2_norm_sq(const mxs_coeffs* c, double* out);

/* JSON artifact format: {"alpha00": <number>, "levels": [[...], ...]}. */
mxs_status mxs_coeffs_to_json(const mxs_coeffs* c, char** out_json);
mxs_status mxs_coeffs_from_json(const char* json, mxs_coeffs** out);

/* ------------------------------------------------------------------------- */
/* Haar transform (periodic, dyadic length)                                  */
/* ------------------------------------------------------------------------- */

mxs_status mxs_haar_analyze(const double* data, size_t len, mxs_coeffs** out);
mxs_status mxs_haar_synthesize(const mxs_coeffs* c, double** out_data, size_t* out_len);

/* ------------------------------------------------------------------------- */
/* Penalties, collections, scalar quantities                                 */
/* ------------------------------------------------------------------------- */

enum { MXS_PENALTY_CONSTANT = 0, MXS_PENALTY_LOGN = 1 };

typedef struct mxs_penalty {
    int kind;          /* MXS_PENALTY_* */
    double lambda0;    /* scale, > 0 */
    int over_penalize; /* nonzero: charge the untruncated budgeted dimension */
} mxs_penalty;

enum {
    MXS_COLLECTION_SIEVE = 0,
    MXS_COLLECTION_FULL = 1,
    MXS_COLLECTION_HYBRID = 2,
    MXS_COLLECTION_HYBRID_TRUNC = 3
};

typedef struct mxs_collection {
    int kind;     /* MXS_COLLECTION_* */
    int j0;       /* sieve / full / hybrid_trunc scan bound */
    double theta; /* budgeted kinds, > 2 */
    int j_trunc;  /* budgeted kinds: exclusive upper level */
} mxs_collection;

mxs_status mxs_lambda_n(const mxs_penalty* pen, int64_t n, double* out);
mxs_status mxs_j0(const mxs_penalty* pen, int64_t n, int* out);
mxs_status mxs_rate_rho(const mxs_penalty* pen, int64_t n, double alpha, double* out);
mxs_status mxs_dim_DJ(int J, double theta, int j_trunc, int64_t* out);
mxs_status mxs_dim_DJ_untruncated(int J, double theta, int64_t* out);
mxs_status mxs_penalty_constants(double delta, double p, double alpha0, double* g,
                                 double* upsilon);
mxs_status mxs_kraft_sum(const mxs_collection* coll, int64_t n, const mxs_penalty* pen,
                         double* out);
mxs_status mxs_q_functional(const mxs_coeffs* s, const mxs_collection* coll,
                            const mxs_penalty* pen, int64_t n, double* out);

/* ------------------------------------------------------------------------- */
/* Observation, selection, Monte Carlo                                       */
/* ------------------------------------------------------------------------- */

/* Adds N(0, 1/n) noise to every coefficient, deterministically in
 * (seed, rep). */
mxs_status mxs_observe(const mxs_coeffs* s, int64_t n, uint64_t seed, uint64_t rep,
                       mxs_coeffs** out);

/* One observation draw followed by model selection.  JSON report:
 * {"n", "lambda_n", "j0"?, "model": {"variant", "N"|"J"?, "indices", "dim"},
 *  "criterion", "bias_sq", "loss"}. */
mxs_status mxs_select_report(const mxs_coeffs* s, const mxs_collection* coll,
                             const mxs_penalty* pen, int64_t n, uint64_t seed,
                             char** out_json);

mxs_status mxs_mc_risk(const mxs_coeffs* s, const mxs_collection* coll,
                       const mxs_penalty* pen, int64_t n, int64_t reps, uint64_t seed,
                       int jobs, double* mean, double* stderr_out);

mxs_status mxs_an_prob(const mxs_collection* coll, int64_t n, const mxs_penalty* pen,
                       int64_t reps, uint64_t seed, double* prob, double* stderr_out);

/* ------------------------------------------------------------------------- */
/* Experiment reports (JSON strings)                                         */
/* ------------------------------------------------------------------------- */

/* The *_curve / *_check functions instantiate the collection per grid point,
 * truncated at the admissible resolution j0(n); `fam->j0` is ignored. */

mxs_status mxs_q_curve(const mxs_coeffs* s, const mxs_collection* fam,
                       const mxs_penalty* pen, const int64_t* n_grid, size_t grid_len,
                       char** out_json);

mxs_status mxs_risk_curve(const mxs_coeffs* s, const mxs_collection* fam,
                          const mxs_penalty* pen, const int64_t* n_grid, size_t grid_len,
                          int64_t reps, uint64_t seed, int jobs, char** out_json);

mxs_status mxs_equivalence_check(const mxs_coeffs* s, const mxs_collection* fam,
                                 const mxs_penalty* pen, const int64_t* n_grid,
                                 size_t grid_len, double alpha, int64_t reps,
                                 uint64_t seed, int jobs, char** out_json);

mxs_status mxs_oracle_check(const mxs_coeffs* s, const mxs_collection* fam,
                            const mxs_penalty* pen, const int64_t* n_grid,
                            size_t grid_len, int64_t reps, uint64_t seed, int jobs,
                            char** out_json);

/* Approximation-space report for one signal: JSON object mapping functional
 * name -> {"value", "series", "growth_ratio", "verdict"}.  The linear_L entry
 * is included only when grid_len > 0 (it needs a noise grid). */
mxs_status mxs_spaces_report(const mxs_coeffs* s, double alpha, double theta,
                             const mxs_penalty* pen, const int64_t* n_grid,
                             size_t grid_len, char** out_json);

/* Witness-by-functional membership matrix. */
mxs_status mxs_embedding_report(double alpha, double theta, int j_max, char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MAXISET_H */
