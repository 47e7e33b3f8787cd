/* Block Kaczmarz least-squares solver: C interface.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function (free functions accept NULL). Complex data is
 * passed as interleaved (re, im) doubles. Row and block indices are 0-based.
 * Functions return a bkz_status; on failure bkz_last_error() describes the
 * problem for the calling thread.
 */
#ifndef BKZ_H
#define BKZ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BKZ_BUILDING)
#    define BKZ_API __declspec(dllexport)
#  else
#    define BKZ_API __declspec(dllimport)
#  endif
#else
#  define BKZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bkz_status {
  BKZ_OK = 0,
  BKZ_ERR_INVALID_ARGUMENT = 1,
  BKZ_ERR_DIMENSION = 2,
  BKZ_ERR_IO = 3,
  BKZ_ERR_PARSE = 4,
  BKZ_ERR_NUMERIC = 5,
  BKZ_ERR_NOT_CONVERGED = 6,
  BKZ_ERR_INTERNAL = 7
} bkz_status;

typedef enum bkz_control {
  BKZ_CONTROL_UNIFORM = 0, /* i.i.d. uniform block draws */
  BKZ_CONTROL_CYCLE = 1    /* fresh random permutation every epoch */
} bkz_control;

typedef enum bkz_inner {
  BKZ_INNER_AUTO = 0,
  BKZ_INNER_DIRECT = 1,
  BKZ_INNER_CG = 2
} bkz_inner;

typedef struct bkz_operator bkz_operator;
typedef struct bkz_vector bkz_vector;
typedef struct bkz_paving bkz_paving;
typedef struct bkz_report bkz_report;
typedef struct bkz_experiment_config bkz_experiment_config;
typedef struct bkz_experiment_result bkz_experiment_result;

BKZ_API const char* bkz_last_error(void);
BKZ_API const char* bkz_version(void);
BKZ_API uint64_t bkz_entropy_seed(void);
BKZ_API const char* bkz_status_name(bkz_status s);

/* ---- operators ---- */

/* Dense matrix from a Matrix Market file (real, integer or complex). */
BKZ_API bkz_status bkz_operator_read_mm(const char* path, bkz_operator** out);
/* Row-major data; rows*cols doubles, or 2*rows*cols when is_complex. */
BKZ_API bkz_status bkz_operator_from_dense(size_t rows, size_t cols, const double* data,
                                           int is_complex, bkz_operator** out);
/* Test ensembles: "circulant", "sphere", "coherent". For "circulant", n must
 * be a multiple of `blocks` and the operator keeps its fast structure. The
 * natural paving (circulant blocks, or contiguous runs) is returned when
 * `natural_paving` is not NULL. Matches the matrix an experiment run with
 * the same seed draws. */
BKZ_API bkz_status bkz_operator_generate(const char* ensemble, size_t n, size_t d, size_t blocks,
                                         uint64_t seed, bkz_operator** out,
                                         bkz_paving** natural_paving);
BKZ_API size_t bkz_operator_rows(const bkz_operator* op);
BKZ_API size_t bkz_operator_cols(const bkz_operator* op);
BKZ_API int bkz_operator_is_complex(const bkz_operator* op);
/* Nonzero when every row has unit norm within 1e-12. */
BKZ_API int bkz_operator_standardized(const bkz_operator* op);
BKZ_API bkz_status bkz_operator_write_mm(const bkz_operator* op, const char* path);
/* y = A x. Buffers use the operator's field (interleaved when complex). */
BKZ_API bkz_status bkz_operator_matvec(const bkz_operator* op, const double* x, double* y);
/* Row-major dense copy; `data` holds rows*cols (x2 when complex) doubles. */
BKZ_API bkz_status bkz_operator_to_dense(const bkz_operator* op, double* data);
BKZ_API void bkz_operator_free(bkz_operator* op);

/* ---- vectors ---- */

BKZ_API bkz_status bkz_vector_read(const char* path, bkz_vector** out);
BKZ_API bkz_status bkz_vector_from_real(size_t n, const double* data, bkz_vector** out);
BKZ_API bkz_status bkz_vector_from_complex(size_t n, const double* interleaved, bkz_vector** out);
BKZ_API size_t bkz_vector_size(const bkz_vector* v);
BKZ_API int bkz_vector_is_complex(const bkz_vector* v);
BKZ_API bkz_status bkz_vector_get(const bkz_vector* v, size_t i, double* re, double* im);
BKZ_API bkz_status bkz_vector_write(const bkz_vector* v, const char* path);
BKZ_API void bkz_vector_free(bkz_vector* v);

/* ---- pavings ---- */

/* Text format: "m n", then one line of 1-based row indices per block. */
BKZ_API bkz_status bkz_paving_read(const char* path, bkz_paving** out);
BKZ_API bkz_status bkz_paving_write(const bkz_paving* p, const char* path);
/* Uniformly random partition into m blocks of floor-law sizes. */
BKZ_API bkz_status bkz_paving_random(size_t n, size_t m, uint64_t seed, bkz_paving** out);
BKZ_API bkz_status bkz_paving_single_rows(size_t n, bkz_paving** out);
BKZ_API bkz_status bkz_paving_contiguous(size_t n, size_t m, bkz_paving** out);
BKZ_API size_t bkz_paving_count(const bkz_paving* p);
BKZ_API size_t bkz_paving_rows(const bkz_paving* p);
BKZ_API size_t bkz_paving_block_size(const bkz_paving* p, size_t block);
/* Copies the block's ascending row indices into `out`. */
BKZ_API bkz_status bkz_paving_block_indices(const bkz_paving* p, size_t block, size_t* out);
BKZ_API void bkz_paving_free(bkz_paving* p);

/* ---- analysis ---- */

typedef struct bkz_paving_bounds {
  size_t m;
  double alpha;
  double beta;
  double condition_bound; /* beta/alpha, +inf when alpha = 0 */
  int exact;
  size_t rank_deficient_blocks;
} bkz_paving_bounds;

BKZ_API bkz_status bkz_compute_paving_bounds(const bkz_operator* op, const bkz_paving* p,
                                             bkz_paving_bounds* out);

typedef struct bkz_coherence {
  double max_off_diagonal;
  double max_diagonal_deviation;
  size_t pair_i, pair_j;
  size_t pairs_examined;
  int sampled;
} bkz_coherence;

/* Exact up to 4096 rows, sampled (seeded) above. */
BKZ_API bkz_status bkz_coherence_compute(const bkz_operator* op, uint64_t seed, bkz_coherence* out);

typedef struct bkz_spectral {
  double sigma_min;
  double sigma_max;
  int exact;
  int converged;
  size_t iterations;
} bkz_spectral;

BKZ_API bkz_status bkz_sigma_extremes(const bkz_operator* op, bkz_spectral* out);

/* W = F E A and b~ = F E b with unitary DFT F and sign diagonal E. With
 * all_plus nonzero every sign is +1 and the seed is ignored. `signs` may be
 * NULL. */
BKZ_API bkz_status bkz_fit_transform(const bkz_operator* a, const bkz_vector* b, uint64_t seed,
                                     int all_plus, bkz_operator** w, bkz_vector** b_tilde,
                                     bkz_vector** signs);
/* ||A||^2 <= c_fit n / ln^3(1+n) on a standardized matrix. */
BKZ_API bkz_status bkz_check_fit_hypothesis(const bkz_operator* a, double c_fit, int* holds,
                                            double* norm_sq, double* threshold);
/* ceil(c_rand ||A||^2 ln(1+n) / delta^2) clamped to [1, n]. */
BKZ_API bkz_status bkz_random_paving_block_count(double norm_sq, size_t n, double delta,
                                                 double c_rand, size_t* m, int* clamped);

typedef struct bkz_bound_value {
  double value;
  double contraction;
  double horizon;
  int vacuous;
} bkz_bound_value;

BKZ_API bkz_status bkz_theoretical_bound(size_t j, double sigma_min2, const bkz_paving_bounds* b,
                                         double err0sq, double err_res_sq, bkz_bound_value* out);
BKZ_API bkz_status bkz_tolerance_floor(const bkz_paving_bounds* b, double e_norm_sq, double* out);

typedef struct bkz_rate_comparison {
  double sigma_min2;
  size_t n, m;
  double alpha, beta;
  double contraction;
  double block_rate;
  double simple_rate;
  double speedup;
  double horizon_block;  /* NaN when unavailable */
  double horizon_simple; /* NaN when unavailable */
} bkz_rate_comparison;

/* Pass NaN for e_norm_sq or e_inf_sq when the residual is unknown. */
BKZ_API bkz_status bkz_compare_rates(size_t n, double sigma_min2, const bkz_paving_bounds* b,
                                     double e_norm_sq, double e_inf_sq, bkz_rate_comparison* out);

/* ---- solver ---- */

typedef struct bkz_solver_config {
  double tolerance;    /* stop when ||A x - b|| <= tolerance */
  size_t check_every;  /* 0: m for block, n for simple */
  size_t max_epochs;
  bkz_control control;
  uint64_t seed;
  bkz_inner inner;
  double cg_tol;
  size_t cg_max_iters; /* 0: twice the block size */
  int warm_start;
} bkz_solver_config;

BKZ_API void bkz_solver_config_init(bkz_solver_config* cfg);

/* x_star may be NULL; when given, traces carry ||x - x_star||. Mixed
 * real/complex inputs are solved over the complex field. */
BKZ_API bkz_status bkz_solve_block(const bkz_operator* a, const bkz_vector* b, const bkz_paving* p,
                                   const bkz_solver_config* cfg, const bkz_vector* x_star,
                                   bkz_report** out);
BKZ_API bkz_status bkz_solve_simple(const bkz_operator* a, const bkz_vector* b,
                                    const bkz_solver_config* cfg, const bkz_vector* x_star,
                                    bkz_report** out);

typedef struct bkz_trace_row {
  size_t iter;
  double epoch;
  uint64_t flops_model;
  uint64_t flops_counted;
  uint64_t wall_ns;
  double resid_norm;
  double err_norm; /* NaN without x_star */
  size_t regularized_steps;
  size_t cg_unconverged_steps;
} bkz_trace_row;

BKZ_API int bkz_report_converged(const bkz_report* r);
BKZ_API size_t bkz_report_iterations(const bkz_report* r);
BKZ_API double bkz_report_epochs(const bkz_report* r);
BKZ_API uint64_t bkz_report_flops_model(const bkz_report* r);
BKZ_API uint64_t bkz_report_flops_counted(const bkz_report* r);
/* NaN when the residual of x_star was not known. */
BKZ_API double bkz_report_tolerance_floor(const bkz_report* r);
BKZ_API size_t bkz_report_trace_size(const bkz_report* r);
BKZ_API bkz_status bkz_report_trace_row(const bkz_report* r, size_t i, bkz_trace_row* out);
BKZ_API size_t bkz_report_warning_count(const bkz_report* r);
BKZ_API const char* bkz_report_warning(const bkz_report* r, size_t i);
BKZ_API bkz_status bkz_report_solution(const bkz_report* r, bkz_vector** out);
BKZ_API bkz_status bkz_report_write_trace(const bkz_report* r, const char* path);
BKZ_API void bkz_report_free(bkz_report* r);

/* ---- experiments ---- */

/* "circulant", "sphere" or "coherent". */
BKZ_API bkz_status bkz_experiment_config_preset(const char* name, bkz_experiment_config** out);
BKZ_API bkz_status bkz_experiment_config_set(bkz_experiment_config* c, const char* key,
                                             const char* value);
/* Flat "key = value" file applied on top of the current values. */
BKZ_API bkz_status bkz_experiment_config_load(bkz_experiment_config* c, const char* path);
BKZ_API void bkz_experiment_config_free(bkz_experiment_config* c);

BKZ_API bkz_status bkz_experiment_run(const bkz_experiment_config* c, bkz_experiment_result** out);
BKZ_API bkz_status bkz_experiment_write_csv(const bkz_experiment_result* r, const char* path);
/* JSON text owned by the result. */
BKZ_API const char* bkz_experiment_summary_json(const bkz_experiment_result* r);
BKZ_API void bkz_experiment_free(bkz_experiment_result* r);

#ifdef __cplusplus
}
#endif

#endif /* BKZ_H */
