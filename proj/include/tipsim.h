/* C interface to the tipping-simulation library.
 *
 * Conventions:
 *   - Every fallible function returns a tipsim_status; outputs go through
 *     pointer arguments and are written only on TIPSIM_OK.
 *   - Handles (tipsim_sweep_t, ...) are opaque; release them with the matching
 *     *_free function. Freeing NULL is a no-op.
 *   - Strings produced by the library are heap-allocated, NUL-terminated, and
 *     must be released with tipsim_string_free.
 *   - tipsim_last_error() returns a thread-local message describing the most
 *     recent failure on the calling thread; it stays valid until the next
 *     failing call on that thread.
 */
#ifndef TIPSIM_H
#define TIPSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TIPSIM_BUILD_SHARED)
#    define TIPSIM_API __declspec(dllexport)
#  else
#    define TIPSIM_API __declspec(dllimport)
#  endif
#else
#  define TIPSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tipsim_status {
  TIPSIM_OK = 0,
  TIPSIM_ERR_NULL_ARGUMENT = 1,  /* required pointer argument was NULL */
  TIPSIM_ERR_INVALID_PARAMS = 2, /* model/grid parameters violate their invariants */
  TIPSIM_ERR_INVALID_ARGUMENT = 3,
  TIPSIM_ERR_NO_BRACKET = 4, /* critical-rate probes do not straddle the threshold */
  TIPSIM_ERR_IO = 5,
  TIPSIM_ERR_INTERNAL = 6
} tipsim_status;

typedef enum tipsim_boundary {
  TIPSIM_BOUNDARY_CONFINED = 0,
  TIPSIM_BOUNDARY_LOWER_ATTAINABLE = 1,
  TIPSIM_BOUNDARY_UPPER_ATTAINABLE = 2,
  TIPSIM_BOUNDARY_BOTH_ATTAINABLE = 3
} tipsim_boundary;

/* Model parameters. rate is the source-rate R; y0 defaults to 1+delta. */
typedef struct tipsim_params {
  double sigma;
  double rate;
  double delta;
  double x0;
  double y0;
} tipsim_params;

typedef struct tipsim_grid {
  double h;
  uint64_t n_steps;
} tipsim_grid;

typedef struct tipsim_escape_estimate {
  uint64_t n_paths;
  uint64_t n_escaped;
  double p_hat;
  double ci_low;
  double ci_high;
  double ci_level;
} tipsim_escape_estimate;

typedef struct tipsim_path_result {
  int escaped;           /* nonzero iff the path reached 1 within the horizon */
  uint64_t hit_step;     /* valid iff escaped */
  double hit_time;       /* valid iff escaped */
  uint64_t floor_events; /* steps clipped at the lower boundary */
  double x_final;
  double y_final;
} tipsim_path_result;

typedef struct tipsim_deterministic_result {
  int tipped; /* nonzero iff the noiseless trajectory reached 1 */
  double t_c; /* crossing time, valid iff tipped */
  double max_x;
} tipsim_deterministic_result;

typedef struct tipsim_critical_rate_result {
  double r_low;  /* tipping rate (final bracket, tips at r_low) */
  double r_high; /* non-tipping rate */
  double t_c_at_r_low;
  uint64_t evaluations;
} tipsim_critical_rate_result;

typedef struct tipsim_sweep_s tipsim_sweep_t;
typedef struct tipsim_times_s tipsim_times_t;
typedef struct tipsim_stats_s tipsim_stats_t;
typedef struct tipsim_trajectories_s tipsim_trajectories_t;
typedef struct tipsim_histogram_s tipsim_histogram_t;

/* Called after each finished sweep cell. done/total count cells. */
typedef void (*tipsim_progress_fn)(uint64_t done, uint64_t total, double rate, double sigma,
                                   void *user);

/* ---- library / error plumbing ---- */

TIPSIM_API const char *tipsim_version(void);
TIPSIM_API const char *tipsim_status_name(tipsim_status status);
TIPSIM_API const char *tipsim_last_error(void);

/* ---- parameters ---- */

/* Reference defaults: sigma=0.2, R=0.1, delta=0.5, x0=0.1, y0=1+delta. */
TIPSIM_API void tipsim_params_init(tipsim_params *params);
/* Grid defaults: h=5e-5, n_steps=200000 (horizon 10). */
TIPSIM_API void tipsim_grid_init(tipsim_grid *grid);
TIPSIM_API tipsim_status tipsim_params_validate(const tipsim_params *params);
TIPSIM_API tipsim_status tipsim_grid_validate(const tipsim_grid *grid);
/* Boundary attainability for a frozen source level r (not the rate R). */
TIPSIM_API tipsim_status tipsim_classify(double r, double sigma, tipsim_boundary *out);

/* ---- pure model / scheme helpers ---- */

TIPSIM_API double tipsim_drift(double x, double y);
TIPSIM_API double tipsim_diffusion_amplitude(double x, double sigma);
TIPSIM_API double tipsim_source_rhs(double y, double rate, double delta);
TIPSIM_API double tipsim_source_exact(double t, double rate, double delta, double y0);
TIPSIM_API double tipsim_em_step(double x, double y, double sigma, double h, double w);
TIPSIM_API double tipsim_logistic_step(double y, double rate, double delta, double h);
/* Inverse standard-normal CDF; p must lie in (0,1). */
TIPSIM_API tipsim_status tipsim_inverse_normal_cdf(double p, double *out);
/* First `count` standard normals of stream (master_seed, path_index). */
TIPSIM_API tipsim_status tipsim_standard_normals(uint64_t master_seed, uint64_t path_index,
                                                 size_t count, double *out);

/* ---- single-path and deterministic runs ---- */

TIPSIM_API tipsim_status tipsim_simulate_path(const tipsim_params *params,
                                              const tipsim_grid *grid, uint64_t master_seed,
                                              uint64_t path_index, tipsim_path_result *out);

/* Simulates n_paths trajectories (streams 0..n_paths-1), storing every
 * record_stride-th point plus the initial point, the escape step, and the
 * final step. record_stride == 0 picks a stride giving ~200 points. */
TIPSIM_API tipsim_status tipsim_simulate_trajectories(const tipsim_params *params,
                                                      const tipsim_grid *grid, uint64_t n_paths,
                                                      uint64_t master_seed,
                                                      uint64_t record_stride,
                                                      tipsim_trajectories_t **out);
TIPSIM_API void tipsim_trajectories_free(tipsim_trajectories_t *traj);
TIPSIM_API uint64_t tipsim_trajectories_count(const tipsim_trajectories_t *traj);
TIPSIM_API uint64_t tipsim_trajectory_size(const tipsim_trajectories_t *traj, uint64_t path);
TIPSIM_API tipsim_status tipsim_trajectory_point(const tipsim_trajectories_t *traj, uint64_t path,
                                                 uint64_t index, double *t, double *x, double *y);
TIPSIM_API tipsim_status tipsim_trajectory_outcome(const tipsim_trajectories_t *traj,
                                                   uint64_t path, tipsim_path_result *out);

TIPSIM_API tipsim_status tipsim_integrate_deterministic(const tipsim_params *params,
                                                        double horizon, double step,
                                                        tipsim_deterministic_result *out);

/* Bisects for the rate threshold between probe_low (must tip) and probe_high
 * (must not) until r_high - r_low <= tolerance. */
TIPSIM_API tipsim_status tipsim_critical_rate(const tipsim_params *params, double horizon,
                                              double tolerance, double probe_low,
                                              double probe_high, double step,
                                              tipsim_critical_rate_result *out);

/* ---- ensemble estimators ---- */

/* threads == 0 means use the available hardware parallelism. Results are
 * identical for every thread count. */
TIPSIM_API tipsim_status tipsim_estimate_escape(const tipsim_params *params,
                                                const tipsim_grid *grid, uint64_t n_paths,
                                                uint64_t master_seed, double ci_level,
                                                unsigned threads, tipsim_escape_estimate *out);

TIPSIM_API tipsim_status tipsim_collect_hitting_times(const tipsim_params *params,
                                                      const tipsim_grid *grid, uint64_t n_paths,
                                                      uint64_t master_seed, unsigned threads,
                                                      tipsim_times_t **out);
TIPSIM_API void tipsim_times_free(tipsim_times_t *times);
TIPSIM_API uint64_t tipsim_times_count(const tipsim_times_t *times);
/* Borrowed pointer, valid until tipsim_times_free. NULL iff times is NULL. */
TIPSIM_API const double *tipsim_times_data(const tipsim_times_t *times);

/* Ensemble mean/std of X sampled at n_samples evenly spaced grid times. */
TIPSIM_API tipsim_status tipsim_path_statistics(const tipsim_params *params,
                                                const tipsim_grid *grid, uint64_t n_paths,
                                                uint64_t master_seed, uint64_t n_samples,
                                                unsigned threads, tipsim_stats_t **out);
TIPSIM_API void tipsim_stats_free(tipsim_stats_t *stats);
TIPSIM_API uint64_t tipsim_stats_count(const tipsim_stats_t *stats);
TIPSIM_API tipsim_status tipsim_stats_row(const tipsim_stats_t *stats, uint64_t index, double *t,
                                          double *mean, double *std_dev);

/* Escape estimate per (rate, sigma) cell; cells get seeds derived from
 * (master_seed, rate, sigma) so the table extends without perturbing existing
 * cells. progress may be NULL. */
TIPSIM_API tipsim_status tipsim_sweep(const tipsim_params *shared, const tipsim_grid *grid,
                                      const double *sigma_values, size_t n_sigma,
                                      const double *r_values, size_t n_r, uint64_t n_paths,
                                      uint64_t master_seed, double ci_level, unsigned threads,
                                      tipsim_progress_fn progress, void *user,
                                      tipsim_sweep_t **out);
TIPSIM_API void tipsim_sweep_free(tipsim_sweep_t *sweep);
TIPSIM_API uint64_t tipsim_sweep_rows(const tipsim_sweep_t *sweep);
TIPSIM_API uint64_t tipsim_sweep_cols(const tipsim_sweep_t *sweep);
TIPSIM_API tipsim_status tipsim_sweep_rate(const tipsim_sweep_t *sweep, uint64_t row, double *out);
TIPSIM_API tipsim_status tipsim_sweep_sigma(const tipsim_sweep_t *sweep, uint64_t col,
                                            double *out);
TIPSIM_API tipsim_status tipsim_sweep_cell(const tipsim_sweep_t *sweep, uint64_t row,
                                           uint64_t col, tipsim_escape_estimate *out);

/* ---- histograms ---- */

TIPSIM_API tipsim_status tipsim_histogram_uniform(const tipsim_times_t *times, double lo,
                                                  double hi, uint64_t n_bins,
                                                  tipsim_histogram_t **out);
TIPSIM_API void tipsim_histogram_free(tipsim_histogram_t *hist);
TIPSIM_API uint64_t tipsim_histogram_bins(const tipsim_histogram_t *hist);
TIPSIM_API tipsim_status tipsim_histogram_bin(const tipsim_histogram_t *hist, uint64_t index,
                                              double *left, double *right, uint64_t *count);
TIPSIM_API uint64_t tipsim_histogram_total(const tipsim_histogram_t *hist);
TIPSIM_API uint64_t tipsim_histogram_out_of_range(const tipsim_histogram_t *hist);

/* ---- serialization (all strings via tipsim_string_free) ---- */

TIPSIM_API void tipsim_string_free(char *str);
TIPSIM_API tipsim_status tipsim_sweep_csv(const tipsim_sweep_t *sweep, char **out);
TIPSIM_API tipsim_status tipsim_histogram_csv(const tipsim_histogram_t *hist, char **out);
TIPSIM_API tipsim_status tipsim_stats_csv(const tipsim_stats_t *stats, char **out);
TIPSIM_API tipsim_status tipsim_trajectories_csv(const tipsim_trajectories_t *traj, char **out);
TIPSIM_API tipsim_status tipsim_escape_csv(const tipsim_params *params,
                                           const tipsim_escape_estimate *estimate, char **out);
/* JSON summary: params, grid, seed, results (escape estimate), tool_version. */
TIPSIM_API tipsim_status tipsim_escape_json(const tipsim_params *params, const tipsim_grid *grid,
                                            uint64_t master_seed,
                                            const tipsim_escape_estimate *estimate, char **out);
/* JSON summary with a null seed and the bracket under results. */
TIPSIM_API tipsim_status tipsim_critical_rate_json(const tipsim_params *params, double horizon,
                                                   double step,
                                                   const tipsim_critical_rate_result *result,
                                                   char **out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TIPSIM_H */
