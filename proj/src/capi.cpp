#include "tipsim.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "tipsim/deterministic.hpp"
#include "tipsim/ensemble.hpp"
#include "tipsim/model.hpp"
#include "tipsim/report.hpp"
#include "tipsim/rng.hpp"
#include "tipsim/scheme.hpp"
#include "tipsim/version.hpp"

struct tipsim_sweep_s {
  tipsim::SweepTable table;
};
struct tipsim_times_s {
  std::vector<double> times;
};
struct tipsim_stats_s {
  tipsim::PathStatistics stats;
};
struct tipsim_trajectories_s {
  std::vector<tipsim::PathOutcome> paths;
};
struct tipsim_histogram_s {
  tipsim::Histogram hist;
};

namespace {

thread_local std::string t_error;

tipsim_status fail(tipsim_status code, const char* msg) {
  t_error = msg;
  return code;
}

// Runs fn, translating exceptions into status codes. invalid_argument maps to
// `invalid_code` so parameter-validation failures and plain bad arguments can
// carry distinct codes.
template <class F>
tipsim_status guarded(tipsim_status invalid_code, F&& fn) {
  try {
    fn();
    return TIPSIM_OK;
  } catch (const tipsim::BracketError& e) {
    return fail(TIPSIM_ERR_NO_BRACKET, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(invalid_code, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TIPSIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TIPSIM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TIPSIM_ERR_INTERNAL, "unknown failure");
  }
}

tipsim::ModelParams to_cpp(const tipsim_params& p) {
  tipsim::ModelParams m;
  m.sigma = p.sigma;
  m.rate = p.rate;
  m.delta = p.delta;
  m.x0 = p.x0;
  m.y0 = p.y0;
  return m;
}

tipsim::TimeGrid to_cpp(const tipsim_grid& g) { return {g.h, g.n_steps}; }

tipsim_escape_estimate to_c(const tipsim::EscapeEstimate& e) {
  return {e.n_paths, e.n_escaped, e.p_hat, e.ci_low, e.ci_high, e.ci_level};
}

tipsim::EscapeEstimate from_c(const tipsim_escape_estimate& e) {
  tipsim::EscapeEstimate est;
  est.n_paths = e.n_paths;
  est.n_escaped = e.n_escaped;
  est.p_hat = e.p_hat;
  est.ci_low = e.ci_low;
  est.ci_high = e.ci_high;
  est.ci_level = e.ci_level;
  return est;
}

struct ProgressAdapter {
  tipsim_progress_fn fn;
  void* user;
};

void forward_progress(const tipsim::EscapeEstimate&, double rate, double sigma, std::size_t done,
                      std::size_t total, void* user) {
  const auto* a = static_cast<const ProgressAdapter*>(user);
  a->fn(done, total, rate, sigma, a->user);
}

tipsim_path_result to_c(const tipsim::PathOutcome& o) {
  tipsim_path_result r{};
  r.escaped = o.escaped() ? 1 : 0;
  r.hit_step = o.hit_step.value_or(0);
  r.hit_time = o.hit_time.value_or(0.0);
  r.floor_events = o.floor_events;
  r.x_final = o.x_final;
  r.y_final = o.y_final;
  return r;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* tipsim_version(void) { return tipsim::kVersion; }

const char* tipsim_status_name(tipsim_status status) {
  switch (status) {
    case TIPSIM_OK: return "ok";
    case TIPSIM_ERR_NULL_ARGUMENT: return "null argument";
    case TIPSIM_ERR_INVALID_PARAMS: return "invalid parameters";
    case TIPSIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TIPSIM_ERR_NO_BRACKET: return "no bracket";
    case TIPSIM_ERR_IO: return "i/o failure";
    case TIPSIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tipsim_last_error(void) { return t_error.c_str(); }

void tipsim_params_init(tipsim_params* params) {
  if (!params) return;
  const auto d = tipsim::ModelParams::defaults();
  *params = {d.sigma, d.rate, d.delta, d.x0, d.y0};
}

void tipsim_grid_init(tipsim_grid* grid) {
  if (!grid) return;
  const tipsim::TimeGrid g;
  *grid = {g.h, g.n_steps};
}

tipsim_status tipsim_params_validate(const tipsim_params* params) {
  if (!params) return fail(TIPSIM_ERR_NULL_ARGUMENT, "params is NULL");
  return guarded(TIPSIM_ERR_INVALID_PARAMS, [&] { tipsim::validate(to_cpp(*params)); });
}

tipsim_status tipsim_grid_validate(const tipsim_grid* grid) {
  if (!grid) return fail(TIPSIM_ERR_NULL_ARGUMENT, "grid is NULL");
  return guarded(TIPSIM_ERR_INVALID_PARAMS, [&] { tipsim::validate(to_cpp(*grid)); });
}

tipsim_status tipsim_classify(double r, double sigma, tipsim_boundary* out) {
  if (!out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "out is NULL");
  return guarded(TIPSIM_ERR_INVALID_ARGUMENT, [&] {
    const auto c = tipsim::feller_classify(r, sigma);
    if (c.confined)
      *out = TIPSIM_BOUNDARY_CONFINED;
    else if (c.lower_attainable && c.upper_attainable)
      *out = TIPSIM_BOUNDARY_BOTH_ATTAINABLE;
    else if (c.lower_attainable)
      *out = TIPSIM_BOUNDARY_LOWER_ATTAINABLE;
    else
      *out = TIPSIM_BOUNDARY_UPPER_ATTAINABLE;
  });
}

double tipsim_drift(double x, double y) { return tipsim::drift(x, y); }

double tipsim_diffusion_amplitude(double x, double sigma) {
  return tipsim::diffusion_amplitude(x, sigma);
}

double tipsim_source_rhs(double y, double rate, double delta) {
  return tipsim::source_rhs(y, rate, delta);
}

double tipsim_source_exact(double t, double rate, double delta, double y0) {
  return tipsim::source_exact(t, rate, delta, y0);
}

double tipsim_em_step(double x, double y, double sigma, double h, double w) {
  return tipsim::em_step(x, y, h, sigma, w);
}

double tipsim_logistic_step(double y, double rate, double delta, double h) {
  return tipsim::logistic_step(y, h, rate, delta);
}

tipsim_status tipsim_inverse_normal_cdf(double p, double* out) {
  if (!out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "out is NULL");
  if (!(p > 0.0 && p < 1.0))
    return fail(TIPSIM_ERR_INVALID_ARGUMENT, "p must lie in the open interval (0,1)");
  *out = tipsim::inverse_normal_cdf(p);
  return TIPSIM_OK;
}

tipsim_status tipsim_standard_normals(uint64_t master_seed, uint64_t path_index, size_t count,
                                      double* out) {
  if (count > 0 && !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "out is NULL");
  tipsim::NormalStream stream({master_seed, path_index});
  for (size_t i = 0; i < count; ++i) out[i] = stream.next();
  return TIPSIM_OK;
}

tipsim_status tipsim_simulate_path(const tipsim_params* params, const tipsim_grid* grid,
                                   uint64_t master_seed, uint64_t path_index,
                                   tipsim_path_result* out) {
  if (!params || !grid || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INVALID_PARAMS, [&] {
    const auto outcome =
        tipsim::simulate_path(to_cpp(*params), to_cpp(*grid), {master_seed, path_index});
    *out = to_c(outcome);
  });
}

tipsim_status tipsim_simulate_trajectories(const tipsim_params* params, const tipsim_grid* grid,
                                           uint64_t n_paths, uint64_t master_seed,
                                           uint64_t record_stride, tipsim_trajectories_t** out) {
  if (!params || !grid || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  if (n_paths == 0) return fail(TIPSIM_ERR_INVALID_ARGUMENT, "n_paths must be >= 1");
  return guarded(TIPSIM_ERR_INVALID_PARAMS, [&] {
    const auto p = to_cpp(*params);
    const auto g = to_cpp(*grid);
    uint64_t stride = record_stride;
    if (stride == 0) stride = g.n_steps < 200 ? 1 : g.n_steps / 200;
    auto traj = std::make_unique<tipsim_trajectories_s>();
    traj->paths.reserve(n_paths);
    for (uint64_t i = 0; i < n_paths; ++i)
      traj->paths.push_back(tipsim::simulate_path(p, g, {master_seed, i}, stride));
    *out = traj.release();
  });
}

void tipsim_trajectories_free(tipsim_trajectories_t* traj) { delete traj; }

uint64_t tipsim_trajectories_count(const tipsim_trajectories_t* traj) {
  return traj ? traj->paths.size() : 0;
}

uint64_t tipsim_trajectory_size(const tipsim_trajectories_t* traj, uint64_t path) {
  if (!traj || path >= traj->paths.size()) return 0;
  return traj->paths[path].trajectory.size();
}

tipsim_status tipsim_trajectory_point(const tipsim_trajectories_t* traj, uint64_t path,
                                      uint64_t index, double* t, double* x, double* y) {
  if (!traj || !t || !x || !y) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  if (path >= traj->paths.size() || index >= traj->paths[path].trajectory.size())
    return fail(TIPSIM_ERR_INVALID_ARGUMENT, "trajectory index out of range");
  const auto& pt = traj->paths[path].trajectory[index];
  *t = pt.t;
  *x = pt.x;
  *y = pt.y;
  return TIPSIM_OK;
}

tipsim_status tipsim_trajectory_outcome(const tipsim_trajectories_t* traj, uint64_t path,
                                        tipsim_path_result* out) {
  if (!traj || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  if (path >= traj->paths.size())
    return fail(TIPSIM_ERR_INVALID_ARGUMENT, "path index out of range");
  *out = to_c(traj->paths[path]);
  return TIPSIM_OK;
}

tipsim_status tipsim_integrate_deterministic(const tipsim_params* params, double horizon,
                                             double step, tipsim_deterministic_result* out) {
  if (!params || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INVALID_PARAMS, [&] {
    const auto run = tipsim::integrate_deterministic(to_cpp(*params), horizon, step);
    out->tipped = run.tipped() ? 1 : 0;
    out->t_c = run.t_c.value_or(0.0);
    out->max_x = run.max_x;
  });
}

tipsim_status tipsim_critical_rate(const tipsim_params* params, double horizon, double tolerance,
                                   double probe_low, double probe_high, double step,
                                   tipsim_critical_rate_result* out) {
  if (!params || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INVALID_PARAMS, [&] {
    const auto res = tipsim::critical_rate(to_cpp(*params), horizon, tolerance, probe_low,
                                           probe_high, step);
    out->r_low = res.r_low;
    out->r_high = res.r_high;
    out->t_c_at_r_low = res.t_c_at_r_low;
    out->evaluations = res.evaluations;
  });
}

tipsim_status tipsim_estimate_escape(const tipsim_params* params, const tipsim_grid* grid,
                                     uint64_t n_paths, uint64_t master_seed, double ci_level,
                                     unsigned threads, tipsim_escape_estimate* out) {
  if (!params || !grid || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INVALID_ARGUMENT, [&] {
    *out = to_c(tipsim::estimate_escape(to_cpp(*params), to_cpp(*grid), n_paths, master_seed,
                                        ci_level, threads));
  });
}

tipsim_status tipsim_collect_hitting_times(const tipsim_params* params, const tipsim_grid* grid,
                                           uint64_t n_paths, uint64_t master_seed,
                                           unsigned threads, tipsim_times_t** out) {
  if (!params || !grid || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INVALID_ARGUMENT, [&] {
    auto times = std::make_unique<tipsim_times_s>();
    times->times = tipsim::collect_hitting_times(to_cpp(*params), to_cpp(*grid), n_paths,
                                                 master_seed, threads);
    *out = times.release();
  });
}

void tipsim_times_free(tipsim_times_t* times) { delete times; }

uint64_t tipsim_times_count(const tipsim_times_t* times) {
  return times ? times->times.size() : 0;
}

const double* tipsim_times_data(const tipsim_times_t* times) {
  return times ? times->times.data() : nullptr;
}

tipsim_status tipsim_path_statistics(const tipsim_params* params, const tipsim_grid* grid,
                                     uint64_t n_paths, uint64_t master_seed, uint64_t n_samples,
                                     unsigned threads, tipsim_stats_t** out) {
  if (!params || !grid || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INVALID_ARGUMENT, [&] {
    auto stats = std::make_unique<tipsim_stats_s>();
    stats->stats = tipsim::path_statistics(to_cpp(*params), to_cpp(*grid), n_paths, master_seed,
                                           n_samples, threads);
    *out = stats.release();
  });
}

void tipsim_stats_free(tipsim_stats_t* stats) { delete stats; }

uint64_t tipsim_stats_count(const tipsim_stats_t* stats) {
  return stats ? stats->stats.times.size() : 0;
}

tipsim_status tipsim_stats_row(const tipsim_stats_t* stats, uint64_t index, double* t,
                               double* mean, double* std_dev) {
  if (!stats || !t || !mean || !std_dev)
    return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  if (index >= stats->stats.times.size())
    return fail(TIPSIM_ERR_INVALID_ARGUMENT, "row index out of range");
  *t = stats->stats.times[index];
  *mean = stats->stats.mean[index];
  *std_dev = stats->stats.std_dev[index];
  return TIPSIM_OK;
}

tipsim_status tipsim_sweep(const tipsim_params* shared, const tipsim_grid* grid,
                           const double* sigma_values, size_t n_sigma, const double* r_values,
                           size_t n_r, uint64_t n_paths, uint64_t master_seed, double ci_level,
                           unsigned threads, tipsim_progress_fn progress, void* user,
                           tipsim_sweep_t** out) {
  if (!shared || !grid || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  if ((n_sigma > 0 && !sigma_values) || (n_r > 0 && !r_values))
    return fail(TIPSIM_ERR_NULL_ARGUMENT, "value list is NULL");
  return guarded(TIPSIM_ERR_INVALID_ARGUMENT, [&] {
    ProgressAdapter adapter{progress, user};
    auto sweep = std::make_unique<tipsim_sweep_s>();
    sweep->table = tipsim::sweep({sigma_values, n_sigma}, {r_values, n_r}, to_cpp(*shared),
                                 to_cpp(*grid), n_paths, master_seed, ci_level, threads,
                                 progress ? &forward_progress : nullptr,
                                 progress ? &adapter : nullptr);
    *out = sweep.release();
  });
}

void tipsim_sweep_free(tipsim_sweep_t* sweep) { delete sweep; }

uint64_t tipsim_sweep_rows(const tipsim_sweep_t* sweep) {
  return sweep ? sweep->table.r_values.size() : 0;
}

uint64_t tipsim_sweep_cols(const tipsim_sweep_t* sweep) {
  return sweep ? sweep->table.sigma_values.size() : 0;
}

tipsim_status tipsim_sweep_rate(const tipsim_sweep_t* sweep, uint64_t row, double* out) {
  if (!sweep || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  if (row >= sweep->table.r_values.size())
    return fail(TIPSIM_ERR_INVALID_ARGUMENT, "row index out of range");
  *out = sweep->table.r_values[row];
  return TIPSIM_OK;
}

tipsim_status tipsim_sweep_sigma(const tipsim_sweep_t* sweep, uint64_t col, double* out) {
  if (!sweep || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  if (col >= sweep->table.sigma_values.size())
    return fail(TIPSIM_ERR_INVALID_ARGUMENT, "column index out of range");
  *out = sweep->table.sigma_values[col];
  return TIPSIM_OK;
}

tipsim_status tipsim_sweep_cell(const tipsim_sweep_t* sweep, uint64_t row, uint64_t col,
                                tipsim_escape_estimate* out) {
  if (!sweep || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  if (row >= sweep->table.r_values.size() || col >= sweep->table.sigma_values.size())
    return fail(TIPSIM_ERR_INVALID_ARGUMENT, "cell index out of range");
  *out = to_c(sweep->table.cell(row, col));
  return TIPSIM_OK;
}

tipsim_status tipsim_histogram_uniform(const tipsim_times_t* times, double lo, double hi,
                                       uint64_t n_bins, tipsim_histogram_t** out) {
  if (!times || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INVALID_ARGUMENT, [&] {
    auto hist = std::make_unique<tipsim_histogram_s>();
    hist->hist = tipsim::build_histogram(times->times, tipsim::uniform_edges(lo, hi, n_bins));
    *out = hist.release();
  });
}

void tipsim_histogram_free(tipsim_histogram_t* hist) { delete hist; }

uint64_t tipsim_histogram_bins(const tipsim_histogram_t* hist) {
  return hist ? hist->hist.counts.size() : 0;
}

tipsim_status tipsim_histogram_bin(const tipsim_histogram_t* hist, uint64_t index, double* left,
                                   double* right, uint64_t* count) {
  if (!hist || !left || !right || !count)
    return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  if (index >= hist->hist.counts.size())
    return fail(TIPSIM_ERR_INVALID_ARGUMENT, "bin index out of range");
  *left = hist->hist.bin_edges[index];
  *right = hist->hist.bin_edges[index + 1];
  *count = hist->hist.counts[index];
  return TIPSIM_OK;
}

uint64_t tipsim_histogram_total(const tipsim_histogram_t* hist) {
  return hist ? hist->hist.n_total : 0;
}

uint64_t tipsim_histogram_out_of_range(const tipsim_histogram_t* hist) {
  return hist ? hist->hist.n_out_of_range : 0;
}

void tipsim_string_free(char* str) { std::free(str); }

tipsim_status tipsim_sweep_csv(const tipsim_sweep_t* sweep, char** out) {
  if (!sweep || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INTERNAL, [&] { *out = dup_string(tipsim::to_csv(sweep->table)); });
}

tipsim_status tipsim_histogram_csv(const tipsim_histogram_t* hist, char** out) {
  if (!hist || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INTERNAL, [&] { *out = dup_string(tipsim::to_csv(hist->hist)); });
}

tipsim_status tipsim_stats_csv(const tipsim_stats_t* stats, char** out) {
  if (!stats || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INTERNAL, [&] { *out = dup_string(tipsim::to_csv(stats->stats)); });
}

tipsim_status tipsim_trajectories_csv(const tipsim_trajectories_t* traj, char** out) {
  if (!traj || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INTERNAL,
                 [&] { *out = dup_string(tipsim::trajectories_to_csv(traj->paths)); });
}

tipsim_status tipsim_escape_csv(const tipsim_params* params,
                                const tipsim_escape_estimate* estimate, char** out) {
  if (!params || !estimate || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INTERNAL,
                 [&] { *out = dup_string(tipsim::escape_csv(to_cpp(*params), from_c(*estimate))); });
}

tipsim_status tipsim_escape_json(const tipsim_params* params, const tipsim_grid* grid,
                                 uint64_t master_seed, const tipsim_escape_estimate* estimate,
                                 char** out) {
  if (!params || !grid || !estimate || !out)
    return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INTERNAL, [&] {
    const auto doc = tipsim::summary_json(to_cpp(*params), to_cpp(*grid), master_seed,
                                          tipsim::to_json(from_c(*estimate)));
    *out = dup_string(doc.dump(2) + "\n");
  });
}

tipsim_status tipsim_critical_rate_json(const tipsim_params* params, double horizon, double step,
                                        const tipsim_critical_rate_result* result, char** out) {
  if (!params || !result || !out) return fail(TIPSIM_ERR_NULL_ARGUMENT, "argument is NULL");
  return guarded(TIPSIM_ERR_INTERNAL, [&] {
    tipsim::CriticalRateResult res;
    res.r_low = result->r_low;
    res.r_high = result->r_high;
    res.t_c_at_r_low = result->t_c_at_r_low;
    res.evaluations = result->evaluations;
    tipsim::TimeGrid grid;
    grid.h = step;
    grid.n_steps = step > 0.0 ? static_cast<std::uint64_t>(std::llround(horizon / step)) : 0;
    const auto doc = tipsim::summary_json(to_cpp(*params), grid, nullptr, tipsim::to_json(res));
    *out = dup_string(doc.dump(2) + "\n");
  });
}

}  // extern "C"
