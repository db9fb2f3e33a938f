// Command-line front end. Talks to the library exclusively through the C API.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tipsim.h"

namespace {

int fail_status(tipsim_status st, const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, tipsim_last_error());
  return st == TIPSIM_OK ? 1 : static_cast<int>(st);
}

#define CHECK_API(call, what)                                 \
  do {                                                        \
    const tipsim_status st_ = (call);                         \
    if (st_ != TIPSIM_OK) return fail_status(st_, what);      \
  } while (0)

bool write_text(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out.write(text, static_cast<std::streamsize>(std::strlen(text)));
  out.flush();
  return static_cast<bool>(out);
}

int write_or_fail(const std::string& path, const char* text) {
  if (!write_text(path, text)) {
    std::fprintf(stderr, "error: cannot write '%s'\n", path.c_str());
    return static_cast<int>(TIPSIM_ERR_IO);
  }
  return 0;
}

// Shared flag set. Each subcommand registers the subset it uses; values not
// overridden on the command line keep the full-resolution defaults.
struct Common {
  tipsim_params params{};
  tipsim_grid grid{};
  std::uint64_t n_paths = 200000;
  std::uint64_t seed = 42;
  double ci_level = 0.95;
  unsigned threads = 0;
  std::string preset;
  std::string out;

  CLI::Option* opt_y0 = nullptr;
  CLI::Option* opt_h = nullptr;
  CLI::Option* opt_steps = nullptr;
  CLI::Option* opt_n_paths = nullptr;

  Common() {
    tipsim_params_init(&params);
    tipsim_grid_init(&grid);
  }
};

void add_model_flags(CLI::App* cmd, Common& c, bool with_noise = true) {
  if (with_noise) {
    cmd->add_option("--sigma", c.params.sigma, "noise amplitude")->capture_default_str();
    cmd->add_option("--R", c.params.rate, "logistic source rate")->capture_default_str();
  }
  cmd->add_option("--delta", c.params.delta, "source endpoint offset, in (0,1)")
      ->capture_default_str();
  cmd->add_option("--x0", c.params.x0, "initial state, in (0,1)")->capture_default_str();
  c.opt_y0 = cmd->add_option("--y0", c.params.y0, "initial source level [default: 1+delta]");
}

void add_grid_flags(CLI::App* cmd, Common& c) {
  c.opt_h = cmd->add_option("--h", c.grid.h, "time step")->capture_default_str();
  c.opt_steps = cmd->add_option("--steps", c.grid.n_steps, "step count")->capture_default_str();
}

void add_run_flags(CLI::App* cmd, Common& c, bool with_n_paths = true) {
  if (with_n_paths) {
    c.opt_n_paths = cmd->add_option("--n-paths", c.n_paths, "sample path count")
                        ->check(CLI::PositiveNumber)
                        ->capture_default_str();
  }
  cmd->add_option("--seed", c.seed, "master seed")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker count, 0 = hardware")->capture_default_str();
  cmd->add_option("--preset", c.preset, "scaled run: 'desk' = 10k paths at h=1e-3")
      ->check(CLI::IsMember({"desk"}));
}

// Flags always win; the preset only touches what the user left alone.
void finish_common(Common& c) {
  if (c.opt_y0 == nullptr || c.opt_y0->count() == 0) c.params.y0 = 1.0 + c.params.delta;
  if (c.preset == "desk") {
    if (c.opt_h == nullptr || c.opt_h->count() == 0) c.grid.h = 1e-3;
    if (c.opt_steps == nullptr || c.opt_steps->count() == 0) c.grid.n_steps = 10000;
    if (c.opt_n_paths == nullptr || c.opt_n_paths->count() == 0) c.n_paths = 10000;
  }
}

// Base name for commands that emit both a .json and a .csv.
std::string strip_known_extension(std::string path) {
  for (const char* ext : {".json", ".csv"}) {
    const std::size_t n = std::strlen(ext);
    if (path.size() > n && path.compare(path.size() - n, n, ext) == 0)
      return path.substr(0, path.size() - n);
  }
  return path;
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// ---- classify ----

int run_classify(double r, double sigma) {
  tipsim_boundary b;
  CHECK_API(tipsim_classify(r, sigma, &b), "classify");
  const double s2 = sigma * sigma;
  std::printf("r = %s, sigma = %s\n", fmt_g(r).c_str(), fmt_g(sigma).c_str());
  std::printf("  2r >= sigma^2: %s (%s vs %s)\n", 2.0 * r >= s2 ? "yes" : "no",
              fmt_g(2.0 * r).c_str(), fmt_g(s2).c_str());
  std::printf("  2(1-r) >= sigma^2: %s (%s vs %s)\n", 2.0 * (1.0 - r) >= s2 ? "yes" : "no",
              fmt_g(2.0 * (1.0 - r)).c_str(), fmt_g(s2).c_str());
  switch (b) {
    case TIPSIM_BOUNDARY_CONFINED: std::printf("confined\n"); break;
    case TIPSIM_BOUNDARY_LOWER_ATTAINABLE: std::printf("lower boundary attainable\n"); break;
    case TIPSIM_BOUNDARY_UPPER_ATTAINABLE: std::printf("upper boundary attainable\n"); break;
    case TIPSIM_BOUNDARY_BOTH_ATTAINABLE: std::printf("both boundaries attainable\n"); break;
  }
  return 0;
}

// ---- paths ----

int run_paths(Common& c, std::uint64_t n, std::uint64_t stride) {
  finish_common(c);
  std::fprintf(stderr, "simulating %" PRIu64 " trajectories (%" PRIu64 " steps each)\n", n,
               c.grid.n_steps);
  tipsim_trajectories_t* traj = nullptr;
  CHECK_API(tipsim_simulate_trajectories(&c.params, &c.grid, n, c.seed, stride, &traj),
            "simulate trajectories");
  char* csv = nullptr;
  const tipsim_status st = tipsim_trajectories_csv(traj, &csv);
  std::uint64_t escaped = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    tipsim_path_result r{};
    if (tipsim_trajectory_outcome(traj, i, &r) == TIPSIM_OK && r.escaped) ++escaped;
  }
  tipsim_trajectories_free(traj);
  if (st != TIPSIM_OK) return fail_status(st, "render trajectories");
  const std::string path = c.out.empty() ? "paths.csv" : c.out;
  const int rc = write_or_fail(path, csv);
  tipsim_string_free(csv);
  if (rc != 0) return rc;
  std::printf("wrote %s: %" PRIu64 " trajectories, %" PRIu64 " reached the boundary\n",
              path.c_str(), n, escaped);
  return 0;
}

// ---- escape ----

int run_escape(Common& c) {
  finish_common(c);
  std::fprintf(stderr, "estimating escape probability: %" PRIu64 " paths x %" PRIu64 " steps\n",
               c.n_paths, c.grid.n_steps);
  tipsim_escape_estimate est{};
  CHECK_API(tipsim_estimate_escape(&c.params, &c.grid, c.n_paths, c.seed, c.ci_level, c.threads,
                                   &est),
            "estimate escape");
  const std::string base = strip_known_extension(c.out.empty() ? "escape" : c.out);

  char* json = nullptr;
  CHECK_API(tipsim_escape_json(&c.params, &c.grid, c.seed, &est, &json), "render json");
  int rc = write_or_fail(base + ".json", json);
  tipsim_string_free(json);
  if (rc != 0) return rc;

  char* csv = nullptr;
  CHECK_API(tipsim_escape_csv(&c.params, &est, &csv), "render csv");
  rc = write_or_fail(base + ".csv", csv);
  tipsim_string_free(csv);
  if (rc != 0) return rc;

  std::printf("p_hat = %.2f%% (%g%% CI [%.2f%%, %.2f%%]), %" PRIu64 "/%" PRIu64 " escaped\n",
              est.p_hat * 100.0, c.ci_level * 100.0, est.ci_low * 100.0, est.ci_high * 100.0,
              est.n_escaped, est.n_paths);
  std::printf("wrote %s.json and %s.csv\n", base.c_str(), base.c_str());
  return 0;
}

// ---- sweep ----

void sweep_progress(std::uint64_t done, std::uint64_t total, double rate, double sigma, void*) {
  std::fprintf(stderr, "[%" PRIu64 "/%" PRIu64 "] R=%s sigma=%s\n", done, total,
               fmt_g(rate).c_str(), fmt_g(sigma).c_str());
}

int run_sweep(Common& c, const std::vector<double>& sigmas, const std::vector<double>& rates) {
  finish_common(c);
  std::fprintf(stderr, "sweep: %zu x %zu cells, %" PRIu64 " paths each\n", rates.size(),
               sigmas.size(), c.n_paths);
  tipsim_sweep_t* sweep = nullptr;
  CHECK_API(tipsim_sweep(&c.params, &c.grid, sigmas.data(), sigmas.size(), rates.data(),
                         rates.size(), c.n_paths, c.seed, c.ci_level, c.threads, sweep_progress,
                         nullptr, &sweep),
            "sweep");
  char* csv = nullptr;
  const tipsim_status st = tipsim_sweep_csv(sweep, &csv);
  if (st != TIPSIM_OK) {
    tipsim_sweep_free(sweep);
    return fail_status(st, "render sweep");
  }
  const std::string path = c.out.empty() ? "sweep.csv" : c.out;
  const int rc = write_or_fail(path, csv);
  tipsim_string_free(csv);
  if (rc != 0) {
    tipsim_sweep_free(sweep);
    return rc;
  }

  // Escape percentages, two decimals, rates down / sigmas across.
  std::printf("%-10s", "R \\ sigma");
  for (const double s : sigmas) std::printf("%9s", fmt_g(s).c_str());
  std::printf("\n");
  for (std::uint64_t ir = 0; ir < rates.size(); ++ir) {
    std::printf("%-10s", fmt_g(rates[ir]).c_str());
    for (std::uint64_t is = 0; is < sigmas.size(); ++is) {
      tipsim_escape_estimate est{};
      if (tipsim_sweep_cell(sweep, ir, is, &est) != TIPSIM_OK) {
        tipsim_sweep_free(sweep);
        return fail_status(TIPSIM_ERR_INTERNAL, "read sweep cell");
      }
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%.2f", est.p_hat * 100.0);
      std::printf("%9s", buf);
    }
    std::printf("\n");
  }
  tipsim_sweep_free(sweep);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

// ---- hist ----

int run_hist(Common& c, std::uint64_t bins, double tmin, double tmax, bool tmax_set) {
  finish_common(c);
  if (!tmax_set) tmax = c.grid.h * static_cast<double>(c.grid.n_steps);
  std::fprintf(stderr, "collecting hitting times: %" PRIu64 " paths x %" PRIu64 " steps\n",
               c.n_paths, c.grid.n_steps);
  tipsim_times_t* times = nullptr;
  CHECK_API(tipsim_collect_hitting_times(&c.params, &c.grid, c.n_paths, c.seed, c.threads,
                                         &times),
            "collect hitting times");
  tipsim_histogram_t* hist = nullptr;
  const tipsim_status st = tipsim_histogram_uniform(times, tmin, tmax, bins, &hist);
  const std::uint64_t n_times = tipsim_times_count(times);
  tipsim_times_free(times);
  if (st != TIPSIM_OK) return fail_status(st, "build histogram");

  char* csv = nullptr;
  const tipsim_status st2 = tipsim_histogram_csv(hist, &csv);
  const std::uint64_t outside = tipsim_histogram_out_of_range(hist);
  tipsim_histogram_free(hist);
  if (st2 != TIPSIM_OK) return fail_status(st2, "render histogram");
  const std::string path = c.out.empty() ? "hist.csv" : c.out;
  const int rc = write_or_fail(path, csv);
  tipsim_string_free(csv);
  if (rc != 0) return rc;
  std::printf("wrote %s: %" PRIu64 " hitting times from %" PRIu64 " paths (%" PRIu64
              " outside [%s, %s])\n",
              path.c_str(), n_times, c.n_paths, outside, fmt_g(tmin).c_str(),
              fmt_g(tmax).c_str());
  return 0;
}

// ---- stats ----

int run_stats(Common& c, std::uint64_t samples) {
  finish_common(c);
  std::fprintf(stderr, "ensemble statistics: %" PRIu64 " paths x %" PRIu64 " steps\n", c.n_paths,
               c.grid.n_steps);
  tipsim_stats_t* stats = nullptr;
  CHECK_API(tipsim_path_statistics(&c.params, &c.grid, c.n_paths, c.seed, samples, c.threads,
                                   &stats),
            "path statistics");
  char* csv = nullptr;
  const tipsim_status st = tipsim_stats_csv(stats, &csv);
  tipsim_stats_free(stats);
  if (st != TIPSIM_OK) return fail_status(st, "render statistics");
  const std::string path = c.out.empty() ? "stats.csv" : c.out;
  const int rc = write_or_fail(path, csv);
  tipsim_string_free(csv);
  if (rc != 0) return rc;
  std::printf("wrote %s: %" PRIu64 " sample times, %" PRIu64 " paths\n", path.c_str(), samples,
              c.n_paths);
  return 0;
}

// ---- critical-rate ----

int run_critical_rate(Common& c, double horizon, double tol, double probe_low, double probe_high,
                      double step) {
  finish_common(c);
  c.params.sigma = 0.0;  // noiseless analysis
  tipsim_critical_rate_result res{};
  CHECK_API(tipsim_critical_rate(&c.params, horizon, tol, probe_low, probe_high, step, &res),
            "critical rate");
  tipsim_params at_threshold = c.params;
  at_threshold.rate = res.r_low;
  char* json = nullptr;
  CHECK_API(tipsim_critical_rate_json(&at_threshold, horizon, step, &res, &json), "render json");
  const std::string path = c.out.empty() ? "critical_rate.json" : c.out;
  const int rc = write_or_fail(path, json);
  tipsim_string_free(json);
  if (rc != 0) return rc;
  std::printf("R_c in [%.10g, %.10g] (width %.3g), t_c = %.6g at R = %.10g, %" PRIu64
              " bisection steps\n",
              res.r_low, res.r_high, res.r_high - res.r_low, res.t_c_at_r_low, res.r_low,
              res.evaluations);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation of a bounded diffusion driven by a decaying logistic source"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");  // frees -h/--h for the step size
  app.set_version_flag("--version", std::string("tipsim ") + tipsim_version());
  app.set_config("--config", "", "read options from an INI/TOML file (flags win)");
  const auto add_cmd = [&app](const char* name, const char* desc) {
    auto* cmd = app.add_subcommand(name, desc);
    cmd->set_help_flag("--help", "print this help and exit");
    return cmd;
  };

  // classify
  double cls_r = 0.5, cls_sigma = 0.2;
  auto* cls = add_cmd("classify", "boundary attainability for a frozen source level");
  cls->add_option("--r", cls_r, "frozen source level")->capture_default_str();
  cls->add_option("--sigma", cls_sigma, "noise amplitude")->capture_default_str();

  // paths
  Common c_paths;
  std::uint64_t paths_n = 10, paths_stride = 0;
  auto* paths = add_cmd("paths", "sample trajectories to CSV");
  add_model_flags(paths, c_paths);
  add_grid_flags(paths, c_paths);
  add_run_flags(paths, c_paths, /*with_n_paths=*/false);
  paths->add_option("--n,--n-paths", paths_n, "trajectory count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  paths->add_option("--stride", paths_stride, "record every k-th step, 0 = ~200 points");
  paths->add_option("--out", c_paths.out, "output CSV [default: paths.csv]");

  // escape
  Common c_escape;
  auto* escape = add_cmd("escape", "escape probability with confidence interval");
  add_model_flags(escape, c_escape);
  add_grid_flags(escape, c_escape);
  add_run_flags(escape, c_escape);
  escape->add_option("--ci-level", c_escape.ci_level, "confidence level")->capture_default_str();
  escape->add_option("--out", c_escape.out, "output base name [default: escape{.json,.csv}]");

  // sweep
  Common c_sweep;
  std::vector<double> sweep_sigmas{0.1, 0.2, 0.4, 0.8};
  std::vector<double> sweep_rates{0.1, 0.2, 0.3, 0.4, 0.5};
  auto* sweep = add_cmd("sweep", "escape probability over a (R, sigma) grid");
  add_model_flags(sweep, c_sweep, /*with_noise=*/false);
  add_grid_flags(sweep, c_sweep);
  add_run_flags(sweep, c_sweep);
  sweep->add_option("--sigmas", sweep_sigmas, "sigma values")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--rates", sweep_rates, "R values")->delimiter(',')->capture_default_str();
  sweep->add_option("--ci-level", c_sweep.ci_level, "confidence level")->capture_default_str();
  sweep->add_option("--out", c_sweep.out, "output CSV [default: sweep.csv]");

  // hist
  Common c_hist;
  std::uint64_t hist_bins = 50;
  double hist_tmin = 0.0, hist_tmax = 0.0;
  auto* hist = add_cmd("hist", "histogram of boundary hitting times");
  add_model_flags(hist, c_hist);
  add_grid_flags(hist, c_hist);
  add_run_flags(hist, c_hist);
  hist->add_option("--bins", hist_bins, "bin count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  hist->add_option("--tmin", hist_tmin, "left edge")->capture_default_str();
  auto* opt_tmax = hist->add_option("--tmax", hist_tmax, "right edge [default: horizon]");
  hist->add_option("--out", c_hist.out, "output CSV [default: hist.csv]");

  // stats
  Common c_stats;
  std::uint64_t stats_samples = 201;
  auto* stats = add_cmd("stats", "ensemble mean/std of the state over time");
  add_model_flags(stats, c_stats);
  add_grid_flags(stats, c_stats);
  add_run_flags(stats, c_stats);
  stats->add_option("--samples", stats_samples, "number of sample times")
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1000000}))
      ->capture_default_str();
  stats->add_option("--out", c_stats.out, "output CSV [default: stats.csv]");

  // critical-rate
  Common c_crit;
  double crit_horizon = 10.0, crit_tol = 1e-4, crit_lo = 0.01, crit_hi = 1.0, crit_step = 1e-4;
  auto* crit = add_cmd("critical-rate",
                                  "bisect for the deterministic tipping threshold");
  add_model_flags(crit, c_crit, /*with_noise=*/false);
  crit->add_option("--horizon", crit_horizon, "integration horizon")->capture_default_str();
  crit->add_option("--tol", crit_tol, "bracket width target")->capture_default_str();
  crit->add_option("--probe-low", crit_lo, "rate that must tip")->capture_default_str();
  crit->add_option("--probe-high", crit_hi, "rate that must not tip")->capture_default_str();
  crit->add_option("--step", crit_step, "integrator step")->capture_default_str();
  crit->add_option("--out", c_crit.out, "output JSON [default: critical_rate.json]");

  CLI11_PARSE(app, argc, argv);

  if (cls->parsed()) return run_classify(cls_r, cls_sigma);
  if (paths->parsed()) return run_paths(c_paths, paths_n, paths_stride);
  if (escape->parsed()) return run_escape(c_escape);
  if (sweep->parsed()) return run_sweep(c_sweep, sweep_sigmas, sweep_rates);
  if (hist->parsed()) return run_hist(c_hist, hist_bins, hist_tmin, hist_tmax,
                                      opt_tmax->count() > 0);
  if (stats->parsed()) return run_stats(c_stats, stats_samples);
  if (crit->parsed()) return run_critical_rate(c_crit, crit_horizon, crit_tol, crit_lo, crit_hi,
                                               crit_step);
  return 1;
}
