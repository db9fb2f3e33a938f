#include "tipsim/ensemble.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "tipsim/parallel.hpp"
#include "tipsim/report.hpp"
#include "tipsim/rng.hpp"

namespace tipsim {

std::uint64_t cell_seed(std::uint64_t master_seed, double rate, double sigma) {
  return derive_seed(master_seed, std::bit_cast<std::uint64_t>(rate),
                     std::bit_cast<std::uint64_t>(sigma));
}

namespace {

void check_common(const ModelParams& params, const TimeGrid& grid, std::uint64_t n_paths) {
  validate(params);
  validate(grid);
  if (n_paths == 0) throw std::invalid_argument("ensemble: n_paths must be >= 1");
}

struct PathResult {
  bool escaped;
  std::uint64_t hit_step;
};

// Escape scan without trajectory storage; stops stepping at the hit.
inline PathResult scan_path(const ModelParams& params, const TimeGrid& grid, StreamKey key) {
  NormalStream stream(key);
  const auto core =
      detail::run_path_core(params, grid, stream, [](std::uint64_t, double, double) {});
  return {core.hit_step.has_value(), core.hit_step.value_or(0)};
}

}  // namespace

EscapeEstimate estimate_escape(const ModelParams& params, const TimeGrid& grid,
                               std::uint64_t n_paths, std::uint64_t master_seed,
                               double ci_level, unsigned threads) {
  check_common(params, grid, n_paths);
  if (!(ci_level > 0.0 && ci_level < 1.0))
    throw std::invalid_argument("ensemble: ci_level must lie in (0,1)");

  const std::uint64_t n_blocks = (n_paths + kPathBlock - 1) / kPathBlock;
  std::vector<std::uint64_t> escaped_per_block(n_blocks, 0);
  for_each_block(n_paths, threads, [&](std::uint64_t b, std::uint64_t first, std::uint64_t last) {
    std::uint64_t escaped = 0;
    for (std::uint64_t i = first; i < last; ++i)
      escaped += scan_path(params, grid, {master_seed, i}).escaped ? 1 : 0;
    escaped_per_block[b] = escaped;
  });

  EscapeEstimate est;
  est.n_paths = n_paths;
  for (std::uint64_t b = 0; b < n_blocks; ++b) est.n_escaped += escaped_per_block[b];
  est.p_hat = static_cast<double>(est.n_escaped) / static_cast<double>(n_paths);
  est.ci_level = ci_level;
  const auto [lo, hi] = wilson_interval(est.n_escaped, est.n_paths, ci_level);
  est.ci_low = lo;
  est.ci_high = hi;
  return est;
}

std::vector<double> collect_hitting_times(const ModelParams& params, const TimeGrid& grid,
                                          std::uint64_t n_paths, std::uint64_t master_seed,
                                          unsigned threads) {
  check_common(params, grid, n_paths);

  const std::uint64_t n_blocks = (n_paths + kPathBlock - 1) / kPathBlock;
  std::vector<std::vector<double>> per_block(n_blocks);
  for_each_block(n_paths, threads, [&](std::uint64_t b, std::uint64_t first, std::uint64_t last) {
    auto& times = per_block[b];
    for (std::uint64_t i = first; i < last; ++i) {
      const auto r = scan_path(params, grid, {master_seed, i});
      if (r.escaped) times.push_back(grid.h * static_cast<double>(r.hit_step));
    }
  });

  std::vector<double> times;
  for (auto& block : per_block) times.insert(times.end(), block.begin(), block.end());
  return times;
}

PathStatistics path_statistics(const ModelParams& params, const TimeGrid& grid,
                               std::uint64_t n_paths, std::uint64_t master_seed,
                               std::uint64_t n_sample_points, unsigned threads) {
  check_common(params, grid, n_paths);
  if (n_paths < 2) throw std::invalid_argument("path_statistics: n_paths must be >= 2");
  if (n_sample_points < 2)
    throw std::invalid_argument("path_statistics: n_sample_points must be >= 2");

  // Sample step indices spread over [0, N], endpoints included.
  const std::uint64_t P = n_sample_points;
  std::vector<std::uint64_t> sample_steps(P);
  for (std::uint64_t i = 0; i < P; ++i) {
    sample_steps[i] = static_cast<std::uint64_t>(std::llround(
        static_cast<double>(i) * static_cast<double>(grid.n_steps) / static_cast<double>(P - 1)));
  }

  const std::uint64_t n_blocks = (n_paths + kPathBlock - 1) / kPathBlock;
  std::vector<std::vector<RunningMoments>> per_block(n_blocks);
  for_each_block(n_paths, threads, [&](std::uint64_t b, std::uint64_t first, std::uint64_t last) {
    auto& acc = per_block[b];
    acc.resize(P);
    for (std::uint64_t i = first; i < last; ++i) {
      NormalStream stream({master_seed, i});
      std::uint64_t cursor = 0;
      const auto core = detail::run_path_core(
          params, grid, stream, [&](std::uint64_t step, double x, double /*y*/) {
            while (cursor < P && sample_steps[cursor] == step) acc[cursor++].add(x);
          });
      if (core.hit_step) {
        // Absorbed paths sit at exactly 1 for the rest of the horizon.
        for (; cursor < P; ++cursor) acc[cursor].add(1.0);
      }
    }
  });

  PathStatistics stats;
  stats.times.resize(P);
  stats.mean.resize(P);
  stats.std_dev.resize(P);
  for (std::uint64_t i = 0; i < P; ++i) {
    RunningMoments total;
    for (std::uint64_t b = 0; b < n_blocks; ++b) total.merge(per_block[b][i]);
    stats.times[i] = grid.h * static_cast<double>(sample_steps[i]);
    stats.mean[i] = total.mean;
    stats.std_dev[i] = std::sqrt(total.sample_variance());
  }
  return stats;
}

SweepTable sweep(std::span<const double> sigma_values, std::span<const double> r_values,
                 const ModelParams& shared, const TimeGrid& grid, std::uint64_t n_paths,
                 std::uint64_t master_seed, double ci_level, unsigned threads,
                 SweepCellCallback on_cell, void* user) {
  if (sigma_values.empty() || r_values.empty())
    throw std::invalid_argument("sweep: sigma and rate value lists must be nonempty");

  SweepTable table;
  table.sigma_values.assign(sigma_values.begin(), sigma_values.end());
  table.r_values.assign(r_values.begin(), r_values.end());
  table.cells.reserve(sigma_values.size() * r_values.size());

  const std::size_t total = sigma_values.size() * r_values.size();
  std::size_t done = 0;
  for (const double r : r_values) {
    for (const double sigma : sigma_values) {
      ModelParams cell_params = shared;
      cell_params.rate = r;
      cell_params.sigma = sigma;
      const auto est = estimate_escape(cell_params, grid, n_paths,
                                       cell_seed(master_seed, r, sigma), ci_level, threads);
      table.cells.push_back(est);
      ++done;
      if (on_cell) on_cell(est, r, sigma, done, total, user);
    }
  }
  return table;
}

}  // namespace tipsim
