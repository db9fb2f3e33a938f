#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tipsim/model.hpp"
#include "tipsim/scheme.hpp"

namespace tipsim {

struct EscapeEstimate {
  std::uint64_t n_paths = 0;
  std::uint64_t n_escaped = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;   // Wilson score bounds
  double ci_high = 0.0;
  double ci_level = 0.95;
};

struct PathStatistics {
  std::vector<double> times;
  std::vector<double> mean;     // cross-sectional mean of x per time
  std::vector<double> std_dev;  // cross-sectional sample std per time
};

struct SweepTable {
  std::vector<double> sigma_values;
  std::vector<double> r_values;
  std::vector<EscapeEstimate> cells;  // rate-major: cells[ir * n_sigma + is]

  const EscapeEstimate& cell(std::size_t rate_index, std::size_t sigma_index) const {
    return cells[rate_index * sigma_values.size() + sigma_index];
  }
};

// Seed for one sweep cell, keyed on the cell's parameter values so that
// growing the grid never changes existing cells.
std::uint64_t cell_seed(std::uint64_t master_seed, double rate, double sigma);

// Fraction of paths absorbed at the upper boundary within the horizon.
// Paths use keys (master_seed, 0..n_paths-1); the result does not depend on
// the worker count.
EscapeEstimate estimate_escape(const ModelParams& params, const TimeGrid& grid,
                               std::uint64_t n_paths, std::uint64_t master_seed,
                               double ci_level = 0.95, unsigned threads = 0);

// Hit times of exactly the escaped paths, in path-index order.
std::vector<double> collect_hitting_times(const ModelParams& params, const TimeGrid& grid,
                                          std::uint64_t n_paths, std::uint64_t master_seed,
                                          unsigned threads = 0);

// Cross-sectional mean and sample standard deviation of x at n_sample_points
// times spanning [0, T]. Escaped paths contribute x = 1 from their hit time
// on. Requires n_paths >= 2.
PathStatistics path_statistics(const ModelParams& params, const TimeGrid& grid,
                               std::uint64_t n_paths, std::uint64_t master_seed,
                               std::uint64_t n_sample_points, unsigned threads = 0);

// Escape estimates over the (rate, sigma) grid; one derived seed per cell.
// Invoked per finished cell when on_cell is set (progress reporting).
using SweepCellCallback = void (*)(const EscapeEstimate& cell, double rate, double sigma,
                                   std::size_t done, std::size_t total, void* user);

SweepTable sweep(std::span<const double> sigma_values, std::span<const double> r_values,
                 const ModelParams& shared, const TimeGrid& grid, std::uint64_t n_paths,
                 std::uint64_t master_seed, double ci_level = 0.95, unsigned threads = 0,
                 SweepCellCallback on_cell = nullptr, void* user = nullptr);

}  // namespace tipsim
