#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tipsim/model.hpp"
#include "tipsim/scheme.hpp"

namespace tipsim {

// Noise-free analysis of the coupled system: RK4 integration with crossing
// detection at x = 1, and bisection for the critical rate below which the
// system tips.

struct DeterministicRun {
  double max_x = 0.0;
  std::optional<double> t_c;  // first time x reaches 1
  std::vector<TrajectoryPoint> trajectory;

  bool tipped() const { return t_c.has_value(); }
};

struct CriticalRateResult {
  double r_low = 0.0;        // tips
  double r_high = 0.0;       // does not tip
  double t_c_at_r_low = 0.0; // tipping time of the final sub-critical run
  std::uint64_t evaluations = 0;  // bisection steps beyond the two probes

  double width() const { return r_high - r_low; }
};

struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integrates dx/dt = y - x, dy/dt = source_rhs(y) with classical RK4 at a
// fixed step (params.sigma is ignored). Stops at the first up-crossing of 1,
// refining t_c by linear interpolation between the bracketing grid points.
// A crossing landing exactly on the horizon counts as tipped. With
// record_stride > 0 the trajectory is sampled every record_stride steps.
DeterministicRun integrate_deterministic(const ModelParams& params, double horizon,
                                         double step, std::uint64_t record_stride = 0);

// Bisection on the tipping predicate over [probe_low, probe_high]. Throws
// BracketError unless the low probe tips and the high probe does not. The
// returned bracket has width <= tolerance.
CriticalRateResult critical_rate(const ModelParams& params_template, double horizon,
                                 double tolerance, double probe_low = 0.01,
                                 double probe_high = 1.0, double step = 1e-4);

}  // namespace tipsim
