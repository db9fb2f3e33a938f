#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "tipsim/model.hpp"
#include "tipsim/rng.hpp"

namespace tipsim {

struct TimeGrid {
  double h = 5e-5;                 // time step
  std::uint64_t n_steps = 200000;  // N; horizon T = h*N

  double horizon() const { return h * static_cast<double>(n_steps); }
};

// Throws std::invalid_argument on a non-positive step or zero step count.
const TimeGrid& validate(const TimeGrid& g);

struct TrajectoryPoint {
  double t;
  double x;
  double y;
};

struct PathOutcome {
  std::optional<std::uint64_t> hit_step;  // first step with pre-truncation x >= 1
  std::optional<double> hit_time;         // h * hit_step
  std::uint64_t floor_events = 0;         // lower clamps applied at 0
  double x_final = 0.0;                   // state at the horizon (1 once absorbed)
  double y_final = 0.0;                   // source level at the horizon
  std::vector<TrajectoryPoint> trajectory;

  bool escaped() const { return hit_step.has_value(); }
};

// One explicit step of the state equation. A state already at or above 1 is
// held (absorbed); otherwise the Euler value is floored at 0. The floor is a
// numerical guard only: the raw step can land slightly below 0 near the lower
// boundary even when the continuous process cannot reach it.
inline double em_step(double x, double y, double h, double sigma, double w) {
  if (x >= 1.0) return x;
  const double raw = x + drift(x, y) * h + diffusion_amplitude(x, sigma) * std::sqrt(h) * w;
  return std::max(raw, 0.0);
}

// One explicit step of the logistic source equation.
inline double logistic_step(double y, double h, double rate, double delta) {
  return y + source_rhs(y, rate, delta) * h;
}

namespace detail {

struct PathCoreResult {
  std::optional<std::uint64_t> hit_step;
  std::uint64_t floor_events = 0;
  double x = 0.0;
  double y = 0.0;
};

// Shared stepping kernel. on_step(step_index, x, y) is invoked with the state
// at step 0 and after every update; the loop stops at the escape step (the
// first step whose raw Euler value reaches 1; the stored state is then
// exactly 1). Escape is decided on the pre-floor value, so the 0-floor never
// masks a crossing.
template <class OnStep>
PathCoreResult run_path_core(const ModelParams& p, const TimeGrid& g,
                             NormalStream stream, OnStep&& on_step) {
  const double h = g.h;
  const double sqrt_h = std::sqrt(h);
  PathCoreResult out;
  double x = p.x0;
  double y = p.y0;
  on_step(std::uint64_t{0}, x, y);
  for (std::uint64_t n = 0; n < g.n_steps; ++n) {
    const double w = stream.next();
    double xn = x + drift(x, y) * h + diffusion_amplitude(x, p.sigma) * sqrt_h * w;
    y = logistic_step(y, h, p.rate, p.delta);
    if (xn >= 1.0) {
      out.hit_step = n + 1;
      x = 1.0;
      on_step(n + 1, x, y);
      break;
    }
    if (xn < 0.0) {
      xn = 0.0;
      ++out.floor_events;
    }
    x = xn;
    on_step(n + 1, x, y);
  }
  out.x = x;
  out.y = y;
  return out;
}

}  // namespace detail

// Simulates one path on the grid. With record_stride > 0 the trajectory is
// sampled every record_stride steps (plus the escape step and the final
// step); after an escape the stored x stays exactly 1 while y keeps evolving.
PathOutcome simulate_path(const ModelParams& params, const TimeGrid& grid,
                          StreamKey key, std::uint64_t record_stride = 0);

}  // namespace tipsim
