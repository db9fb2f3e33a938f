#include "tipsim/scheme.hpp"

#include <stdexcept>

namespace tipsim {

const TimeGrid& validate(const TimeGrid& g) {
  if (!std::isfinite(g.h) || g.h <= 0.0)
    throw std::invalid_argument("time grid: step h must be finite and > 0");
  if (g.n_steps == 0) throw std::invalid_argument("time grid: n_steps must be >= 1");
  return g;
}

PathOutcome simulate_path(const ModelParams& params, const TimeGrid& grid,
                          StreamKey key, std::uint64_t record_stride) {
  validate(params);
  validate(grid);

  PathOutcome outcome;
  NormalStream stream(key);

  if (record_stride == 0) {
    const auto core = detail::run_path_core(params, grid, stream,
                                            [](std::uint64_t, double, double) {});
    outcome.hit_step = core.hit_step;
    outcome.floor_events = core.floor_events;
    outcome.x_final = core.x;
    double y = core.y;
    if (core.hit_step) {
      // Absorbed early: y still follows its own equation to the horizon.
      for (std::uint64_t n = *core.hit_step; n < grid.n_steps; ++n)
        y = logistic_step(y, grid.h, params.rate, params.delta);
    }
    outcome.y_final = y;
  } else {
    auto record = [&](std::uint64_t step, double x, double y) {
      outcome.trajectory.push_back({grid.h * static_cast<double>(step), x, y});
    };
    const auto core = detail::run_path_core(
        params, grid, stream, [&](std::uint64_t step, double x, double y) {
          if (step % record_stride == 0 || step == grid.n_steps) record(step, x, y);
        });
    outcome.hit_step = core.hit_step;
    outcome.floor_events = core.floor_events;
    outcome.x_final = core.x;
    double y = core.y;
    if (core.hit_step) {
      // Absorbed: x is pinned at 1, y still follows its own equation.
      const std::uint64_t hit = *core.hit_step;
      if (hit % record_stride != 0 && hit != grid.n_steps) record(hit, 1.0, core.y);
      for (std::uint64_t n = hit; n < grid.n_steps; ++n) {
        y = logistic_step(y, grid.h, params.rate, params.delta);
        const std::uint64_t step = n + 1;
        if (step % record_stride == 0 || step == grid.n_steps) record(step, 1.0, y);
      }
    }
    outcome.y_final = y;
  }

  if (outcome.hit_step) outcome.hit_time = grid.h * static_cast<double>(*outcome.hit_step);
  return outcome;
}

}  // namespace tipsim
