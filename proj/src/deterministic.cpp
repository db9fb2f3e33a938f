#include "tipsim/deterministic.hpp"

#include <cmath>
#include <sstream>

namespace tipsim {

namespace {

struct State {
  double x;
  double y;
};

inline State rhs(const State& s, double rate, double delta) {
  return {drift(s.x, s.y), source_rhs(s.y, rate, delta)};
}

inline State rk4_step(const State& s, double h, double rate, double delta) {
  const State k1 = rhs(s, rate, delta);
  const State k2 = rhs({s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y}, rate, delta);
  const State k3 = rhs({s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y}, rate, delta);
  const State k4 = rhs({s.x + h * k3.x, s.y + h * k3.y}, rate, delta);
  return {s.x + (h / 6.0) * (k1.x + 2.0 * (k2.x + k3.x) + k4.x),
          s.y + (h / 6.0) * (k1.y + 2.0 * (k2.y + k3.y) + k4.y)};
}

}  // namespace

DeterministicRun integrate_deterministic(const ModelParams& params, double horizon,
                                         double step, std::uint64_t record_stride) {
  {
    ModelParams checked = params;
    checked.sigma = 0.0;
    validate(checked);
  }
  if (!(horizon > 0.0)) throw std::invalid_argument("integrate_deterministic: horizon must be > 0");
  if (!(step > 0.0)) throw std::invalid_argument("integrate_deterministic: step must be > 0");

  const std::uint64_t n_steps =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(horizon / step)));
  const double h = horizon / static_cast<double>(n_steps);

  DeterministicRun run;
  State s{params.x0, params.y0};
  run.max_x = s.x;
  if (record_stride > 0) run.trajectory.push_back({0.0, s.x, s.y});

  for (std::uint64_t n = 0; n < n_steps; ++n) {
    const State prev = s;
    s = rk4_step(s, h, params.rate, params.delta);
    if (s.x > run.max_x) run.max_x = s.x;
    const double t = h * static_cast<double>(n + 1);
    if (s.x >= 1.0) {
      // Refine the crossing between the bracketing grid points.
      const double frac = (1.0 - prev.x) / (s.x - prev.x);
      run.t_c = h * static_cast<double>(n) + h * frac;
      if (record_stride > 0) run.trajectory.push_back({t, s.x, s.y});
      return run;
    }
    if (record_stride > 0 && ((n + 1) % record_stride == 0 || n + 1 == n_steps))
      run.trajectory.push_back({t, s.x, s.y});
  }
  return run;
}

CriticalRateResult critical_rate(const ModelParams& params_template, double horizon,
                                 double tolerance, double probe_low, double probe_high,
                                 double step) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("critical_rate: tolerance must be > 0");
  if (!(probe_low > 0.0 && probe_low < probe_high))
    throw std::invalid_argument("critical_rate: need 0 < probe_low < probe_high");

  auto run_at = [&](double r) {
    ModelParams p = params_template;
    p.sigma = 0.0;
    p.rate = r;
    return integrate_deterministic(p, horizon, step);
  };

  DeterministicRun low_run = run_at(probe_low);
  const DeterministicRun high_run = run_at(probe_high);
  if (!low_run.tipped() || high_run.tipped()) {
    std::ostringstream msg;
    msg << "critical_rate: probes do not bracket a tipping threshold "
        << "(tipped(" << probe_low << ") = " << low_run.tipped() << ", tipped(" << probe_high
        << ") = " << high_run.tipped() << ")";
    throw BracketError(msg.str());
  }

  CriticalRateResult result;
  result.r_low = probe_low;
  result.r_high = probe_high;
  double t_c_low = *low_run.t_c;
  while (result.r_high - result.r_low > tolerance) {
    const double mid = 0.5 * (result.r_low + result.r_high);
    const DeterministicRun mid_run = run_at(mid);
    ++result.evaluations;
    if (mid_run.tipped()) {
      result.r_low = mid;
      t_c_low = *mid_run.t_c;
    } else {
      result.r_high = mid;
    }
  }
  result.t_c_at_r_low = t_c_low;
  return result;
}

}  // namespace tipsim
