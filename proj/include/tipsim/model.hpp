#pragma once

#include <algorithm>
#include <cmath>

namespace tipsim {

// Parameters of the bounded diffusion driven by a decaying logistic source.
// The state X lives in [0,1]; the source level Y relaxes from y0 toward the
// carrying level 1 - delta at speed controlled by `rate`.
struct ModelParams {
  double sigma = 0.2;  // noise amplitude, >= 0
  double rate = 0.1;   // logistic rate R, > 0
  double delta = 0.5;  // offset of the source endpoints from 1, in (0,1)
  double x0 = 0.1;     // initial state, in (0,1)
  double y0 = 1.5;     // initial source level, defaults to 1 + delta

  double carrying_capacity() const { return 1.0 - delta; }

  // Defaults with y0 pinned to 1 + delta.
  static ModelParams defaults() {
    ModelParams p;
    p.y0 = 1.0 + p.delta;
    return p;
  }
};

struct BoundaryClassification {
  bool lower_attainable = false;
  bool upper_attainable = false;
  bool confined = false;  // neither boundary attainable
};

// Throws std::invalid_argument naming the violated constraint; returns its
// argument unchanged otherwise.
const ModelParams& validate(const ModelParams& p);

// Attainability of the interval endpoints for a fixed source level r:
// the lower end is reachable iff 2r < sigma^2, the upper end iff
// 2(1-r) < sigma^2.
BoundaryClassification feller_classify(double r, double sigma);

inline double drift(double x, double y) { return y - x; }

// Noise coefficient sigma*sqrt(x(1-x)). The radicand is clamped at zero so
// states nudged slightly outside [0,1] by the discrete scheme stay legal.
inline double diffusion_amplitude(double x, double sigma) {
  return sigma * std::sqrt(std::max(x * (1.0 - x), 0.0));
}

// Right-hand side of the logistic source equation dY/dt = R*Y*(1 - Y/(1-delta)).
inline double source_rhs(double y, double rate, double delta) {
  return rate * y * (1.0 - y / (1.0 - delta));
}

// Closed-form logistic solution with Y(0) = y0; requires y0 > 0, t >= 0.
// Strictly decreasing toward the carrying level when y0 exceeds it.
double source_exact(double t, double rate, double delta, double y0);

}  // namespace tipsim
