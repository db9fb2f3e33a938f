#include "tipsim/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tipsim {

namespace {

[[noreturn]] void fail(const char* what, double value) {
  std::ostringstream msg;
  msg << "invalid model parameter: " << what << " (got " << value << ")";
  throw std::invalid_argument(msg.str());
}

}  // namespace

const ModelParams& validate(const ModelParams& p) {
  if (!std::isfinite(p.sigma) || p.sigma < 0.0) fail("sigma must be finite and >= 0", p.sigma);
  if (!std::isfinite(p.rate) || p.rate <= 0.0) fail("rate must be finite and > 0", p.rate);
  if (!std::isfinite(p.delta) || p.delta <= 0.0 || p.delta >= 1.0)
    fail("delta must lie strictly inside (0,1)", p.delta);
  if (!std::isfinite(p.x0) || p.x0 <= 0.0 || p.x0 >= 1.0)
    fail("x0 must lie strictly inside (0,1)", p.x0);
  if (!std::isfinite(p.y0)) fail("y0 must be finite", p.y0);
  return p;
}

BoundaryClassification feller_classify(double r, double sigma) {
  const double s2 = sigma * sigma;
  BoundaryClassification c;
  c.lower_attainable = 2.0 * r < s2;
  c.upper_attainable = 2.0 * (1.0 - r) < s2;
  c.confined = !c.lower_attainable && !c.upper_attainable;
  return c;
}

double source_exact(double t, double rate, double delta, double y0) {
  const double cap = 1.0 - delta;
  // y(t) = K y0 / (y0 + (K - y0) e^{-Rt}); the denominator stays positive
  // for y0 > 0 and t >= 0.
  return cap * y0 / (y0 + (cap - y0) * std::exp(-rate * t));
}

}  // namespace tipsim
