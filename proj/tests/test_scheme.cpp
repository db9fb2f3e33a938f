#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "oracles.hpp"
#include "tipsim/model.hpp"
#include "tipsim/scheme.hpp"

using tipsim::ModelParams;
using tipsim::TimeGrid;

namespace {

ModelParams params_with(double sigma, double rate) {
  auto p = ModelParams::defaults();
  p.sigma = sigma;
  p.rate = rate;
  return p;
}

}  // namespace

TEST_CASE("time grid validation") {
  CHECK_NOTHROW(tipsim::validate(TimeGrid{}));
  CHECK(TimeGrid{}.h == 5e-5);
  CHECK(TimeGrid{}.n_steps == 200000);
  CHECK(TimeGrid{}.horizon() == doctest::Approx(10.0).epsilon(1e-15));
  CHECK_THROWS_AS(tipsim::validate(TimeGrid{0.0, 100}), std::invalid_argument);
  CHECK_THROWS_AS(tipsim::validate(TimeGrid{-1e-3, 100}), std::invalid_argument);
  CHECK_THROWS_AS(tipsim::validate(TimeGrid{1e-3, 0}), std::invalid_argument);
}

TEST_CASE("em_step worked examples") {
  // absorbing branch holds the state
  CHECK(tipsim::em_step(1.0, 0.3, 0.1, 0.5, -2.0) == 1.0);
  CHECK(tipsim::em_step(1.0, 2.0, 0.01, 0.0, 3.0) == 1.0);
  // drift-only arithmetic
  CHECK(tipsim::em_step(0.1, 1.5, 0.1, 0.0, 123.0) == doctest::Approx(0.24).epsilon(1e-15));
  // full arithmetic: 0.5 + 0 + 0.4*0.5*0.1*1.0
  CHECK(tipsim::em_step(0.5, 0.5, 0.01, 0.4, 1.0) == doctest::Approx(0.52).epsilon(1e-15));
  // lower floor engages
  CHECK(tipsim::em_step(0.01, 0.5, 1e-4, 0.8, -100.0) == 0.0);
}

TEST_CASE("logistic_step worked examples") {
  CHECK(tipsim::logistic_step(0.5, 0.1, 0.7, 0.5) == 0.5);  // equilibrium preserved exactly
  CHECK(tipsim::logistic_step(1.5, 5e-5, 0.5, 0.5) == doctest::Approx(1.499925).epsilon(1e-15));
}

TEST_CASE("iterated logistic_step matches the closed form at the horizon") {
  const TimeGrid grid{};  // h = 5e-5, N = 200000
  for (double rate : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    double y = 1.5;
    for (std::uint64_t n = 0; n < grid.n_steps; ++n)
      y = tipsim::logistic_step(y, grid.h, rate, 0.5);
    CAPTURE(rate);
    CHECK(std::abs(y - tipsim::source_exact(10.0, rate, 0.5, 1.5)) < 1e-4);
  }
}

TEST_CASE("simulate_path escape flag matches the deterministic threshold at sigma=0") {
  const TimeGrid grid{1e-3, 10000};
  const auto slow = tipsim::simulate_path(params_with(0.0, 0.1), grid, {1, 0});
  CHECK(slow.escaped());
  CHECK(slow.hit_time.has_value());
  CHECK(*slow.hit_time == grid.h * static_cast<double>(*slow.hit_step));
  CHECK(*slow.hit_time > 0.0);
  CHECK(*slow.hit_time <= grid.horizon());

  const auto fast = tipsim::simulate_path(params_with(0.0, 0.5), grid, {1, 0});
  CHECK_FALSE(fast.escaped());
  CHECK(fast.x_final < 1.0);
}

TEST_CASE("a state started next to the boundary escapes almost immediately") {
  auto p = params_with(0.8, 0.1);
  p.x0 = 1.0 - 1e-9;
  const TimeGrid grid{1e-3, 10000};
  const auto out = tipsim::simulate_path(p, grid, {7, 3});
  REQUIRE(out.escaped());
  CHECK(*out.hit_step <= 5);
  CHECK(*out.hit_time == grid.h * static_cast<double>(*out.hit_step));
  CHECK(out.x_final == 1.0);
}

TEST_CASE("absorption: recorded X values stay exactly 1 after the hit") {
  const TimeGrid grid{1e-3, 10000};
  const auto out = tipsim::simulate_path(params_with(0.4, 0.1), grid, {11, 5}, 50);
  REQUIRE(out.escaped());
  const double tau = *out.hit_time;
  bool saw_absorbed_sample = false;
  for (const auto& pt : out.trajectory) {
    if (pt.t >= tau) {
      CHECK(pt.x == 1.0);
      saw_absorbed_sample = true;
    }
  }
  CHECK(saw_absorbed_sample);
  CHECK(out.x_final == 1.0);
  // the final recorded point sits at the horizon: y keeps evolving after tau
  CHECK(out.trajectory.back().t == doctest::Approx(grid.horizon()).epsilon(1e-12));
  CHECK(out.trajectory.back().y < out.trajectory.front().y);
}

TEST_CASE("state bound: every recorded X lies in [0,1]") {
  for (const double sigma : {0.2, 0.8}) {
    for (const std::uint64_t path : {0ull, 1ull, 2ull}) {
      const auto out = tipsim::simulate_path(params_with(sigma, 0.3), TimeGrid{1e-3, 10000},
                                             {5, path}, 1);
      for (const auto& pt : out.trajectory) {
        CHECK(pt.x >= 0.0);
        CHECK(pt.x <= 1.0);
      }
    }
  }
}

TEST_CASE("floor events are counted when the lower guard engages") {
  // Source pinned at its carrying level and 2r < sigma^2: the frozen process
  // can reach 0, so discrete sub-zero proposals occur and must be clamped.
  auto p = params_with(1.2, 0.1);
  p.x0 = 0.01;
  p.y0 = 0.5;
  const TimeGrid grid{1e-3, 10000};
  std::uint64_t total = 0;
  for (std::uint64_t path = 0; path < 20; ++path)
    total += tipsim::simulate_path(p, grid, {99, path}).floor_events;
  CHECK(total > 0);
}

TEST_CASE("sigma=0 paths are key-independent") {
  const TimeGrid grid{1e-3, 2000};
  const auto a = tipsim::simulate_path(params_with(0.0, 0.3), grid, {1, 0}, 10);
  const auto b = tipsim::simulate_path(params_with(0.0, 0.3), grid, {777, 123456}, 10);
  REQUIRE(a.trajectory.size() == b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    CHECK(a.trajectory[i].x == b.trajectory[i].x);
    CHECK(a.trajectory[i].y == b.trajectory[i].y);
  }
}

TEST_CASE("sigma=0 reduction: Euler trajectory is within 10h of the RK4 oracle") {
  const auto p = params_with(0.0, 0.5);  // non-tipping, smooth over [0,10]
  double prev_err = 0.0;
  for (const double h : {1e-3, 1e-4}) {
    const auto n = static_cast<std::uint64_t>(std::llround(10.0 / h));
    const auto path = tipsim::simulate_path(p, TimeGrid{h, n}, {0, 0}, 1);
    const auto ref = oracle::rk4_pair(p.rate, p.delta, p.x0, p.y0, 10.0, n);
    REQUIRE(path.trajectory.size() == ref.size());
    double err = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i)
      err = std::max(err, std::abs(path.trajectory[i].x - ref[i].x));
    CAPTURE(h);
    CHECK(err < 10.0 * h);
    if (prev_err != 0.0) {
      const double ratio = prev_err / err;  // O(h) convergence => ~10
      CHECK(ratio > 7.0);
      CHECK(ratio < 13.0);
    }
    prev_err = err;
  }
}

TEST_CASE("Y sequence decreases strictly and stays in (1-delta, 1+delta]") {
  // h*R < 1 regime, y0 = 1+delta
  const auto out = tipsim::simulate_path(params_with(0.2, 0.5), TimeGrid{1e-3, 10000}, {3, 4}, 1);
  double prev = 1.5;
  for (std::size_t i = 1; i < out.trajectory.size(); ++i) {
    const double y = out.trajectory[i].y;
    CHECK(y < prev);
    CHECK(y > 0.5);
    prev = y;
  }
  CHECK(out.trajectory.front().y == 1.5);
}

TEST_CASE("determinism: identical inputs give bit-identical outcomes") {
  const TimeGrid grid{1e-3, 5000};
  const auto a = tipsim::simulate_path(params_with(0.4, 0.2), grid, {42, 17}, 25);
  const auto b = tipsim::simulate_path(params_with(0.4, 0.2), grid, {42, 17}, 25);
  CHECK(a.hit_step == b.hit_step);
  CHECK(a.hit_time == b.hit_time);
  CHECK(a.floor_events == b.floor_events);
  CHECK(a.x_final == b.x_final);
  CHECK(a.y_final == b.y_final);
  REQUIRE(a.trajectory.size() == b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    CHECK(a.trajectory[i].x == b.trajectory[i].x);
    CHECK(a.trajectory[i].y == b.trajectory[i].y);
  }
}

TEST_CASE("record stride: trajectory includes start, stride multiples, and horizon") {
  const TimeGrid grid{0.1, 100};
  const auto out = tipsim::simulate_path(params_with(0.0, 0.5), grid, {0, 0}, 30);
  REQUIRE_FALSE(out.escaped());
  // steps 0, 30, 60, 90, 100
  REQUIRE(out.trajectory.size() == 5);
  CHECK(out.trajectory[0].t == 0.0);
  CHECK(out.trajectory[1].t == doctest::Approx(3.0));
  CHECK(out.trajectory[4].t == doctest::Approx(10.0));
  CHECK(out.trajectory[0].x == 0.1);
  CHECK(out.trajectory[0].y == 1.5);
}
