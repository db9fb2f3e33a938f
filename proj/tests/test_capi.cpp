// Exercises the shared library strictly through its C interface.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "tipsim.h"

TEST_CASE("version and status names") {
  CHECK(std::string(tipsim_version()) == "0.1.0");
  CHECK(std::string(tipsim_status_name(TIPSIM_OK)) == "ok");
  CHECK(std::string(tipsim_status_name(TIPSIM_ERR_NULL_ARGUMENT)).find("null") !=
        std::string::npos);
  CHECK(tipsim_status_name(static_cast<tipsim_status>(999)) != nullptr);
}

TEST_CASE("parameter defaults and validation") {
  tipsim_params p;
  tipsim_params_init(&p);
  CHECK(p.sigma == 0.2);
  CHECK(p.rate == 0.1);
  CHECK(p.delta == 0.5);
  CHECK(p.x0 == 0.1);
  CHECK(p.y0 == 1.5);
  CHECK(tipsim_params_validate(&p) == TIPSIM_OK);

  p.sigma = -1.0;
  CHECK(tipsim_params_validate(&p) == TIPSIM_ERR_INVALID_PARAMS);
  CHECK(std::strlen(tipsim_last_error()) > 0);
  CHECK(tipsim_params_validate(nullptr) == TIPSIM_ERR_NULL_ARGUMENT);

  tipsim_grid g;
  tipsim_grid_init(&g);
  CHECK(g.h == 5e-5);
  CHECK(g.n_steps == 200000);
  CHECK(tipsim_grid_validate(&g) == TIPSIM_OK);
  g.h = 0.0;
  CHECK(tipsim_grid_validate(&g) == TIPSIM_ERR_INVALID_PARAMS);
}

TEST_CASE("boundary classification") {
  tipsim_boundary b;
  REQUIRE(tipsim_classify(0.5, 1.0, &b) == TIPSIM_OK);
  CHECK(b == TIPSIM_BOUNDARY_CONFINED);
  REQUIRE(tipsim_classify(0.9, 0.5, &b) == TIPSIM_OK);
  CHECK(b == TIPSIM_BOUNDARY_UPPER_ATTAINABLE);
  REQUIRE(tipsim_classify(0.1, 0.8, &b) == TIPSIM_OK);
  CHECK(b == TIPSIM_BOUNDARY_LOWER_ATTAINABLE);
  REQUIRE(tipsim_classify(0.5, 1.2, &b) == TIPSIM_OK);
  CHECK(b == TIPSIM_BOUNDARY_BOTH_ATTAINABLE);
  CHECK(tipsim_classify(0.5, 1.0, nullptr) == TIPSIM_ERR_NULL_ARGUMENT);
}

TEST_CASE("pure helpers") {
  CHECK(tipsim_drift(0.3, 0.5) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(tipsim_diffusion_amplitude(0.5, 0.4) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(tipsim_source_rhs(0.5, 0.7, 0.5) == 0.0);
  CHECK(tipsim_source_exact(0.0, 0.1, 0.5, 1.5) == doctest::Approx(1.5).epsilon(1e-15));
  // argument order: (x, y, sigma, h, w)
  CHECK(tipsim_em_step(0.1, 1.5, 0.0, 0.1, 9.9) == doctest::Approx(0.24).epsilon(1e-15));
  CHECK(tipsim_em_step(0.5, 0.5, 0.4, 0.01, 1.0) == doctest::Approx(0.52).epsilon(1e-15));
  CHECK(tipsim_em_step(1.0, 0.5, 0.4, 0.01, 1.0) == 1.0);
  // argument order: (y, rate, delta, h)
  CHECK(tipsim_logistic_step(1.5, 0.5, 0.5, 5e-5) == doctest::Approx(1.499925).epsilon(1e-15));
}

TEST_CASE("inverse normal CDF and normal streams") {
  double x = 0.0;
  REQUIRE(tipsim_inverse_normal_cdf(0.975, &x) == TIPSIM_OK);
  CHECK(x == doctest::Approx(1.959963984540054).epsilon(1e-12));
  REQUIRE(tipsim_inverse_normal_cdf(0.5, &x) == TIPSIM_OK);
  CHECK(x == 0.0);
  CHECK(tipsim_inverse_normal_cdf(0.0, &x) == TIPSIM_ERR_INVALID_ARGUMENT);
  CHECK(tipsim_inverse_normal_cdf(1.0, &x) == TIPSIM_ERR_INVALID_ARGUMENT);
  CHECK(tipsim_inverse_normal_cdf(0.5, nullptr) == TIPSIM_ERR_NULL_ARGUMENT);

  double a[8], b[8];
  REQUIRE(tipsim_standard_normals(42, 7, 8, a) == TIPSIM_OK);
  REQUIRE(tipsim_standard_normals(42, 7, 8, b) == TIPSIM_OK);
  for (int i = 0; i < 8; ++i) CHECK(a[i] == b[i]);
  REQUIRE(tipsim_standard_normals(42, 8, 8, b) == TIPSIM_OK);
  int differing = 0;
  for (int i = 0; i < 8; ++i) differing += a[i] != b[i];
  CHECK(differing == 8);
  CHECK(tipsim_standard_normals(42, 7, 8, nullptr) == TIPSIM_ERR_NULL_ARGUMENT);
}

TEST_CASE("single path results") {
  tipsim_params p;
  tipsim_params_init(&p);
  tipsim_grid g{1e-3, 10000};

  p.sigma = 0.0;
  tipsim_path_result escaped;
  REQUIRE(tipsim_simulate_path(&p, &g, 0, 0, &escaped) == TIPSIM_OK);
  CHECK(escaped.escaped != 0);
  CHECK(escaped.hit_time == doctest::Approx(1e-3 * static_cast<double>(escaped.hit_step))
                                .epsilon(1e-15));
  CHECK(escaped.x_final == 1.0);
  CHECK(escaped.y_final < 1.5);

  p.rate = 0.5;
  tipsim_path_result stayed;
  REQUIRE(tipsim_simulate_path(&p, &g, 0, 0, &stayed) == TIPSIM_OK);
  CHECK(stayed.escaped == 0);
  CHECK(stayed.x_final < 1.0);

  p.sigma = -0.5;
  CHECK(tipsim_simulate_path(&p, &g, 0, 0, &stayed) == TIPSIM_ERR_INVALID_PARAMS);
  CHECK(tipsim_simulate_path(nullptr, &g, 0, 0, &stayed) == TIPSIM_ERR_NULL_ARGUMENT);
}

TEST_CASE("trajectory handles") {
  tipsim_params p;
  tipsim_params_init(&p);
  p.sigma = 0.4;
  tipsim_grid g{1e-2, 100};

  tipsim_trajectories_t* traj = nullptr;
  REQUIRE(tipsim_simulate_trajectories(&p, &g, 2, 1, 10, &traj) == TIPSIM_OK);
  REQUIRE(traj != nullptr);
  CHECK(tipsim_trajectories_count(traj) == 2);
  CHECK(tipsim_trajectory_size(traj, 0) >= 11);

  double t = -1.0, x = -1.0, y = -1.0;
  REQUIRE(tipsim_trajectory_point(traj, 0, 0, &t, &x, &y) == TIPSIM_OK);
  CHECK(t == 0.0);
  CHECK(x == 0.1);
  CHECK(y == 1.5);
  CHECK(tipsim_trajectory_point(traj, 5, 0, &t, &x, &y) == TIPSIM_ERR_INVALID_ARGUMENT);

  tipsim_path_result outcome;
  REQUIRE(tipsim_trajectory_outcome(traj, 1, &outcome) == TIPSIM_OK);
  CHECK((outcome.escaped == 0 || outcome.escaped == 1));

  char* csv = nullptr;
  REQUIRE(tipsim_trajectories_csv(traj, &csv) == TIPSIM_OK);
  REQUIRE(csv != nullptr);
  CHECK(std::string(csv).rfind("t,X,Y,path_id\n", 0) == 0);
  tipsim_string_free(csv);
  tipsim_trajectories_free(traj);
  tipsim_trajectories_free(nullptr);  // no-op
}

TEST_CASE("deterministic run and critical rate") {
  tipsim_params p;
  tipsim_params_init(&p);
  p.sigma = 0.0;

  tipsim_deterministic_result slow;
  REQUIRE(tipsim_integrate_deterministic(&p, 10.0, 1e-4, &slow) == TIPSIM_OK);
  CHECK(slow.tipped != 0);
  CHECK(slow.t_c > 0.0);
  CHECK(slow.t_c < 10.0);

  p.rate = 0.5;
  tipsim_deterministic_result fast;
  REQUIRE(tipsim_integrate_deterministic(&p, 10.0, 1e-4, &fast) == TIPSIM_OK);
  CHECK(fast.tipped == 0);
  CHECK(fast.max_x < 1.0);
  CHECK(tipsim_integrate_deterministic(&p, -1.0, 1e-4, &fast) == TIPSIM_ERR_INVALID_PARAMS);

  tipsim_critical_rate_result rc;
  REQUIRE(tipsim_critical_rate(&p, 10.0, 1e-4, 0.01, 1.0, 1e-4, &rc) == TIPSIM_OK);
  CHECK(rc.r_low > 0.1);
  CHECK(rc.r_high < 0.2);
  CHECK(rc.r_high - rc.r_low <= 1e-4);
  CHECK(rc.evaluations <= 15);
  CHECK(tipsim_critical_rate(&p, 10.0, 1e-4, 0.5, 1.0, 1e-4, &rc) == TIPSIM_ERR_NO_BRACKET);
  CHECK(std::string(tipsim_last_error()).find("bracket") != std::string::npos);

  char* json = nullptr;
  REQUIRE(tipsim_critical_rate_json(&p, 10.0, 1e-4, &rc, &json) == TIPSIM_OK);
  const auto doc = nlohmann::json::parse(json);
  CHECK(doc["seed"].is_null());
  CHECK(doc["results"]["r_low"] == rc.r_low);
  CHECK(doc["results"]["width"] == doctest::Approx(rc.r_high - rc.r_low).epsilon(1e-15));
  tipsim_string_free(json);
}

TEST_CASE("escape estimation, serialization round-trip") {
  tipsim_params p;
  tipsim_params_init(&p);
  p.sigma = 0.4;
  tipsim_grid g{1e-3, 1000};

  tipsim_escape_estimate est;
  REQUIRE(tipsim_estimate_escape(&p, &g, 1000, 42, 0.95, 0, &est) == TIPSIM_OK);
  CHECK(est.n_paths == 1000);
  CHECK(est.p_hat == static_cast<double>(est.n_escaped) / 1000.0);
  CHECK(est.ci_low <= est.p_hat);
  CHECK(est.ci_high >= est.p_hat);
  CHECK(tipsim_estimate_escape(&p, &g, 0, 42, 0.95, 0, &est) == TIPSIM_ERR_INVALID_ARGUMENT);

  char* csv = nullptr;
  REQUIRE(tipsim_escape_csv(&p, &est, &csv) == TIPSIM_OK);
  CHECK(std::string(csv).rfind("R,sigma,p_hat,ci_low,ci_high,n_paths,n_escaped\n", 0) == 0);
  tipsim_string_free(csv);

  char* json = nullptr;
  REQUIRE(tipsim_escape_json(&p, &g, 42, &est, &json) == TIPSIM_OK);
  const auto doc = nlohmann::json::parse(json);
  CHECK(doc.size() == 5);
  CHECK(doc["seed"] == 42);
  CHECK(doc["params"]["sigma"] == 0.4);
  CHECK(doc["grid"]["n_steps"] == 1000);
  CHECK(doc["results"]["n_escaped"] == est.n_escaped);
  CHECK(doc["results"]["ci_level"] == 0.95);
  CHECK(std::string(doc["tool_version"]).find("0.1.0") != std::string::npos);
  tipsim_string_free(json);
}

TEST_CASE("hitting times and histograms") {
  tipsim_params p;
  tipsim_params_init(&p);
  p.sigma = 0.4;
  tipsim_grid g{1e-3, 1000};

  tipsim_times_t* times = nullptr;
  REQUIRE(tipsim_collect_hitting_times(&p, &g, 2000, 11, 0, &times) == TIPSIM_OK);
  REQUIRE(times != nullptr);
  const uint64_t n = tipsim_times_count(times);
  CHECK(n > 0);
  CHECK(n < 2000);
  const double* data = tipsim_times_data(times);
  REQUIRE(data != nullptr);
  for (uint64_t i = 0; i < n; ++i) {
    CHECK(data[i] > 0.0);
    CHECK(data[i] <= 1.0);
  }

  tipsim_histogram_t* hist = nullptr;
  REQUIRE(tipsim_histogram_uniform(times, 0.0, 1.0, 10, &hist) == TIPSIM_OK);
  CHECK(tipsim_histogram_bins(hist) == 10);
  CHECK(tipsim_histogram_total(hist) == n);
  CHECK(tipsim_histogram_out_of_range(hist) == 0);
  double left = -1.0, right = -1.0;
  uint64_t count = 0;
  uint64_t sum = 0;
  for (uint64_t i = 0; i < 10; ++i) {
    REQUIRE(tipsim_histogram_bin(hist, i, &left, &right, &count) == TIPSIM_OK);
    CHECK(left < right);
    sum += count;
  }
  CHECK(sum == n);
  CHECK(tipsim_histogram_bin(hist, 10, &left, &right, &count) == TIPSIM_ERR_INVALID_ARGUMENT);
  CHECK(tipsim_histogram_uniform(times, 1.0, 0.0, 10, &hist) == TIPSIM_ERR_INVALID_ARGUMENT);

  char* csv = nullptr;
  REQUIRE(tipsim_histogram_csv(hist, &csv) == TIPSIM_OK);
  CHECK(std::string(csv).rfind("bin_left,bin_right,count\n", 0) == 0);
  tipsim_string_free(csv);
  tipsim_histogram_free(hist);
  tipsim_times_free(times);
  tipsim_times_free(nullptr);
}

TEST_CASE("ensemble statistics rows") {
  tipsim_params p;
  tipsim_params_init(&p);
  p.sigma = 0.2;
  tipsim_grid g{1e-2, 100};

  tipsim_stats_t* stats = nullptr;
  REQUIRE(tipsim_path_statistics(&p, &g, 200, 3, 11, 0, &stats) == TIPSIM_OK);
  REQUIRE(stats != nullptr);
  CHECK(tipsim_stats_count(stats) == 11);
  double t = -1.0, mean = -1.0, sd = -1.0;
  REQUIRE(tipsim_stats_row(stats, 0, &t, &mean, &sd) == TIPSIM_OK);
  CHECK(t == 0.0);
  CHECK(mean == 0.1);
  CHECK(sd == 0.0);
  REQUIRE(tipsim_stats_row(stats, 10, &t, &mean, &sd) == TIPSIM_OK);
  CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tipsim_stats_row(stats, 11, &t, &mean, &sd) == TIPSIM_ERR_INVALID_ARGUMENT);

  char* csv = nullptr;
  REQUIRE(tipsim_stats_csv(stats, &csv) == TIPSIM_OK);
  CHECK(std::string(csv).rfind("t,mean,std\n", 0) == 0);
  tipsim_string_free(csv);
  tipsim_stats_free(stats);
}

TEST_CASE("sweep handle and getters") {
  tipsim_params p;
  tipsim_params_init(&p);
  tipsim_grid g{1e-2, 100};
  const double sigmas[2] = {0.2, 0.4};
  const double rates[3] = {0.1, 0.3, 0.5};

  struct Progress {
    uint64_t calls = 0;
    uint64_t last_done = 0;
    uint64_t total = 0;
  } progress;
  const auto on_cell = [](uint64_t done, uint64_t total, double, double, void* user) {
    auto* pr = static_cast<Progress*>(user);
    ++pr->calls;
    pr->last_done = done;
    pr->total = total;
  };

  tipsim_sweep_t* sweep = nullptr;
  REQUIRE(tipsim_sweep(&p, &g, sigmas, 2, rates, 3, 128, 9, 0.95, 0, on_cell, &progress,
                       &sweep) == TIPSIM_OK);
  REQUIRE(sweep != nullptr);
  CHECK(progress.calls == 6);
  CHECK(progress.last_done == 6);
  CHECK(progress.total == 6);
  CHECK(tipsim_sweep_rows(sweep) == 3);
  CHECK(tipsim_sweep_cols(sweep) == 2);

  double v = 0.0;
  REQUIRE(tipsim_sweep_rate(sweep, 2, &v) == TIPSIM_OK);
  CHECK(v == 0.5);
  REQUIRE(tipsim_sweep_sigma(sweep, 1, &v) == TIPSIM_OK);
  CHECK(v == 0.4);
  CHECK(tipsim_sweep_rate(sweep, 3, &v) == TIPSIM_ERR_INVALID_ARGUMENT);

  tipsim_escape_estimate cell;
  REQUIRE(tipsim_sweep_cell(sweep, 0, 0, &cell) == TIPSIM_OK);
  CHECK(cell.n_paths == 128);
  CHECK(tipsim_sweep_cell(sweep, 0, 2, &cell) == TIPSIM_ERR_INVALID_ARGUMENT);

  char* csv = nullptr;
  REQUIRE(tipsim_sweep_csv(sweep, &csv) == TIPSIM_OK);
  CHECK(std::string(csv).rfind("R,sigma,p_hat,ci_low,ci_high,n_paths,n_escaped\n", 0) == 0);
  CHECK(std::count(csv, csv + std::strlen(csv), '\n') == 7);
  tipsim_string_free(csv);
  tipsim_string_free(nullptr);
  tipsim_sweep_free(sweep);
  tipsim_sweep_free(nullptr);
}
