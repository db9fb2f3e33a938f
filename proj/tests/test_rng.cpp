#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "tipsim/rng.hpp"

using tipsim::NormalStream;
using tipsim::StreamKey;

namespace {

std::vector<double> draw(StreamKey key, std::size_t n) {
  NormalStream s(key);
  std::vector<double> out(n);
  for (auto& v : out) v = s.next();
  return out;
}

}  // namespace

TEST_CASE("philox block function matches the published test vectors") {
  // Known-answer vectors for Philox4x32-10 (counter, key -> output).
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(tipsim::philox4x32(A4{0, 0, 0, 0}, A2{0, 0}) ==
        A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(tipsim::philox4x32(A4{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                           A2{0xffffffffu, 0xffffffffu}) ==
        A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(tipsim::philox4x32(A4{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                           A2{0xa4093822u, 0x299f31d0u}) ==
        A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("same key gives bit-identical sequences") {
  const auto a = draw({12345, 7}, 1000);
  const auto b = draw({12345, 7}, 1000);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("distinct keys give different sequences") {
  const auto a = draw({12345, 7}, 64);
  const auto b = draw({12345, 8}, 64);
  const auto c = draw({12346, 7}, 64);
  std::size_t equal_ab = 0, equal_ac = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    equal_ab += a[i] == b[i];
    equal_ac += a[i] == c[i];
  }
  CHECK(equal_ab == 0);
  CHECK(equal_ac == 0);
}

TEST_CASE("uniforms land strictly inside (0,1)") {
  NormalStream s({99, 3});
  for (int i = 0; i < 100000; ++i) {
    const double u = s.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("sample mean and variance of one million draws") {
  const std::size_t n = 1000000;
  NormalStream s({2024, 0});
  std::vector<double> sample(n);
  for (auto& v : sample) v = s.next();
  CHECK(std::abs(oracle::mean(sample)) < 0.004);          // ~4 / sqrt(n)
  CHECK(std::abs(oracle::sample_variance(sample) - 1.0) < 0.006);  // ~4 sqrt(2/n)
}

TEST_CASE("Kolmogorov-Smirnov test against the normal CDF") {
  const std::size_t n = 100000;
  // 1% critical value of the two-sided KS statistic, asymptotic form.
  const double critical = 1.628 / std::sqrt(static_cast<double>(n));
  for (const std::uint64_t path : {0ull, 1ull, 900000ull}) {
    const auto sample = draw({42, path}, n);
    const double d = oracle::ks_normal(sample);
    CAPTURE(path);
    CHECK(d < critical);
  }
}

TEST_CASE("cross-stream correlation stays below 0.01") {
  const std::size_t n = 100000;
  const auto a = draw({42, 0}, n);
  const auto b = draw({42, 1}, n);
  const auto c = draw({42, 123456}, n);
  CHECK(std::abs(oracle::correlation(a, b)) < 0.01);
  CHECK(std::abs(oracle::correlation(a, c)) < 0.01);
  CHECK(std::abs(oracle::correlation(b, c)) < 0.01);
  // same stream against itself lagged by one, as a sanity control
  std::vector<double> a0(a.begin(), a.end() - 1), a1(a.begin() + 1, a.end());
  CHECK(std::abs(oracle::correlation(a0, a1)) < 0.01);
}

TEST_CASE("derive_seed separates labels") {
  const auto s1 = tipsim::derive_seed(42, 1, 2);
  const auto s2 = tipsim::derive_seed(42, 2, 1);
  const auto s3 = tipsim::derive_seed(43, 1, 2);
  CHECK(s1 != s2);
  CHECK(s1 != s3);
  CHECK(s1 == tipsim::derive_seed(42, 1, 2));
}

TEST_CASE("inverse normal CDF hits reference quantiles") {
  // reference values from the standard normal quantile function
  CHECK(tipsim::inverse_normal_cdf(0.5) == 0.0);
  CHECK(tipsim::inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(tipsim::inverse_normal_cdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
  CHECK(tipsim::inverse_normal_cdf(0.84134474606854293) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tipsim::inverse_normal_cdf(1e-10) == doctest::Approx(-6.3613409024040557).epsilon(1e-12));

  // round-trip through an independent CDF across the domain
  for (double p = 0.0005; p < 1.0; p += 0.0005) {
    const double x = tipsim::inverse_normal_cdf(p);
    CHECK(oracle::normal_cdf(x) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("inverse normal CDF is antisymmetric and monotone") {
  double prev = tipsim::inverse_normal_cdf(1e-6);
  for (double p = 1e-4; p <= 0.5; p += 1e-4) {
    const double x = tipsim::inverse_normal_cdf(p);
    CHECK(x > prev);
    CHECK(x == doctest::Approx(-tipsim::inverse_normal_cdf(1.0 - p)).epsilon(1e-9));
    prev = x;
  }
}
