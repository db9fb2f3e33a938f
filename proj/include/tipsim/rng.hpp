#pragma once

#include <array>
#include <cstdint>

namespace tipsim {

// Reproducible per-path random numbers.
//
// Streams are counter-based (Philox4x32-10, Salmon et al. SC'11): the n-th
// draw of stream (master_seed, path_index) is a pure function of those three
// integers, so ensembles give identical results no matter how paths are
// scheduled across threads. Normal variates are produced from one 64-bit
// uniform each via the inverse CDF (Wichura's AS241), keeping the
// uniform-to-normal mapping fixed and one-to-one.

struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

// splitmix64 finalizer; bijective 64-bit mixing.
std::uint64_t mix64(std::uint64_t v);

// Stable derived seed for a labelled sub-experiment, e.g. one sweep cell.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b);

// One Philox4x32 block: 10 rounds over a 128-bit counter and 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Inverse of the standard normal CDF, accurate to ~1e-15 on (0,1).
double inverse_normal_cdf(double p);

class NormalStream {
 public:
  explicit NormalStream(StreamKey key)
      : key_{static_cast<std::uint32_t>(key.master_seed),
             static_cast<std::uint32_t>(key.master_seed >> 32)},
        path_{static_cast<std::uint32_t>(key.path_index),
              static_cast<std::uint32_t>(key.path_index >> 32)} {}

  // Next standard normal variate.
  double next() { return inverse_normal_cdf(next_uniform()); }

  // Next uniform on the open interval (0,1), 53 usable bits.
  double next_uniform() {
    return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1p-53;
  }

  std::uint64_t next_bits() {
    if (used_ == 2) refill();
    return buffer_[used_++];
  }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> path_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned used_ = 2;
};

}  // namespace tipsim
