#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ebrmap {

// Counter-based random stream (Philox4x32-10). A stream is addressed by a
// 64-bit seed plus up to three stream identifiers; streams with distinct
// addresses are statistically independent, so parallel work can draw from
// per-task substreams whose output does not depend on scheduling order.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0,
                      std::uint64_t substream = 0, std::uint64_t lane = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1).
  double uniform();

  // Standard normal (Box-Muller; second variate cached).
  double normal();

  // Gamma(shape, rate=1), shape > 0 (Marsaglia-Tsang).
  double gamma(double shape);

  // Beta(a, b), a,b > 0.
  double beta(double a, double b);

  // Poisson(mean), mean >= 0.
  long poisson(double mean);

  // Binomial(n, p), 0 <= p <= 1.
  long binomial(long n, double p);

 private:
  void refill();

  std::array<std::uint32_t, 4> counter_prefix_;  // c2,c3 fixed per stream
  std::array<std::uint32_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> out_{};
  int out_pos_ = 2;  // forces refill on first use
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// SplitMix64 finalizer; used for hashing stream addresses.
std::uint64_t mix64(std::uint64_t z);

}  // namespace ebrmap
