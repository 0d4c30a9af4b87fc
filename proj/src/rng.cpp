#include "ebrmap/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ebrmap {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

std::array<std::uint32_t, 4> philox10(std::array<std::uint32_t, 4> c,
                                      std::array<std::uint32_t, 2> k) {
  for (int r = 0; r < 10; ++r) {
    philox_round(c, k[0], k[1]);
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream,
                       std::uint64_t lane) {
  const std::uint64_t k = mix64(seed ^ mix64(stream ^ mix64(substream ^ mix64(lane))));
  const std::uint64_t prefix = mix64(k);
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  counter_prefix_ = {0, 0, static_cast<std::uint32_t>(prefix),
                     static_cast<std::uint32_t>(prefix >> 32)};
}

void CounterRng::refill() {
  std::array<std::uint32_t, 4> c = counter_prefix_;
  c[0] = static_cast<std::uint32_t>(block_);
  c[1] = static_cast<std::uint32_t>(block_ >> 32);
  ++block_;
  const auto r = philox10(c, key_);
  out_[0] = (static_cast<std::uint64_t>(r[1]) << 32) | r[0];
  out_[1] = (static_cast<std::uint64_t>(r[3]) << 32) | r[2];
  out_pos_ = 0;
}

CounterRng::result_type CounterRng::operator()() {
  if (out_pos_ >= 2) refill();
  return out_[out_pos_++];
}

double CounterRng::uniform() {
  // 53-bit mantissa shifted into (0,1)
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 6.283185307179586477 * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

double CounterRng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("CounterRng::gamma: shape must be > 0");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double CounterRng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

long CounterRng::poisson(double mean) {
  if (mean < 0.0) throw std::domain_error("CounterRng::poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean > 30.0) {
    // sum of independent halves keeps the inversion below exact
    const double half = 0.5 * mean;
    return poisson(half) + poisson(mean - half);
  }
  const double limit = std::exp(-mean);
  long k = 0;
  double prod = uniform();
  while (prod > limit) {
    ++k;
    prod *= uniform();
  }
  return k;
}

long CounterRng::binomial(long n, double p) {
  if (n < 0 || p < 0.0 || p > 1.0) throw std::domain_error("CounterRng::binomial: bad arguments");
  if (p == 0.0 || n == 0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - binomial(n, 1.0 - p);
  // CDF inversion via the recursive pmf ratio
  const double q = 1.0 - p;
  double pmf = std::pow(q, static_cast<double>(n));
  double cdf = pmf;
  const double u = uniform();
  long k = 0;
  while (u > cdf && k < n) {
    pmf *= (static_cast<double>(n - k) / static_cast<double>(k + 1)) * (p / q);
    cdf += pmf;
    ++k;
  }
  return k;
}

}  // namespace ebrmap
