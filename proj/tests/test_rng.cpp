#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ebrmap/rng.hpp"

using namespace ebrmap;

TEST_CASE("identical addresses reproduce the stream") {
  CounterRng a(42, 1, 2, 3);
  CounterRng b(42, 1, 2, 3);
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());
}

TEST_CASE("distinct substreams differ") {
  CounterRng a(42, 1, 2);
  CounterRng b(42, 1, 3);
  int equal = 0;
  for (int i = 0; i < 64; ++i) equal += a() == b();
  CHECK(equal == 0);
}

TEST_CASE("uniform stays inside the open unit interval") {
  CounterRng rng(7);
  double mean = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    mean += u;
  }
  CHECK(mean / n == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("normal moments") {
  CounterRng rng(11);
  const int n = 200000;
  double m = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    m += z;
    s2 += z * z;
  }
  m /= n;
  s2 = s2 / n - m * m;
  CHECK(m == doctest::Approx(0.0).epsilon(0.02));
  CHECK(std::fabs(m) < 0.02);
  CHECK(s2 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gamma and beta moments") {
  CounterRng rng(13);
  const int n = 100000;
  for (double shape : {0.4, 1.0, 3.5}) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m += rng.gamma(shape);
    CHECK(m / n == doctest::Approx(shape).epsilon(0.03));
  }
  double mb = 0.0;
  for (int i = 0; i < n; ++i) mb += rng.beta(4.0, 8.0);
  CHECK(mb / n == doctest::Approx(4.0 / 12.0).epsilon(0.02));
}

TEST_CASE("poisson mean including the splitting branch") {
  CounterRng rng(17);
  const int n = 100000;
  for (double mean : {0.3, 12.0, 80.0}) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m += static_cast<double>(rng.poisson(mean));
    CHECK(m / n == doctest::Approx(mean).epsilon(0.02));
  }
  CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("binomial edge cases and mean") {
  CounterRng rng(19);
  CHECK(rng.binomial(50, 0.0) == 0);
  CHECK(rng.binomial(50, 1.0) == 50);
  const int n = 100000;
  double m = 0.0;
  for (int i = 0; i < n; ++i) m += static_cast<double>(rng.binomial(50, 0.7));
  CHECK(m / n == doctest::Approx(35.0).epsilon(0.01));
}
