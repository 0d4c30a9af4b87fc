#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ebrmap/mixture_fit.hpp"
#include "ebrmap/rng.hpp"

using namespace ebrmap;

namespace {

std::vector<double> beta_draws(std::uint64_t seed, double a, double b, int n) {
  CounterRng rng(seed);
  std::vector<double> out(n);
  for (double& x : out) x = rng.beta(a, b);
  return out;
}

std::vector<double> normal_draws(std::uint64_t seed, double mean, double sd, int n) {
  CounterRng rng(seed);
  std::vector<double> out(n);
  for (double& x : out) x = mean + sd * rng.normal();
  return out;
}

std::vector<double> gamma_draws(std::uint64_t seed, double shape, double rate, int n) {
  CounterRng rng(seed);
  std::vector<double> out(n);
  for (double& x : out) x = rng.gamma(shape) / rate;
  return out;
}

}  // namespace

TEST_CASE("single beta component is recovered") {
  const auto draws = beta_draws(101, 4.0, 8.0, 50000);
  const auto [mix, report] = fit_mixture_em(draws, Family::Beta, 1);
  REQUIRE(mix.size() == 1);
  CHECK(std::fabs(mix.component(0).p1() - 4.0) < 0.3);
  CHECK(std::fabs(mix.component(0).p2() - 8.0) < 0.3);
  CHECK(report.converged);
  CHECK(report.ks_distance < 0.02);
}

TEST_CASE("single normal component is recovered") {
  const auto draws = normal_draws(102, -46.8, 4.0, 50000);
  const auto [mix, report] = fit_mixture_em(draws, Family::Normal, 1);
  CHECK(std::fabs(mix.component(0).p1() - (-46.8)) < 0.1);
  CHECK(std::fabs(mix.component(0).p2() - 4.0) < 0.1);
  CHECK(report.converged);
}

TEST_CASE("single gamma component is recovered") {
  const auto draws = gamma_draws(103, 3.0, 5.0, 50000);
  const auto [mix, report] = fit_mixture_em(draws, Family::Gamma, 1);
  CHECK(std::fabs(mix.component(0).p1() - 3.0) < 0.15);
  CHECK(std::fabs(mix.component(0).p2() - 5.0) < 0.25);
  CHECK(report.converged);
}

TEST_CASE("adding a component never hurts the likelihood") {
  const auto draws = beta_draws(104, 4.0, 8.0, 5000);
  const auto [m1, r1] = fit_mixture_em(draws, Family::Beta, 1);
  const auto [m2, r2] = fit_mixture_em(draws, Family::Beta, 2);
  CHECK(r1.log_likelihood <= r2.log_likelihood + 1e-6);
}

TEST_CASE("em log-likelihood trace is nondecreasing") {
  std::vector<double> trace;
  FitOptions opt;
  opt.log_likelihood_trace = &trace;
  const auto draws = beta_draws(105, 2.0, 5.0, 8000);
  fit_mixture_em(draws, Family::Beta, 2, opt);
  REQUIRE(trace.size() >= 2);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i] >= trace[i - 1] - 1e-9 * (1.0 + std::fabs(trace[i - 1])));
  }
}

TEST_CASE("two separated beta components are recovered") {
  CounterRng rng(106);
  std::vector<double> draws;
  draws.reserve(20000);
  for (int i = 0; i < 20000; ++i) {
    if (rng.uniform() < 0.7) {
      draws.push_back(rng.beta(10.0, 40.0));  // mean 0.2
    } else {
      draws.push_back(rng.beta(40.0, 10.0));  // mean 0.8
    }
  }
  const auto [mix, report] = fit_mixture_em(draws, Family::Beta, 2);
  REQUIRE(mix.size() == 2);
  // components arrive sorted by weight
  CHECK(std::fabs(mix.weight(0) - 0.7) < 0.05);
  CHECK(std::fabs(mix.weight(1) - 0.3) < 0.05);
  CHECK(std::fabs(mix.component(0).mean() - 0.2) < 0.01);
  CHECK(std::fabs(mix.component(1).mean() - 0.8) < 0.04);
  CHECK(report.ks_distance < 0.02);
}

TEST_CASE("aic selection favors the true single component") {
  const auto draws = beta_draws(107, 4.0, 8.0, 20000);
  const auto [mix, report] = select_mixture(draws, Family::Beta, 3);
  CHECK(report.k == 1);
  // identical to a direct one-component fit
  const auto [direct, direct_report] = fit_mixture_em(draws, Family::Beta, 1);
  CHECK(mix.component(0).p1() == direct.component(0).p1());
  CHECK(report.aic == direct_report.aic);
  // and AICs of richer fits really are worse
  const auto [m2, r2] = fit_mixture_em(draws, Family::Beta, 2);
  CHECK(report.aic <= r2.aic);
}

TEST_CASE("k_max one is the plain fit") {
  const auto draws = gamma_draws(108, 2.0, 3.0, 5000);
  const auto [sel, sel_report] = select_mixture(draws, Family::Gamma, 1);
  const auto [fit, fit_report] = fit_mixture_em(draws, Family::Gamma, 1);
  CHECK(sel.component(0).p1() == fit.component(0).p1());
  CHECK(sel_report.log_likelihood == fit_report.log_likelihood);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(fit_mixture_em({}, Family::Beta, 1), std::invalid_argument);
  const std::vector<double> constant(100, 0.4);
  CHECK_THROWS_WITH_AS(fit_mixture_em(constant, Family::Beta, 1),
                       "fit_mixture_em: zero-variance sample", std::invalid_argument);
  const std::vector<double> edge{0.2, 0.3, 1.0};
  CHECK_THROWS_AS(fit_mixture_em(edge, Family::Beta, 1), std::domain_error);
  const std::vector<double> neg{0.2, -0.3, 0.5};
  CHECK_THROWS_AS(fit_mixture_em(neg, Family::Gamma, 1), std::domain_error);
  const std::vector<double> ok{0.2, 0.3, 0.5};
  CHECK_THROWS_AS(fit_mixture_em(ok, Family::Beta, 0), std::invalid_argument);
  CHECK_THROWS_AS(select_mixture(ok, Family::Beta, 0), std::invalid_argument);
}
