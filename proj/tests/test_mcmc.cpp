#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ebrmap/hierarchical_mcmc.hpp"
#include "ebrmap/rng.hpp"

using namespace ebrmap;

namespace {

McmcConfig quick_config(std::uint64_t seed) {
  McmcConfig cfg;
  cfg.chains = 4;
  cfg.iterations_per_chain = 4000;
  cfg.burn_in_fraction = 0.5;
  cfg.seed = seed;
  return cfg;
}

double sample_mean(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_CASE("same seed reproduces the draws bit for bit") {
  HistoricalDataset data;
  for (int i = 0; i < 4; ++i) data.push_back({"S" + std::to_string(i), BinomialSummary{10, 40}});
  const HierarchicalSpec spec{Endpoint::BinomialLogit, {0.0, 2.0}, {0.5}};
  const auto a = derive_map(data, spec, quick_config(99));
  const auto b = derive_map(data, spec, quick_config(99));
  REQUIRE(a.theta_new.size() == b.theta_new.size());
  for (std::size_t i = 0; i < a.theta_new.size(); ++i) CHECK(a.theta_new[i] == b.theta_new[i]);
}

TEST_CASE("identical binomial studies center the MAP prior at the pooled rate") {
  HistoricalDataset data;
  for (int i = 0; i < 4; ++i) data.push_back({"S" + std::to_string(i), BinomialSummary{10, 40}});
  const HierarchicalSpec spec{Endpoint::BinomialLogit, {0.0, 2.0}, {0.5}};
  McmcConfig cfg = quick_config(123);
  cfg.iterations_per_chain = 10000;
  const auto draws = derive_map(data, spec, cfg);
  // conjugate pooled oracle: Beta(1+40, 1+120) mean
  const double pooled = 41.0 / 162.0;
  CHECK(std::fabs(sample_mean(draws.theta_new) - pooled) < 0.03);
}

TEST_CASE("tte map centers near the pooled hazard estimate") {
  // exposures 5/10/15/20 with true hazard 0.4; seeded Poisson event counts
  CounterRng rng(2033);
  const std::vector<double> exposures{5.0, 10.0, 15.0, 20.0};
  HistoricalDataset data;
  long total_events = 0;
  double total_exposure = 0.0;
  for (std::size_t i = 0; i < exposures.size(); ++i) {
    const long events = rng.poisson(0.4 * exposures[i]);
    data.push_back({"H" + std::to_string(i + 1), TteSummary{events, exposures[i]}});
    total_events += events;
    total_exposure += exposures[i];
  }
  const HierarchicalSpec spec{Endpoint::PoissonLogHazard, {0.0, 10.0}, {0.5}};
  McmcConfig cfg = quick_config(234);
  cfg.iterations_per_chain = 10000;
  const auto draws = derive_map(data, spec, cfg);
  const double pooled = static_cast<double>(total_events) / total_exposure;
  CHECK(std::fabs(sample_mean(draws.theta_new) - pooled) < 0.08);
}

TEST_CASE("tight heterogeneity prior recovers the conjugate single-study posterior") {
  const HistoricalDataset data{{"only", NormalSummary{-46.8, 20, 40.0}}};
  const HierarchicalSpec spec{Endpoint::NormalKnownSd, {-50.0, 40.0}, {1e-4}};
  McmcConfig cfg = quick_config(345);
  cfg.iterations_per_chain = 20000;
  const auto draws = derive_map(data, spec, cfg);
  // precision-weighted oracle: prior N(-50,40^2), likelihood N(-46.8, 40^2/20)
  const double post_mean = (-50.0 + 20.0 * -46.8) / 21.0;
  CHECK(std::fabs(sample_mean(draws.theta_new) - post_mean) < 0.3);
}

TEST_CASE("wider heterogeneity priors widen the MAP prior") {
  HistoricalDataset data;
  for (int i = 0; i < 4; ++i) data.push_back({"S" + std::to_string(i), BinomialSummary{10, 40}});
  double prev_var = 0.0;
  for (double scale : {0.125, 0.25, 0.5, 1.0}) {
    const HierarchicalSpec spec{Endpoint::BinomialLogit, {0.0, 2.0}, {scale}};
    const auto draws = derive_map(data, spec, quick_config(456));
    const double var = sample_var(draws.theta_new);
    CHECK(var > prev_var);
    prev_var = var;
  }
}

TEST_CASE("natural draws are the exact transform of the transformed draws") {
  HistoricalDataset data;
  for (int i = 0; i < 3; ++i) data.push_back({"S" + std::to_string(i), BinomialSummary{8 + i, 40}});
  const HierarchicalSpec spec{Endpoint::BinomialLogit, {0.0, 2.0}, {0.5}};
  const auto draws = derive_map(data, spec, quick_config(567));
  for (std::size_t i = 0; i < draws.theta_new.size(); ++i) {
    const double expect = 1.0 / (1.0 + std::exp(-draws.transformed_scale_draws[i]));
    CHECK(draws.theta_new[i] == expect);
  }
  for (double p : draws.theta_new) {
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
}

TEST_CASE("adapted acceptance rates settle in the working band") {
  HistoricalDataset data;
  for (int i = 0; i < 4; ++i) {
    data.push_back({"S" + std::to_string(i), TteSummary{10 + 2 * i, 20.0 + 5.0 * i}});
  }
  const HierarchicalSpec spec{Endpoint::PoissonLogHazard, {0.0, 10.0}, {0.5}};
  const auto draws = derive_map(data, spec, quick_config(678));
  for (double rate : draws.accept_rates) {
    CHECK(rate >= 0.2);
    CHECK(rate <= 0.5);
  }
}

TEST_CASE("convergence reporting") {
  HistoricalDataset data;
  for (int i = 0; i < 4; ++i) data.push_back({"S" + std::to_string(i), BinomialSummary{10, 40}});
  const HierarchicalSpec spec{Endpoint::BinomialLogit, {0.0, 2.0}, {0.5}};
  const auto draws = derive_map(data, spec, quick_config(789));
  const auto rep = check_convergence(draws, 1.05);
  CHECK(rep.pass);
  CHECK_FALSE(rep.degraded);

  // a stochastic run never sits exactly at rhat 1
  const auto strict = check_convergence(draws, 1.0);
  CHECK_FALSE(strict.pass);

  McmcConfig single = quick_config(790);
  single.chains = 1;
  const auto one = derive_map(data, spec, single);
  const auto rep_one = check_convergence(one, 1.05);
  CHECK(rep_one.degraded);
  CHECK_FALSE(rep_one.pass);
}

TEST_CASE("constant chains have undefined rhat") {
  const std::vector<std::vector<double>> chains{std::vector<double>(100, 1.0),
                                                std::vector<double>(100, 1.0)};
  CHECK(std::isnan(potential_scale_reduction(chains)));
}

TEST_CASE("input validation") {
  const HierarchicalSpec spec{Endpoint::BinomialLogit, {0.0, 2.0}, {0.5}};
  CHECK_THROWS_AS(derive_map({}, spec, quick_config(1)), std::invalid_argument);
  const HistoricalDataset tte_data{{"S", TteSummary{3, 10.0}}};
  CHECK_THROWS_AS(derive_map(tte_data, spec, quick_config(1)), std::invalid_argument);
  McmcConfig bad = quick_config(1);
  bad.chains = 0;
  const HistoricalDataset data{{"S", BinomialSummary{10, 40}}};
  CHECK_THROWS_AS(derive_map(data, spec, bad), std::invalid_argument);
  bad = quick_config(1);
  bad.burn_in_fraction = 1.0;
  CHECK_THROWS_AS(derive_map(data, spec, bad), std::invalid_argument);
}
