#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ebrmap/eb_weight.hpp"
#include "ebrmap/mixture.hpp"
#include "ebrmap/posterior.hpp"
#include "ebrmap/predictive.hpp"
#include "ebrmap/rng.hpp"
#include "ebrmap/trial_data.hpp"

namespace ebrmap {

// Prior-construction rule applied to each simulated current dataset.
struct FixedWeightMethod {
  double w_v = 0.0;
};

struct EmpiricalBayesMethod {
  double gamma = 0.9;
  double grid_step = 0.01;
};

using AnalysisMethod = std::variant<FixedWeightMethod, EmpiricalBayesMethod>;

std::string method_label(const AnalysisMethod& m);

struct Scenario {
  Endpoint endpoint = Endpoint::BinomialLogit;
  ConjugateMixture map_mix;
  MixtureComponent vague;
  std::vector<AnalysisMethod> methods;
  TrialDesign design;
  std::vector<double> truth_grid;
  DecisionRule rule;
  int replications = 5000;
  std::uint64_t seed = 0;
};

struct OcRow {
  double truth = 0.0;
  std::string method;
  double pos = 0.0;
  double abs_bias = 0.0;
  double mse = 0.0;
  double mc_se_pos = 0.0;
  int replications = 0;
};

// One simulated current dataset under the given truth.
CurrentData simulate_current(double truth, const TrialDesign& design, CounterRng& rng);

// Monte Carlo operating characteristics. Replicate r of truth index t draws
// from the substream (seed, t, r), and every method sees the same simulated
// data, so output is bit-identical for any thread count. Rows are ordered by
// (truth, method) following the scenario's own ordering.
std::vector<OcRow> run_scenario(const Scenario& scenario, int threads = 1);

struct OcDelta {
  double truth;
  std::string method;
  double d_pos;
  double d_abs_bias;
  double d_mse;
};

struct OcComparison {
  std::string baseline;
  std::vector<OcDelta> deltas;            // per (truth, non-baseline method)
  double max_abs_d_pos = 0.0;             // max over grid and methods
  double max_abs_d_bias = 0.0;
  double max_abs_d_mse = 0.0;
};

OcComparison oc_compare(const std::vector<OcRow>& rows, const std::string& baseline);

}  // namespace ebrmap
