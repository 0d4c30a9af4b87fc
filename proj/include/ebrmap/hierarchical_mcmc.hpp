#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ebrmap/trial_data.hpp"

namespace ebrmap {

struct NormalPrior {
  double mean = 0.0;
  double sd = 1.0;
};

struct HalfNormalPrior {
  double scale = 1.0;
};

// Exchangeable hierarchical model: per-study parameters on the transformed
// scale (logit / identity / log) drawn from N(mu, tau^2), with a normal
// hyper-prior on mu and a half-normal prior on tau.
struct HierarchicalSpec {
  Endpoint endpoint = Endpoint::BinomialLogit;
  NormalPrior mu_prior;
  HalfNormalPrior tau_prior;
};

struct McmcConfig {
  int chains = 4;
  int iterations_per_chain = 10000;
  double burn_in_fraction = 0.5;
  std::uint64_t seed = 0;
  double target_accept = 0.35;
};

// Posterior-predictive draws of the new-trial parameter theta, i.e. the MAP
// prior sample. Natural and transformed scales are kept in lockstep.
struct MapDraws {
  std::vector<double> theta_new;                // natural scale
  std::vector<double> transformed_scale_draws;  // logit / identity / log scale
  double rhat_mu = 0.0;
  double rhat_tau = 0.0;
  std::vector<double> accept_rates;  // per chain, post burn-in random-walk updates
  int chains = 0;
  int draws_per_chain = 0;
  std::vector<std::string> warnings;
};

// Gibbs-within-Metropolis sampler: adaptive random-walk updates for the
// study parameters and log tau, a conjugate normal draw for mu, and one
// predictive draw theta_new = mu + tau*z per retained iteration. Chains are
// independent counter-based streams, so results do not depend on how they
// are scheduled.
MapDraws derive_map(const HistoricalDataset& data, const HierarchicalSpec& spec,
                    const McmcConfig& cfg);

struct ConvergenceReport {
  bool pass = false;
  bool degraded = false;  // rhat unavailable (single chain or zero variance)
  double rhat_mu = 0.0;
  double rhat_tau = 0.0;
  double rhat_limit = 0.0;
  std::vector<double> accept_rates;
  std::size_t bulk_draws = 0;
  std::string message;
};

ConvergenceReport check_convergence(const MapDraws& draws, double rhat_limit = 1.05);

// Split potential-scale-reduction factor; NaN when the pooled within-chain
// variance vanishes.
double potential_scale_reduction(const std::vector<std::vector<double>>& chains);

}  // namespace ebrmap
