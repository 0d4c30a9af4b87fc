#pragma once

#include <optional>
#include <vector>

#include "ebrmap/mixture.hpp"
#include "ebrmap/trial_data.hpp"

namespace ebrmap {

struct DecisionRule {
  enum class Direction { Less, Greater };
  Direction direction = Direction::Less;
  double theta_star = 0.0;
  double prob_cutoff = 0.5;
};

// Posterior event probability Pr(theta < theta*) or Pr(theta > theta*).
double rule_probability(const ConjugateMixture& posterior, const DecisionRule& rule);

struct PosteriorSummary {
  ConjugateMixture posterior;
  double median = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double ci_level = 0.95;
  std::optional<double> rule_prob;
  std::optional<bool> success;
};

// Conjugate mixture update: component parameters by conjugacy, weights
// rescaled by each component's marginal likelihood of the observed data.
ConjugateMixture posterior_update(const ConjugateMixture& prior, const CurrentData& data);

PosteriorSummary summarize_posterior(const ConjugateMixture& posterior, const DecisionRule& rule,
                                     double ci_level = 0.95);
PosteriorSummary summarize_posterior(const ConjugateMixture& posterior, double ci_level = 0.95);

// Per-interval piecewise-exponential analysis: the scalar pipeline
// (eb_weight -> posterior_update -> summarize) applied independently to each
// time interval, with an interval-specific threshold gamma. When no explicit
// vague components are supplied they default to Gamma mean-n with n = 1
// centered at each interval's MAP mean.
struct PweAnalysisResult {
  std::vector<PosteriorSummary> summaries;
  std::vector<double> eb_weights;
};

PweAnalysisResult analyze_pwe(const std::vector<ConjugateMixture>& per_interval_map,
                              const std::vector<CurrentData>& per_interval_data,
                              const std::vector<double>& gammas,
                              const std::optional<DecisionRule>& rule = std::nullopt,
                              double grid_step = 0.01,
                              const std::vector<MixtureComponent>* vague = nullptr);

}  // namespace ebrmap
