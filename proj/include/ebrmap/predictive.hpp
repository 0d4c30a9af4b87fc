#pragma once

#include <vector>

#include "ebrmap/mixture.hpp"
#include "ebrmap/trial_data.hpp"

namespace ebrmap {

// The shape of the current trial: everything about the design except the
// observed statistic.
struct TrialDesign {
  Endpoint endpoint = Endpoint::BinomialLogit;
  long n_c = 0;            // binomial / normal sample size
  double exposure_c = 0.0; // TTE total exposure (years)
  double sigma = 0.0;      // known SD (normal endpoint)
};

TrialDesign binomial_design(long n_c);
TrialDesign normal_design(long n_c, double sigma);
TrialDesign tte_design(double exposure_c);

TrialDesign design_of(const CurrentData& data);

// Prior predictive distribution of the current-trial statistic under a
// conjugate mixture prior: componentwise exact predictives with the prior
// weights unchanged.
//   Beta(a,b)   + Binomial n        -> BetaBinomial(n, a, b)
//   Gamma(k,r)  + Poisson exposure  -> NegBinomial(size k, success r/(r+e))
//   Normal(m,s) + mean of n, sd sg  -> Normal(m, s^2 + sg^2/n)
class PredictiveMixture {
 public:
  enum class Kind { BetaBinomial, NegBinomial, NormalPred };

  struct Component {
    double p1;
    double p2;
  };

  PredictiveMixture(Kind kind, TrialDesign design, std::vector<double> weights,
                    std::vector<Component> components);

  Kind kind() const { return kind_; }
  const TrialDesign& design() const { return design_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Component>& components() const { return components_; }

  bool discrete() const { return kind_ != Kind::NormalPred; }

  // pmf (discrete kinds) or density (normal) of the statistic.
  double mass(double t) const;

  // Pr(T <= t); for discrete kinds t is truncated toward -inf.
  double cdf(double t) const;

  // Two-sided tail masses with closed tails at the observed point.
  double tail_leq(double t) const { return cdf(t); }
  double tail_geq(double t) const;

 private:
  Kind kind_;
  TrialDesign design_;
  std::vector<double> weights_;
  std::vector<Component> components_;
};

PredictiveMixture prior_predictive(const ConjugateMixture& prior, const TrialDesign& design);

// Box's two-sided prior predictive p-value:
//   min(1, 2 * min{ Pr(T >= t_obs), Pr(T <= t_obs) })
// with both discrete tails including the observed point.
double ppp(const ConjugateMixture& prior, const CurrentData& data);

// Observed value of the sufficient statistic T used by ppp.
double observed_statistic(const CurrentData& data);

}  // namespace ebrmap
