#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ebrmap {

enum class Family { Beta, Gamma, Normal };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// One conjugate component. Parameter meaning by family:
//   Beta(a = p1 > 0, b = p2 > 0)
//   Gamma(shape = p1 > 0, rate = p2 > 0)
//   Normal(mean = p1, sd = p2 > 0)
class MixtureComponent {
 public:
  MixtureComponent(Family family, double p1, double p2);

  Family family() const { return family_; }
  double p1() const { return p1_; }
  double p2() const { return p2_; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double mean() const;
  double variance() const;

  // Support membership (Beta: [0,1]; Gamma: [0,inf); Normal: all reals).
  bool in_support(double x) const;

 private:
  Family family_;
  double p1_;
  double p2_;
};

MixtureComponent beta_component(double a, double b);
MixtureComponent gamma_component(double shape, double rate);
MixtureComponent normal_component(double mean, double sd);

// Gamma specified by mean m and pseudo-observation count n ("mn" form):
// shape = m*n, rate = n.
MixtureComponent gamma_component_mean_n(double mean, double n);

// The (mean, n) pair of a Gamma component.
struct GammaMeanN {
  double mean;
  double n;
};
GammaMeanN gamma_as_mean_n(const MixtureComponent& c);

// Weighted mixture of same-family conjugate components. Immutable after
// construction; weights are nonnegative and sum to one within 1e-12.
class ConjugateMixture {
 public:
  ConjugateMixture(std::vector<MixtureComponent> components, std::vector<double> weights);

  // Single-component convenience.
  explicit ConjugateMixture(MixtureComponent component);

  Family family() const { return components_.front().family(); }
  std::size_t size() const { return components_.size(); }
  const MixtureComponent& component(std::size_t k) const { return components_[k]; }
  double weight(std::size_t k) const { return weights_[k]; }
  const std::vector<MixtureComponent>& components() const { return components_; }
  const std::vector<double>& weights() const { return weights_; }

  double pdf(double x) const;
  double cdf(double x) const;

  // Inverse CDF by bracketed root-finding; |cdf(result) - q| <= 1e-10.
  double quantile(double q) const;

  double mean() const;
  double variance() const;

 private:
  std::vector<MixtureComponent> components_;
  std::vector<double> weights_;
};

// (1-w_v) * map_mix + w_v * vague, appended as the last component.
// Component parameters are preserved bit-identically.
ConjugateMixture robustify(const ConjugateMixture& map_mix, const MixtureComponent& vague,
                           double w_v);

// How the vague component is centered when the family needs a location.
struct Centering {
  enum class Kind { MapMedian, MapMean, Explicit };
  Kind kind;
  double value = 0.0;

  static Centering map_median() { return {Kind::MapMedian}; }
  static Centering map_mean() { return {Kind::MapMean}; }
  static Centering explicit_value(double v) { return {Kind::Explicit, v}; }
};

// Family defaults for the vague component:
//   Beta   -> Beta(1,1)                          (ESS 2)
//   Gamma  -> mean-n form with n = 1             (one pseudo-event)
//   Normal -> N(center, unit_sd^2); unit_sd is the reference (known) SD,
//             so the component carries ESS 1
MixtureComponent default_vague(Family family, const ConjugateMixture& map_mix,
                               const Centering& centering,
                               std::optional<double> normal_unit_sd = std::nullopt);

// Moment-based effective sample size: moment-match the mixture to a single
// same-family distribution, then report Beta a+b, Gamma rate (pseudo-exposure)
// or, for Normal with known sampling SD sigma_ref, (sigma_ref/sd)^2.
double moment_ess(const ConjugateMixture& m,
                  std::optional<double> normal_reference_sd = std::nullopt);

}  // namespace ebrmap
