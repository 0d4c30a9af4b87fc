#include "ebrmap/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "ebrmap/special_functions.hpp"

namespace ebrmap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWeightSumTol = 1e-12;
}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Beta: return "beta";
    case Family::Gamma: return "gamma";
    case Family::Normal: return "normal";
  }
  throw std::logic_error("family_name: unknown family");
}

Family family_from_name(const std::string& name) {
  if (name == "beta") return Family::Beta;
  if (name == "gamma") return Family::Gamma;
  if (name == "normal") return Family::Normal;
  throw std::invalid_argument("unknown family: " + name);
}

MixtureComponent::MixtureComponent(Family family, double p1, double p2)
    : family_(family), p1_(p1), p2_(p2) {
  if (!std::isfinite(p1) || !std::isfinite(p2)) {
    throw std::invalid_argument("MixtureComponent: parameters must be finite");
  }
  switch (family) {
    case Family::Beta:
      if (!(p1 > 0.0) || !(p2 > 0.0)) throw std::invalid_argument("Beta: a,b must be > 0");
      break;
    case Family::Gamma:
      if (!(p1 > 0.0) || !(p2 > 0.0)) throw std::invalid_argument("Gamma: shape,rate must be > 0");
      break;
    case Family::Normal:
      if (!(p2 > 0.0)) throw std::invalid_argument("Normal: sd must be > 0");
      break;
  }
}

bool MixtureComponent::in_support(double x) const {
  switch (family_) {
    case Family::Beta: return x >= 0.0 && x <= 1.0;
    case Family::Gamma: return x >= 0.0;
    case Family::Normal: return std::isfinite(x);
  }
  return false;
}

double MixtureComponent::pdf(double x) const {
  if (!in_support(x)) throw std::domain_error("pdf: x outside the family support");
  switch (family_) {
    case Family::Beta: {
      const double a = p1_, b = p2_;
      if (x == 0.0) return a < 1.0 ? kInf : (a == 1.0 ? b : 0.0);
      if (x == 1.0) return b < 1.0 ? kInf : (b == 1.0 ? a : 0.0);
      return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta_fn(a, b));
    }
    case Family::Gamma: {
      const double k = p1_, r = p2_;
      if (x == 0.0) return k < 1.0 ? kInf : (k == 1.0 ? r : 0.0);
      return std::exp(k * std::log(r) + (k - 1.0) * std::log(x) - r * x - log_gamma_fn(k));
    }
    case Family::Normal: {
      const double z = (x - p1_) / p2_;
      return standard_normal_pdf(z) / p2_;
    }
  }
  throw std::logic_error("pdf: unknown family");
}

double MixtureComponent::log_pdf(double x) const {
  if (!in_support(x)) throw std::domain_error("log_pdf: x outside the family support");
  switch (family_) {
    case Family::Beta: {
      const double a = p1_, b = p2_;
      if (x == 0.0 || x == 1.0) return std::log(pdf(x));
      return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta_fn(a, b);
    }
    case Family::Gamma: {
      const double k = p1_, r = p2_;
      if (x == 0.0) return std::log(pdf(x));
      return k * std::log(r) + (k - 1.0) * std::log(x) - r * x - log_gamma_fn(k);
    }
    case Family::Normal: {
      const double z = (x - p1_) / p2_;
      return -0.5 * z * z - 0.9189385332046727418 - std::log(p2_);
    }
  }
  throw std::logic_error("log_pdf: unknown family");
}

double MixtureComponent::cdf(double x) const {
  if (!in_support(x)) throw std::domain_error("cdf: x outside the family support");
  switch (family_) {
    case Family::Beta:
      return regularized_incomplete_beta(p1_, p2_, x);
    case Family::Gamma:
      return regularized_gamma_p(p1_, p2_ * x);
    case Family::Normal:
      return standard_normal_cdf((x - p1_) / p2_);
  }
  throw std::logic_error("cdf: unknown family");
}

double MixtureComponent::mean() const {
  switch (family_) {
    case Family::Beta: return p1_ / (p1_ + p2_);
    case Family::Gamma: return p1_ / p2_;
    case Family::Normal: return p1_;
  }
  throw std::logic_error("mean: unknown family");
}

double MixtureComponent::variance() const {
  switch (family_) {
    case Family::Beta: {
      const double s = p1_ + p2_;
      return p1_ * p2_ / (s * s * (s + 1.0));
    }
    case Family::Gamma: return p1_ / (p2_ * p2_);
    case Family::Normal: return p2_ * p2_;
  }
  throw std::logic_error("variance: unknown family");
}

MixtureComponent beta_component(double a, double b) { return {Family::Beta, a, b}; }
MixtureComponent gamma_component(double shape, double rate) { return {Family::Gamma, shape, rate}; }
MixtureComponent normal_component(double mean, double sd) { return {Family::Normal, mean, sd}; }

MixtureComponent gamma_component_mean_n(double mean, double n) {
  return {Family::Gamma, mean * n, n};
}

GammaMeanN gamma_as_mean_n(const MixtureComponent& c) {
  if (c.family() != Family::Gamma) {
    throw std::invalid_argument("gamma_as_mean_n: component is not Gamma");
  }
  return {c.p1() / c.p2(), c.p2()};
}

ConjugateMixture::ConjugateMixture(std::vector<MixtureComponent> components,
                                   std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty()) throw std::invalid_argument("ConjugateMixture: no components");
  if (components_.size() != weights_.size()) {
    throw std::invalid_argument("ConjugateMixture: component/weight size mismatch");
  }
  const Family f = components_.front().family();
  for (const auto& c : components_) {
    if (c.family() != f) throw std::invalid_argument("ConjugateMixture: mixed families");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("ConjugateMixture: negative weight");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kWeightSumTol) {
    throw std::invalid_argument("ConjugateMixture: weights must sum to 1");
  }
}

ConjugateMixture::ConjugateMixture(MixtureComponent component)
    : ConjugateMixture(std::vector<MixtureComponent>{component}, std::vector<double>{1.0}) {}

double ConjugateMixture::pdf(double x) const {
  double v = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    if (weights_[k] > 0.0) v += weights_[k] * components_[k].pdf(x);
  }
  return v;
}

double ConjugateMixture::cdf(double x) const {
  double v = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    v += weights_[k] * components_[k].cdf(x);
  }
  return std::clamp(v, 0.0, 1.0);
}

double ConjugateMixture::quantile(double q) const {
  if (!(q > 0.0) || !(q < 1.0)) throw std::domain_error("quantile: q must be in (0,1)");
  double lo;
  double hi;
  switch (family()) {
    case Family::Beta:
      lo = 0.0;
      hi = 1.0;
      break;
    case Family::Gamma: {
      lo = 0.0;
      hi = mean() + 10.0 * std::sqrt(variance()) + 1.0;
      while (cdf(hi) < q) hi *= 2.0;
      break;
    }
    case Family::Normal: {
      const double sd = std::sqrt(variance());
      lo = mean() - 10.0 * sd;
      hi = mean() + 10.0 * sd;
      while (cdf(lo) > q) lo -= 10.0 * sd;
      while (cdf(hi) < q) hi += 10.0 * sd;
      break;
    }
    default:
      throw std::logic_error("quantile: unknown family");
  }
  return detail::find_root_monotone([this, q](double x) { return cdf(x) - q; }, lo, hi, 1e-14);
}

double ConjugateMixture::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k) m += weights_[k] * components_[k].mean();
  return m;
}

double ConjugateMixture::variance() const {
  const double m = mean();
  double second = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const double mk = components_[k].mean();
    second += weights_[k] * (components_[k].variance() + mk * mk);
  }
  return second - m * m;
}

ConjugateMixture robustify(const ConjugateMixture& map_mix, const MixtureComponent& vague,
                           double w_v) {
  if (vague.family() != map_mix.family()) {
    throw std::invalid_argument("robustify: vague component family differs from the MAP mixture");
  }
  if (!(w_v >= 0.0) || !(w_v <= 1.0)) {
    throw std::domain_error("robustify: vague weight must be in [0,1]");
  }
  std::vector<MixtureComponent> comps = map_mix.components();
  std::vector<double> weights = map_mix.weights();
  for (double& w : weights) w *= 1.0 - w_v;
  comps.push_back(vague);
  weights.push_back(w_v);
  // compensate accumulated rounding so the invariant stays exact
  double sum = 0.0;
  for (double w : weights) sum += w;
  weights.back() += 1.0 - sum;
  return {std::move(comps), std::move(weights)};
}

MixtureComponent default_vague(Family family, const ConjugateMixture& map_mix,
                               const Centering& centering,
                               std::optional<double> normal_unit_sd) {
  const auto center = [&]() -> double {
    switch (centering.kind) {
      case Centering::Kind::MapMedian: return map_mix.quantile(0.5);
      case Centering::Kind::MapMean: return map_mix.mean();
      case Centering::Kind::Explicit: return centering.value;
    }
    throw std::logic_error("default_vague: unknown centering");
  };
  switch (family) {
    case Family::Beta:
      return beta_component(1.0, 1.0);
    case Family::Gamma:
      return gamma_component_mean_n(center(), 1.0);
    case Family::Normal: {
      if (!normal_unit_sd) {
        throw std::invalid_argument("default_vague: Normal family needs the unit-information sd");
      }
      return normal_component(center(), *normal_unit_sd);
    }
  }
  throw std::logic_error("default_vague: unknown family");
}

double moment_ess(const ConjugateMixture& m, std::optional<double> normal_reference_sd) {
  const double mu = m.mean();
  const double var = m.variance();
  if (!(var > 0.0)) throw std::domain_error("moment_ess: mixture has zero variance");
  switch (m.family()) {
    case Family::Beta:
      // matched Beta(a,b): a+b = mu(1-mu)/var - 1
      return mu * (1.0 - mu) / var - 1.0;
    case Family::Gamma:
      // matched Gamma rate, in pseudo-exposure units under the Poisson model
      return mu / var;
    case Family::Normal: {
      if (!normal_reference_sd) {
        throw std::invalid_argument("moment_ess: Normal family needs the reference sd");
      }
      return (*normal_reference_sd * *normal_reference_sd) / var;
    }
  }
  throw std::logic_error("moment_ess: unknown family");
}

}  // namespace ebrmap
