#include "ebrmap/predictive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "ebrmap/special_functions.hpp"

namespace ebrmap {

std::string endpoint_name(Endpoint e) {
  switch (e) {
    case Endpoint::BinomialLogit: return "binomial";
    case Endpoint::NormalKnownSd: return "normal";
    case Endpoint::PoissonLogHazard: return "tte";
  }
  throw std::logic_error("endpoint_name: unknown endpoint");
}

Endpoint endpoint_from_name(const std::string& name) {
  if (name == "binomial") return Endpoint::BinomialLogit;
  if (name == "normal") return Endpoint::NormalKnownSd;
  if (name == "tte" || name == "count") return Endpoint::PoissonLogHazard;
  throw std::invalid_argument("unknown endpoint: " + name);
}

void validate_summary(const EndpointSummary& s) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BinomialSummary>) {
          if (v.size < 1) throw std::invalid_argument("binomial summary: n must be >= 1");
          if (v.responders < 0 || v.responders > v.size) {
            throw std::invalid_argument("binomial summary: responders must be in [0, n]");
          }
        } else if constexpr (std::is_same_v<T, NormalSummary>) {
          if (v.size < 1) throw std::invalid_argument("normal summary: n must be >= 1");
          if (!(v.sd > 0.0)) throw std::invalid_argument("normal summary: sd must be > 0");
          if (!std::isfinite(v.mean)) throw std::invalid_argument("normal summary: non-finite mean");
        } else {
          if (v.events < 0) throw std::invalid_argument("tte summary: events must be >= 0");
          if (!(v.exposure > 0.0)) throw std::invalid_argument("tte summary: exposure must be > 0");
        }
      },
      s);
}

Endpoint summary_endpoint(const EndpointSummary& s) {
  if (std::holds_alternative<BinomialSummary>(s)) return Endpoint::BinomialLogit;
  if (std::holds_alternative<NormalSummary>(s)) return Endpoint::NormalKnownSd;
  return Endpoint::PoissonLogHazard;
}

Family endpoint_family(Endpoint e) {
  switch (e) {
    case Endpoint::BinomialLogit: return Family::Beta;
    case Endpoint::NormalKnownSd: return Family::Normal;
    case Endpoint::PoissonLogHazard: return Family::Gamma;
  }
  throw std::logic_error("endpoint_family: unknown endpoint");
}

CurrentData binomial_current(long responders, long size) {
  CurrentData d{BinomialSummary{responders, size}};
  validate_summary(d.payload);
  return d;
}

CurrentData normal_current(double mean, long size, double sd) {
  CurrentData d{NormalSummary{mean, size, sd}};
  validate_summary(d.payload);
  return d;
}

CurrentData tte_current(long events, double exposure) {
  CurrentData d{TteSummary{events, exposure}};
  validate_summary(d.payload);
  return d;
}

TrialDesign binomial_design(long n_c) {
  if (n_c < 1) throw std::invalid_argument("binomial design: n_c must be >= 1");
  return {Endpoint::BinomialLogit, n_c, 0.0, 0.0};
}

TrialDesign normal_design(long n_c, double sigma) {
  if (n_c < 1) throw std::invalid_argument("normal design: n_c must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("normal design: sigma must be > 0");
  return {Endpoint::NormalKnownSd, n_c, 0.0, sigma};
}

TrialDesign tte_design(double exposure_c) {
  if (!(exposure_c > 0.0)) throw std::invalid_argument("tte design: exposure must be > 0");
  return {Endpoint::PoissonLogHazard, 0, exposure_c, 0.0};
}

TrialDesign design_of(const CurrentData& data) {
  return std::visit(
      [](const auto& v) -> TrialDesign {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BinomialSummary>) {
          return binomial_design(v.size);
        } else if constexpr (std::is_same_v<T, NormalSummary>) {
          return normal_design(v.size, v.sd);
        } else {
          return tte_design(v.exposure);
        }
      },
      data.payload);
}

double observed_statistic(const CurrentData& data) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BinomialSummary>) {
          return static_cast<double>(v.responders);
        } else if constexpr (std::is_same_v<T, NormalSummary>) {
          return v.mean;
        } else {
          return static_cast<double>(v.events);
        }
      },
      data.payload);
}

PredictiveMixture::PredictiveMixture(Kind kind, TrialDesign design, std::vector<double> weights,
                                     std::vector<Component> components)
    : kind_(kind),
      design_(design),
      weights_(std::move(weights)),
      components_(std::move(components)) {
  if (weights_.empty() || weights_.size() != components_.size()) {
    throw std::invalid_argument("PredictiveMixture: component/weight size mismatch");
  }
}

namespace {

// Beta-Binomial pmf over {0..n} by the stable recursive ratio.
// pmf(0) = B(a, b+n)/B(a, b); pmf(y+1)/pmf(y) = (n-y)(a+y) / ((y+1)(b+n-y-1)).
double beta_binomial_cdf(long t, long n, double a, double b) {
  if (t < 0) return 0.0;
  if (t >= n) return 1.0;
  double pmf = std::exp(log_beta_fn(a, b + static_cast<double>(n)) - log_beta_fn(a, b));
  double cdf = pmf;
  for (long y = 0; y < t; ++y) {
    pmf *= (static_cast<double>(n - y) * (a + static_cast<double>(y))) /
           (static_cast<double>(y + 1) * (b + static_cast<double>(n - y - 1)));
    cdf += pmf;
  }
  return std::min(cdf, 1.0);
}

double beta_binomial_pmf(long y, long n, double a, double b) {
  if (y < 0 || y > n) return 0.0;
  const double yd = static_cast<double>(y);
  const double nd = static_cast<double>(n);
  return std::exp(log_gamma_fn(nd + 1.0) - log_gamma_fn(yd + 1.0) - log_gamma_fn(nd - yd + 1.0) +
                  log_beta_fn(a + yd, b + nd - yd) - log_beta_fn(a, b));
}

// Negative binomial (Gamma-Poisson) with size alpha and success probability
// p = rate/(rate+exposure): pmf(r) = C(r+alpha-1, r) p^alpha (1-p)^r.
// CDF via the regularized incomplete beta identity, avoiding the infinite sum.
double neg_binomial_cdf(long t, double alpha, double p) {
  if (t < 0) return 0.0;
  return regularized_incomplete_beta(alpha, static_cast<double>(t) + 1.0, p);
}

double neg_binomial_pmf(long r, double alpha, double p) {
  if (r < 0) return 0.0;
  const double rd = static_cast<double>(r);
  return std::exp(log_gamma_fn(alpha + rd) - log_gamma_fn(alpha) - log_gamma_fn(rd + 1.0) +
                  alpha * std::log(p) + rd * std::log1p(-p));
}

}  // namespace

double PredictiveMixture::mass(double t) const {
  double v = 0.0;
  switch (kind_) {
    case Kind::BetaBinomial: {
      const long y = static_cast<long>(std::llround(t));
      for (std::size_t k = 0; k < weights_.size(); ++k) {
        v += weights_[k] * beta_binomial_pmf(y, design_.n_c, components_[k].p1, components_[k].p2);
      }
      break;
    }
    case Kind::NegBinomial: {
      const long r = static_cast<long>(std::llround(t));
      for (std::size_t k = 0; k < weights_.size(); ++k) {
        v += weights_[k] * neg_binomial_pmf(r, components_[k].p1, components_[k].p2);
      }
      break;
    }
    case Kind::NormalPred: {
      for (std::size_t k = 0; k < weights_.size(); ++k) {
        const double sd = components_[k].p2;
        v += weights_[k] * standard_normal_pdf((t - components_[k].p1) / sd) / sd;
      }
      break;
    }
  }
  return v;
}

double PredictiveMixture::cdf(double t) const {
  double v = 0.0;
  switch (kind_) {
    case Kind::BetaBinomial: {
      const long y = static_cast<long>(std::floor(t));
      for (std::size_t k = 0; k < weights_.size(); ++k) {
        v += weights_[k] * beta_binomial_cdf(y, design_.n_c, components_[k].p1, components_[k].p2);
      }
      break;
    }
    case Kind::NegBinomial: {
      const long r = static_cast<long>(std::floor(t));
      for (std::size_t k = 0; k < weights_.size(); ++k) {
        v += weights_[k] * neg_binomial_cdf(r, components_[k].p1, components_[k].p2);
      }
      break;
    }
    case Kind::NormalPred: {
      for (std::size_t k = 0; k < weights_.size(); ++k) {
        v += weights_[k] * standard_normal_cdf((t - components_[k].p1) / components_[k].p2);
      }
      break;
    }
  }
  return std::clamp(v, 0.0, 1.0);
}

double PredictiveMixture::tail_geq(double t) const {
  if (discrete()) {
    const long r = static_cast<long>(std::ceil(t));
    if (r <= 0) return 1.0;
    return std::clamp(1.0 - cdf(static_cast<double>(r - 1)), 0.0, 1.0);
  }
  return std::clamp(1.0 - cdf(t), 0.0, 1.0);
}

PredictiveMixture prior_predictive(const ConjugateMixture& prior, const TrialDesign& design) {
  if (endpoint_family(design.endpoint) != prior.family()) {
    throw std::invalid_argument("prior_predictive: prior family does not match the endpoint");
  }
  std::vector<PredictiveMixture::Component> comps;
  comps.reserve(prior.size());
  PredictiveMixture::Kind kind;
  switch (design.endpoint) {
    case Endpoint::BinomialLogit:
      kind = PredictiveMixture::Kind::BetaBinomial;
      for (const auto& c : prior.components()) comps.push_back({c.p1(), c.p2()});
      break;
    case Endpoint::PoissonLogHazard:
      kind = PredictiveMixture::Kind::NegBinomial;
      for (const auto& c : prior.components()) {
        comps.push_back({c.p1(), c.p2() / (c.p2() + design.exposure_c)});
      }
      break;
    case Endpoint::NormalKnownSd: {
      kind = PredictiveMixture::Kind::NormalPred;
      const double lik_var = design.sigma * design.sigma / static_cast<double>(design.n_c);
      for (const auto& c : prior.components()) {
        comps.push_back({c.p1(), std::sqrt(c.p2() * c.p2() + lik_var)});
      }
      break;
    }
    default:
      throw std::logic_error("prior_predictive: unknown endpoint");
  }
  return {kind, design, prior.weights(), std::move(comps)};
}

double ppp(const ConjugateMixture& prior, const CurrentData& data) {
  validate_summary(data.payload);
  const PredictiveMixture pred = prior_predictive(prior, design_of(data));
  const double t = observed_statistic(data);
  const double lower = pred.tail_leq(t);
  const double upper = pred.tail_geq(t);
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

}  // namespace ebrmap
