#include "ebrmap/hierarchical_mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "ebrmap/rng.hpp"

namespace ebrmap {

namespace {

constexpr std::uint64_t kMcmcStream = 0x4D43u;  // stream tag for chain substreams

struct StudyTerms {
  // log-likelihood of one study as a function of its transformed parameter
  Endpoint endpoint;
  double a = 0.0;  // responders / mean / events
  double b = 0.0;  // size / sd^2/n / exposure
};

double study_loglik(const StudyTerms& s, double theta) {
  switch (s.endpoint) {
    case Endpoint::BinomialLogit:
      // r*theta - n*log(1+e^theta)
      return s.a * theta - s.b * (theta > 0 ? theta + std::log1p(std::exp(-theta))
                                            : std::log1p(std::exp(theta)));
    case Endpoint::NormalKnownSd:
      return -0.5 * (s.a - theta) * (s.a - theta) / s.b;
    case Endpoint::PoissonLogHazard:
      return s.a * theta - s.b * std::exp(theta);
  }
  return 0.0;
}

double initial_theta(const StudyTerms& s) {
  switch (s.endpoint) {
    case Endpoint::BinomialLogit: {
      const double p = (s.a + 0.5) / (s.b + 1.0);
      return std::log(p / (1.0 - p));
    }
    case Endpoint::NormalKnownSd:
      return s.a;
    case Endpoint::PoissonLogHazard:
      return std::log((s.a + 0.5) / s.b);
  }
  return 0.0;
}

double to_natural(Endpoint e, double theta) {
  switch (e) {
    case Endpoint::BinomialLogit:
      return 1.0 / (1.0 + std::exp(-theta));
    case Endpoint::NormalKnownSd:
      return theta;
    case Endpoint::PoissonLogHazard:
      return std::exp(theta);
  }
  return theta;
}

struct ChainOutput {
  std::vector<double> theta_new_trans;
  std::vector<double> mu;
  std::vector<double> tau;
  double accept_rate = 0.0;
};

ChainOutput run_chain(const std::vector<StudyTerms>& studies, const HierarchicalSpec& spec,
                      const McmcConfig& cfg, int chain_index) {
  CounterRng rng(cfg.seed, kMcmcStream, static_cast<std::uint64_t>(chain_index));
  const std::size_t H = studies.size();
  const int iters = cfg.iterations_per_chain;
  const int burn = static_cast<int>(std::floor(cfg.burn_in_fraction * iters));
  const int keep = iters - burn;

  std::vector<double> theta(H);
  for (std::size_t i = 0; i < H; ++i) theta[i] = initial_theta(studies[i]);
  double mu = 0.0;
  for (double t : theta) mu += t;
  mu /= static_cast<double>(H);
  double sd0 = 0.0;
  for (double t : theta) sd0 += (t - mu) * (t - mu);
  sd0 = std::sqrt(sd0 / static_cast<double>(H));
  double tau = std::max({sd0, 0.1 * spec.tau_prior.scale, 1e-3});

  std::vector<double> step_theta(H, 1.0);
  double step_log_tau = 0.5;

  const double m0 = spec.mu_prior.mean;
  const double prec0 = 1.0 / (spec.mu_prior.sd * spec.mu_prior.sd);
  const double hn_scale2 = spec.tau_prior.scale * spec.tau_prior.scale;

  ChainOutput out;
  out.theta_new_trans.reserve(keep);
  out.mu.reserve(keep);
  out.tau.reserve(keep);
  long accepted = 0;
  long proposed = 0;

  for (int iter = 0; iter < iters; ++iter) {
    const bool adapting = iter < burn;
    const double eta = adapting ? 1.0 / std::pow(iter + 1.0, 0.6) : 0.0;

    // study parameters: adaptive random walk on the transformed scale
    for (std::size_t i = 0; i < H; ++i) {
      const double prop = theta[i] + step_theta[i] * rng.normal();
      const double d_lik = study_loglik(studies[i], prop) - study_loglik(studies[i], theta[i]);
      const double d_prior =
          (-0.5 * (prop - mu) * (prop - mu) + 0.5 * (theta[i] - mu) * (theta[i] - mu)) /
          (tau * tau);
      const double log_alpha = d_lik + d_prior;
      const double alpha = std::min(1.0, std::exp(std::min(0.0, log_alpha)));
      const bool accept = std::log(rng.uniform()) < log_alpha;
      if (accept) theta[i] = prop;
      if (adapting) {
        step_theta[i] *= std::exp(eta * (alpha - cfg.target_accept));
        step_theta[i] = std::clamp(step_theta[i], 1e-6, 1e3);
      } else {
        ++proposed;
        if (accept) ++accepted;
      }
    }

    // mu: conjugate normal full conditional
    {
      const double prec = prec0 + static_cast<double>(H) / (tau * tau);
      double sum_theta = 0.0;
      for (double t : theta) sum_theta += t;
      const double mean = (m0 * prec0 + sum_theta / (tau * tau)) / prec;
      mu = mean + rng.normal() / std::sqrt(prec);
    }

    // tau: random walk on log tau with the half-normal prior and Jacobian
    {
      const double u = std::log(tau);
      const double prop_u = u + step_log_tau * rng.normal();
      const double prop_tau = std::exp(prop_u);
      double ss = 0.0;
      for (double t : theta) ss += (t - mu) * (t - mu);
      const auto log_target = [&](double lt, double t2) {
        return -static_cast<double>(H) * lt - 0.5 * ss / t2 - 0.5 * t2 / hn_scale2 + lt;
      };
      const double log_alpha =
          log_target(prop_u, prop_tau * prop_tau) - log_target(u, tau * tau);
      const double alpha = std::min(1.0, std::exp(std::min(0.0, log_alpha)));
      const bool accept = std::log(rng.uniform()) < log_alpha;
      if (accept) tau = prop_tau;
      if (adapting) {
        step_log_tau *= std::exp(eta * (alpha - cfg.target_accept));
        step_log_tau = std::clamp(step_log_tau, 1e-6, 1e3);
      } else {
        ++proposed;
        if (accept) ++accepted;
      }
    }

    if (iter >= burn) {
      out.theta_new_trans.push_back(mu + tau * rng.normal());
      out.mu.push_back(mu);
      out.tau.push_back(tau);
    }
  }
  out.accept_rate = proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
  return out;
}

}  // namespace

double potential_scale_reduction(const std::vector<std::vector<double>>& chains) {
  // split each chain in half to detect within-chain drift
  std::vector<std::pair<double, double>> seq;  // (mean, variance)
  std::size_t n = std::numeric_limits<std::size_t>::max();
  for (const auto& c : chains) n = std::min(n, c.size());
  n = (n / 2) * 2;
  if (chains.empty() || n < 4) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t half = n / 2;
  for (const auto& c : chains) {
    for (int part = 0; part < 2; ++part) {
      const std::size_t lo = part * half;
      double m = 0.0;
      for (std::size_t i = lo; i < lo + half; ++i) m += c[i];
      m /= static_cast<double>(half);
      double v = 0.0;
      for (std::size_t i = lo; i < lo + half; ++i) v += (c[i] - m) * (c[i] - m);
      v /= static_cast<double>(half - 1);
      seq.emplace_back(m, v);
    }
  }
  const double m_seq = static_cast<double>(seq.size());
  double w = 0.0, grand = 0.0;
  for (const auto& [m, v] : seq) {
    w += v;
    grand += m;
  }
  w /= m_seq;
  grand /= m_seq;
  double b = 0.0;
  for (const auto& [m, v] : seq) b += (m - grand) * (m - grand);
  b *= static_cast<double>(half) / (m_seq - 1.0);
  if (!(w > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double var_plus = (static_cast<double>(half) - 1.0) / half * w + b / half;
  return std::sqrt(var_plus / w);
}

MapDraws derive_map(const HistoricalDataset& data, const HierarchicalSpec& spec,
                    const McmcConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("derive_map: empty historical dataset");
  if (cfg.chains < 1) throw std::invalid_argument("derive_map: chains must be >= 1");
  if (!(cfg.burn_in_fraction > 0.0) || !(cfg.burn_in_fraction < 1.0)) {
    throw std::invalid_argument("derive_map: burn-in fraction must be in (0,1)");
  }
  if (cfg.iterations_per_chain < 2) {
    throw std::invalid_argument("derive_map: too few iterations");
  }
  if (!(spec.mu_prior.sd > 0.0) || !(spec.tau_prior.scale > 0.0)) {
    throw std::invalid_argument("derive_map: hyper-prior scales must be > 0");
  }

  std::vector<StudyTerms> studies;
  studies.reserve(data.size());
  for (const auto& rec : data) {
    validate_summary(rec.payload);
    if (summary_endpoint(rec.payload) != spec.endpoint) {
      throw std::invalid_argument("derive_map: record '" + rec.study_id +
                                  "' does not match the endpoint of the model");
    }
    StudyTerms t;
    t.endpoint = spec.endpoint;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, BinomialSummary>) {
            t.a = static_cast<double>(v.responders);
            t.b = static_cast<double>(v.size);
          } else if constexpr (std::is_same_v<T, NormalSummary>) {
            t.a = v.mean;
            t.b = v.sd * v.sd / static_cast<double>(v.size);
          } else {
            t.a = static_cast<double>(v.events);
            t.b = v.exposure;
          }
        },
        rec.payload);
    studies.push_back(t);
  }

  std::vector<std::future<ChainOutput>> futures;
  futures.reserve(cfg.chains);
  for (int c = 0; c < cfg.chains; ++c) {
    futures.push_back(std::async(std::launch::async, run_chain, std::cref(studies),
                                 std::cref(spec), std::cref(cfg), c));
  }
  std::vector<ChainOutput> outs;
  outs.reserve(cfg.chains);
  for (auto& f : futures) outs.push_back(f.get());

  MapDraws draws;
  draws.chains = cfg.chains;
  draws.draws_per_chain = static_cast<int>(outs.front().theta_new_trans.size());
  std::vector<std::vector<double>> mu_chains, tau_chains;
  for (const auto& o : outs) {
    for (double t : o.theta_new_trans) {
      draws.transformed_scale_draws.push_back(t);
      draws.theta_new.push_back(to_natural(spec.endpoint, t));
    }
    draws.accept_rates.push_back(o.accept_rate);
    mu_chains.push_back(o.mu);
    tau_chains.push_back(o.tau);
  }
  draws.rhat_mu = potential_scale_reduction(mu_chains);
  draws.rhat_tau = potential_scale_reduction(tau_chains);
  if (draws.theta_new.size() < 1000) {
    draws.warnings.push_back("fewer than 1000 post-burn-in draws");
  }
  return draws;
}

ConvergenceReport check_convergence(const MapDraws& draws, double rhat_limit) {
  ConvergenceReport rep;
  rep.rhat_limit = rhat_limit;
  rep.rhat_mu = draws.rhat_mu;
  rep.rhat_tau = draws.rhat_tau;
  rep.accept_rates = draws.accept_rates;
  rep.bulk_draws = draws.theta_new.size();
  if (draws.chains < 2) {
    rep.degraded = true;
    rep.message = "rhat unavailable: need at least 2 chains";
    return rep;
  }
  if (std::isnan(draws.rhat_mu) || std::isnan(draws.rhat_tau)) {
    rep.degraded = true;
    rep.message = "rhat undefined: zero within-chain variance";
    return rep;
  }
  rep.pass = draws.rhat_mu <= rhat_limit && draws.rhat_tau <= rhat_limit;
  rep.message = rep.pass ? "converged" : "rhat above limit";
  return rep;
}

}  // namespace ebrmap
