#include "ebrmap/posterior.hpp"

#include <cmath>
#include <stdexcept>

#include "ebrmap/eb_weight.hpp"
#include "ebrmap/predictive.hpp"

namespace ebrmap {

double rule_probability(const ConjugateMixture& posterior, const DecisionRule& rule) {
  const double p = posterior.cdf(rule.theta_star);
  return rule.direction == DecisionRule::Direction::Less ? p : 1.0 - p;
}

ConjugateMixture posterior_update(const ConjugateMixture& prior, const CurrentData& data) {
  validate_summary(data.payload);
  const Endpoint ep = data.endpoint();
  if (endpoint_family(ep) != prior.family()) {
    throw std::invalid_argument("posterior_update: prior family does not match the data endpoint");
  }
  // marginal likelihood of the data under each component = that component's
  // predictive mass at the observed statistic
  const PredictiveMixture pred = prior_predictive(prior, design_of(data));
  const double t = observed_statistic(data);

  std::vector<MixtureComponent> comps;
  std::vector<double> weights;
  comps.reserve(prior.size());
  weights.reserve(prior.size());
  double wsum = 0.0;
  for (std::size_t k = 0; k < prior.size(); ++k) {
    const auto& c = prior.component(k);
    const PredictiveMixture one(pred.kind(), pred.design(), {1.0}, {pred.components()[k]});
    const double marginal = one.mass(t);
    const double w = prior.weight(k) * marginal;
    wsum += w;
    weights.push_back(w);
    switch (ep) {
      case Endpoint::BinomialLogit: {
        const auto& d = std::get<BinomialSummary>(data.payload);
        comps.push_back(beta_component(c.p1() + static_cast<double>(d.responders),
                                       c.p2() + static_cast<double>(d.size - d.responders)));
        break;
      }
      case Endpoint::PoissonLogHazard: {
        const auto& d = std::get<TteSummary>(data.payload);
        comps.push_back(
            gamma_component(c.p1() + static_cast<double>(d.events), c.p2() + d.exposure));
        break;
      }
      case Endpoint::NormalKnownSd: {
        const auto& d = std::get<NormalSummary>(data.payload);
        const double lik_var = d.sd * d.sd / static_cast<double>(d.size);
        const double prior_var = c.p2() * c.p2();
        const double post_var = 1.0 / (1.0 / prior_var + 1.0 / lik_var);
        const double post_mean = post_var * (c.p1() / prior_var + d.mean / lik_var);
        comps.push_back(normal_component(post_mean, std::sqrt(post_var)));
        break;
      }
    }
  }
  if (!(wsum > 0.0)) {
    throw std::runtime_error("posterior_update: zero marginal likelihood for every component");
  }
  for (double& w : weights) w /= wsum;
  double sum2 = 0.0;
  for (double w : weights) sum2 += w;
  weights.back() += 1.0 - sum2;
  return {std::move(comps), std::move(weights)};
}

PosteriorSummary summarize_posterior(const ConjugateMixture& posterior, const DecisionRule& rule,
                                     double ci_level) {
  PosteriorSummary s = summarize_posterior(posterior, ci_level);
  s.rule_prob = rule_probability(posterior, rule);
  s.success = *s.rule_prob > rule.prob_cutoff;
  return s;
}

PosteriorSummary summarize_posterior(const ConjugateMixture& posterior, double ci_level) {
  if (!(ci_level > 0.0) || !(ci_level < 1.0)) {
    throw std::domain_error("summarize_posterior: ci_level must be in (0,1)");
  }
  const double tail = 0.5 * (1.0 - ci_level);
  PosteriorSummary s{posterior};
  s.median = posterior.quantile(0.5);
  s.ci_lo = posterior.quantile(tail);
  s.ci_hi = posterior.quantile(1.0 - tail);
  s.ci_level = ci_level;
  return s;
}

PweAnalysisResult analyze_pwe(const std::vector<ConjugateMixture>& per_interval_map,
                              const std::vector<CurrentData>& per_interval_data,
                              const std::vector<double>& gammas,
                              const std::optional<DecisionRule>& rule, double grid_step,
                              const std::vector<MixtureComponent>* vague) {
  const std::size_t m = per_interval_map.size();
  if (m == 0) throw std::invalid_argument("analyze_pwe: no intervals");
  if (per_interval_data.size() != m || gammas.size() != m ||
      (vague != nullptr && vague->size() != m)) {
    throw std::invalid_argument("analyze_pwe: per-interval inputs have mismatched lengths");
  }
  PweAnalysisResult out;
  for (std::size_t i = 0; i < m; ++i) {
    const MixtureComponent v =
        vague ? (*vague)[i]
              : default_vague(per_interval_map[i].family(), per_interval_map[i],
                              Centering::map_mean());
    const EbWeightResult ebw =
        eb_weight(per_interval_map[i], v, per_interval_data[i], gammas[i], grid_step);
    const ConjugateMixture prior = robustify(per_interval_map[i], v, ebw.w_eb);
    const ConjugateMixture post = posterior_update(prior, per_interval_data[i]);
    out.summaries.push_back(rule ? summarize_posterior(post, *rule)
                                 : summarize_posterior(post));
    out.eb_weights.push_back(ebw.w_eb);
  }
  return out;
}

}  // namespace ebrmap
