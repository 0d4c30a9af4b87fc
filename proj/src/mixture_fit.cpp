#include "ebrmap/mixture_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ebrmap/rng.hpp"
#include "ebrmap/special_functions.hpp"

namespace ebrmap {

namespace {

constexpr double kParamLo = 1e-4;
constexpr double kParamHi = 1e8;

double clamp_param(double v) { return std::clamp(v, kParamLo, kParamHi); }

struct Moments {
  double mean;
  double var;
};

Moments weighted_moments(std::span<const double> x, std::span<const double> w) {
  double ws = 0.0, m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ws += w[i];
    m += w[i] * x[i];
  }
  m /= ws;
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) v += w[i] * (x[i] - m) * (x[i] - m);
  v /= ws;
  return {m, v};
}

// Method-of-moments component for a block of draws; the EM starting point.
MixtureComponent moments_component(Family family, double mean, double var) {
  var = std::max(var, 1e-12);
  switch (family) {
    case Family::Beta: {
      const double m = std::clamp(mean, 1e-6, 1.0 - 1e-6);
      double common = m * (1.0 - m) / var - 1.0;
      if (!(common > 0.0)) common = 1.0;
      return beta_component(clamp_param(m * common), clamp_param((1.0 - m) * common));
    }
    case Family::Gamma: {
      const double m = std::max(mean, 1e-12);
      return gamma_component(clamp_param(m * m / var), clamp_param(m / var));
    }
    case Family::Normal:
      return normal_component(mean, std::sqrt(var));
  }
  throw std::logic_error("moments_component: unknown family");
}

// Weighted Beta MLE: solve psi(a)-psi(a+b)=t1, psi(b)-psi(a+b)=t2 by Newton
// iteration on (log a, log b).
MixtureComponent beta_mle(double t1, double t2, double a, double b) {
  for (int it = 0; it < 100; ++it) {
    const double pab = digamma(a + b);
    const double f1 = digamma(a) - pab - t1;
    const double f2 = digamma(b) - pab - t2;
    const double tab = trigamma(a + b);
    // Jacobian wrt (log a, log b)
    const double j11 = a * (trigamma(a) - tab);
    const double j12 = -b * tab;
    const double j21 = -a * tab;
    const double j22 = b * (trigamma(b) - tab);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) break;
    double du = (f1 * j22 - f2 * j12) / det;
    double dv = (f2 * j11 - f1 * j21) / det;
    const double cap = 2.0;  // damp large Newton steps
    du = std::clamp(du, -cap, cap);
    dv = std::clamp(dv, -cap, cap);
    a = clamp_param(a * std::exp(-du));
    b = clamp_param(b * std::exp(-dv));
    if (std::fabs(du) < 1e-10 && std::fabs(dv) < 1e-10) break;
  }
  return beta_component(a, b);
}

// Weighted Gamma MLE: shape solves log(k) - psi(k) = log(mean) - mean(log x).
MixtureComponent gamma_mle(double mean_x, double mean_log_x, double shape0) {
  const double c = std::log(mean_x) - mean_log_x;
  double k;
  if (c <= 0.0 || !std::isfinite(c)) {
    k = shape0;  // numerically coincident draws; keep the current shape
  } else {
    k = (3.0 - c + std::sqrt((c - 3.0) * (c - 3.0) + 24.0 * c)) / (12.0 * c);
    for (int it = 0; it < 100; ++it) {
      const double f = std::log(k) - digamma(k) - c;
      const double fp = 1.0 / k - trigamma(k);
      double step = f / (fp * k);  // Newton on log k
      step = std::clamp(step, -2.0, 2.0);
      k = clamp_param(k * std::exp(step));
      if (std::fabs(step) < 1e-10) break;
    }
  }
  k = clamp_param(k);
  return gamma_component(k, clamp_param(k / mean_x));
}

struct EmState {
  std::vector<MixtureComponent> comps;
  std::vector<double> weights;
};

EmState initial_state(std::span<const double> sorted_draws, Family family, int k,
                      CounterRng* jitter) {
  const std::size_t n = sorted_draws.size();
  EmState st;
  st.weights.assign(k, 1.0 / k);
  for (int j = 0; j < k; ++j) {
    const std::size_t lo = n * j / k;
    const std::size_t hi = std::max(lo + 1, n * (j + 1) / k);
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m += sorted_draws[i];
    m /= static_cast<double>(hi - lo);
    double v = 0.0;
    for (std::size_t i = lo; i < hi; ++i) v += (sorted_draws[i] - m) * (sorted_draws[i] - m);
    v /= static_cast<double>(hi - lo);
    if (!(v > 0.0)) {
      // flat block; borrow the overall spread
      const auto all = weighted_moments(sorted_draws, std::vector<double>(n, 1.0));
      v = std::max(all.var, 1e-10);
    }
    MixtureComponent c = moments_component(family, m, v);
    if (jitter) {
      const double j1 = std::exp(0.25 * jitter->normal());
      const double j2 = std::exp(0.25 * jitter->normal());
      if (family == Family::Normal) {
        c = normal_component(c.p1() + 0.25 * std::sqrt(v) * jitter->normal(), c.p2() * j2);
      } else {
        c = MixtureComponent(family, clamp_param(c.p1() * j1), clamp_param(c.p2() * j2));
      }
    }
    st.comps.push_back(c);
  }
  if (jitter) {
    double sum = 0.0;
    for (double& w : st.weights) {
      w *= 0.5 + jitter->uniform();
      sum += w;
    }
    for (double& w : st.weights) w /= sum;
  }
  return st;
}

double log_sum_exp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

struct EmRun {
  EmState state;
  double log_likelihood;
  int iterations;
  bool converged;
  std::vector<double> trace;
};

EmRun run_em(std::span<const double> draws, Family family, int k, EmState st,
             const FitOptions& opt) {
  const std::size_t n = draws.size();
  std::vector<double> resp(n * k);
  std::vector<double> log_w(k), log_terms(k);
  double prev_ll = -std::numeric_limits<double>::infinity();
  EmRun run{std::move(st), prev_ll, 0, false, {}};

  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    // E step
    for (int j = 0; j < k; ++j) {
      log_w[j] = run.state.weights[j] > 0.0 ? std::log(run.state.weights[j])
                                            : -std::numeric_limits<double>::infinity();
    }
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) {
        log_terms[j] = log_w[j] + run.state.comps[j].log_pdf(draws[i]);
      }
      const double lse = log_sum_exp(log_terms);
      ll += lse;
      for (int j = 0; j < k; ++j) resp[i * k + j] = std::exp(log_terms[j] - lse);
    }
    if (iter > 1 && ll < prev_ll - 1e-9 * (1.0 + std::fabs(prev_ll))) {
      throw std::runtime_error("fit_mixture_em: EM log-likelihood decreased");
    }
    run.trace.push_back(ll);
    const bool done =
        iter > 1 && std::fabs(ll - prev_ll) <= opt.relative_tolerance * (1.0 + std::fabs(ll));
    run.log_likelihood = ll;
    run.iterations = iter;
    prev_ll = ll;
    if (done) {
      run.converged = true;
      break;
    }

    // M step
    for (int j = 0; j < k; ++j) {
      double rsum = 0.0;
      for (std::size_t i = 0; i < n; ++i) rsum += resp[i * k + j];
      run.state.weights[j] = rsum / static_cast<double>(n);
      if (rsum <= 0.0) continue;  // dead component; weight handles it
      switch (family) {
        case Family::Normal: {
          double m = 0.0;
          for (std::size_t i = 0; i < n; ++i) m += resp[i * k + j] * draws[i];
          m /= rsum;
          double v = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            v += resp[i * k + j] * (draws[i] - m) * (draws[i] - m);
          }
          v = std::max(v / rsum, 1e-12);
          run.state.comps[j] = normal_component(m, std::sqrt(v));
          break;
        }
        case Family::Beta: {
          double t1 = 0.0, t2 = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            t1 += resp[i * k + j] * std::log(draws[i]);
            t2 += resp[i * k + j] * std::log1p(-draws[i]);
          }
          run.state.comps[j] = beta_mle(t1 / rsum, t2 / rsum, run.state.comps[j].p1(),
                                        run.state.comps[j].p2());
          break;
        }
        case Family::Gamma: {
          double mx = 0.0, mlx = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            mx += resp[i * k + j] * draws[i];
            mlx += resp[i * k + j] * std::log(draws[i]);
          }
          run.state.comps[j] = gamma_mle(mx / rsum, mlx / rsum, run.state.comps[j].p1());
          break;
        }
      }
    }
  }
  return run;
}

double ks_statistic(std::span<const double> sorted_draws, const ConjugateMixture& mix) {
  const std::size_t n = sorted_draws.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = mix.cdf(sorted_draws[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

void validate_draws(std::span<const double> draws, Family family) {
  if (draws.empty()) throw std::invalid_argument("fit_mixture_em: empty draw set");
  for (double x : draws) {
    if (!std::isfinite(x)) throw std::invalid_argument("fit_mixture_em: non-finite draw");
    switch (family) {
      case Family::Beta:
        if (!(x > 0.0) || !(x < 1.0)) {
          throw std::domain_error("fit_mixture_em: Beta draws must lie strictly inside (0,1)");
        }
        break;
      case Family::Gamma:
        if (!(x > 0.0)) throw std::domain_error("fit_mixture_em: Gamma draws must be > 0");
        break;
      case Family::Normal:
        break;
    }
  }
  const double first = draws.front();
  const bool constant =
      std::all_of(draws.begin(), draws.end(), [first](double x) { return x == first; });
  if (constant) throw std::invalid_argument("fit_mixture_em: zero-variance sample");
}

}  // namespace

std::pair<ConjugateMixture, FitReport> fit_mixture_em(std::span<const double> draws,
                                                      Family family, int k,
                                                      const FitOptions& opt) {
  if (k < 1) throw std::invalid_argument("fit_mixture_em: k must be >= 1");
  validate_draws(draws, family);

  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());

  EmRun best;
  bool have_best = false;
  int best_restart = 0;
  const int restarts = std::max(1, opt.restarts);
  for (int r = 0; r < restarts; ++r) {
    CounterRng jitter(opt.jitter_seed, static_cast<std::uint64_t>(k),
                      static_cast<std::uint64_t>(r));
    EmState st = initial_state(sorted, family, k, r == 0 ? nullptr : &jitter);
    EmRun run;
    try {
      run = run_em(draws, family, k, std::move(st), opt);
    } catch (const std::runtime_error&) {
      continue;  // this restart went numerically bad; others may succeed
    }
    if (!have_best || run.log_likelihood > best.log_likelihood) {
      best = std::move(run);
      best_restart = r;
      have_best = true;
    }
  }
  if (!have_best) throw std::runtime_error("fit_mixture_em: all restarts failed");

  // prune numerically dead components
  std::vector<MixtureComponent> comps;
  std::vector<double> weights;
  for (std::size_t j = 0; j < best.state.comps.size(); ++j) {
    if (best.state.weights[j] >= opt.weight_floor) {
      comps.push_back(best.state.comps[j]);
      weights.push_back(best.state.weights[j]);
    }
  }
  if (comps.empty()) throw std::runtime_error("fit_mixture_em: all components degenerate");
  const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= wsum;
  // keep heavier components first; stable for equal weights
  std::vector<std::size_t> order(comps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  std::vector<MixtureComponent> comps_sorted;
  std::vector<double> weights_sorted;
  for (std::size_t idx : order) {
    comps_sorted.push_back(comps[idx]);
    weights_sorted.push_back(weights[idx]);
  }
  double sum2 = std::accumulate(weights_sorted.begin(), weights_sorted.end(), 0.0);
  weights_sorted.back() += 1.0 - sum2;

  ConjugateMixture mix(std::move(comps_sorted), std::move(weights_sorted));
  FitReport report;
  report.k = k;
  report.log_likelihood = best.log_likelihood;
  report.aic = 2.0 * (3.0 * k - 1.0) - 2.0 * best.log_likelihood;
  report.ks_distance = ks_statistic(sorted, mix);
  report.iterations = best.iterations;
  report.converged = best.converged;
  report.restarts_used = best_restart;
  if (opt.log_likelihood_trace) *opt.log_likelihood_trace = best.trace;
  return {std::move(mix), report};
}

std::pair<ConjugateMixture, FitReport> select_mixture(std::span<const double> draws,
                                                      Family family, int k_max,
                                                      const FitOptions& opt) {
  if (k_max < 1) throw std::invalid_argument("select_mixture: k_max must be >= 1");
  std::pair<ConjugateMixture, FitReport> best{ConjugateMixture(beta_component(1.0, 1.0)), {}};
  bool have_best = false;
  for (int k = 1; k <= k_max; ++k) {
    auto fit = fit_mixture_em(draws, family, k, opt);
    if (!have_best || fit.second.aic < best.second.aic) {
      best = std::move(fit);
      have_best = true;
    }
  }
  return best;
}

}  // namespace ebrmap
