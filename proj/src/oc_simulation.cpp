#include "ebrmap/oc_simulation.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace ebrmap {

namespace {

constexpr std::uint64_t kOcStream = 0x4F43u;  // substream tag for replicates

std::string trim_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string method_label(const AnalysisMethod& m) {
  if (const auto* f = std::get_if<FixedWeightMethod>(&m)) {
    return "fixed(" + trim_number(f->w_v) + ")";
  }
  const auto& eb = std::get<EmpiricalBayesMethod>(m);
  return "eb(" + trim_number(eb.gamma) + ")";
}

CurrentData simulate_current(double truth, const TrialDesign& design, CounterRng& rng) {
  switch (design.endpoint) {
    case Endpoint::BinomialLogit: {
      if (truth < 0.0 || truth > 1.0) {
        throw std::domain_error("simulate_current: binomial truth outside [0,1]");
      }
      return binomial_current(rng.binomial(design.n_c, truth), design.n_c);
    }
    case Endpoint::NormalKnownSd: {
      const double se = design.sigma / std::sqrt(static_cast<double>(design.n_c));
      return normal_current(truth + se * rng.normal(), design.n_c, design.sigma);
    }
    case Endpoint::PoissonLogHazard: {
      if (truth < 0.0) throw std::domain_error("simulate_current: hazard truth must be >= 0");
      return tte_current(rng.poisson(truth * design.exposure_c), design.exposure_c);
    }
  }
  throw std::logic_error("simulate_current: unknown endpoint");
}

namespace {

struct ReplicateStats {
  // per method: success flag and posterior median
  std::vector<char> success;
  std::vector<double> median;
};

ReplicateStats run_replicate(const Scenario& s, std::size_t truth_idx, int replicate) {
  CounterRng rng(s.seed, kOcStream, truth_idx, static_cast<std::uint64_t>(replicate));
  const CurrentData data = simulate_current(s.truth_grid[truth_idx], s.design, rng);
  ReplicateStats st;
  st.success.reserve(s.methods.size());
  st.median.reserve(s.methods.size());
  for (const auto& method : s.methods) {
    double w = 0.0;
    if (const auto* f = std::get_if<FixedWeightMethod>(&method)) {
      w = f->w_v;
    } else {
      const auto& eb = std::get<EmpiricalBayesMethod>(method);
      w = eb_weight(s.map_mix, s.vague, data, eb.gamma, eb.grid_step).w_eb;
    }
    const ConjugateMixture prior = robustify(s.map_mix, s.vague, w);
    const ConjugateMixture post = posterior_update(prior, data);
    const double prob = rule_probability(post, s.rule);
    st.success.push_back(prob > s.rule.prob_cutoff ? 1 : 0);
    st.median.push_back(post.quantile(0.5));
  }
  return st;
}

}  // namespace

std::vector<OcRow> run_scenario(const Scenario& s, int threads) {
  if (s.replications < 1) throw std::invalid_argument("run_scenario: replications must be >= 1");
  if (s.truth_grid.empty()) throw std::invalid_argument("run_scenario: empty truth grid");
  if (s.methods.empty()) throw std::invalid_argument("run_scenario: no analysis methods");
  if (endpoint_family(s.endpoint) != s.map_mix.family()) {
    throw std::invalid_argument("run_scenario: MAP mixture family does not match the endpoint");
  }
  if (s.design.endpoint != s.endpoint) {
    throw std::invalid_argument("run_scenario: design endpoint does not match the scenario");
  }
  threads = std::max(1, threads);

  const std::size_t n_truth = s.truth_grid.size();
  const std::size_t n_rep = static_cast<std::size_t>(s.replications);
  const std::size_t total = n_truth * n_rep;
  std::vector<ReplicateStats> results(total);
  std::vector<std::string> failures(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      const std::size_t t = job / n_rep;
      const int r = static_cast<int>(job % n_rep);
      try {
        results[job] = run_replicate(s, t, r);
      } catch (const std::exception& e) {
        failures[job] = e.what();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t job = 0; job < total; ++job) {
    if (!failures[job].empty()) {
      const std::size_t t = job / n_rep;
      throw std::runtime_error("run_scenario: replicate " + std::to_string(job % n_rep) +
                               " at truth " + trim_number(s.truth_grid[t]) + " failed: " +
                               failures[job]);
    }
  }

  // deterministic aggregation in (truth, method, replicate) order
  std::vector<OcRow> rows;
  rows.reserve(n_truth * s.methods.size());
  for (std::size_t t = 0; t < n_truth; ++t) {
    for (std::size_t m = 0; m < s.methods.size(); ++m) {
      double successes = 0.0;
      double mean_median = 0.0;
      double mse = 0.0;
      const double truth = s.truth_grid[t];
      for (std::size_t r = 0; r < n_rep; ++r) {
        const ReplicateStats& st = results[t * n_rep + r];
        successes += st.success[m];
        mean_median += st.median[m];
        mse += (st.median[m] - truth) * (st.median[m] - truth);
      }
      const double reps = static_cast<double>(n_rep);
      OcRow row;
      row.truth = truth;
      row.method = method_label(s.methods[m]);
      row.pos = successes / reps;
      row.abs_bias = std::fabs(mean_median / reps - truth);
      row.mse = mse / reps;
      row.mc_se_pos = std::sqrt(row.pos * (1.0 - row.pos) / reps);
      row.replications = s.replications;
      rows.push_back(row);
    }
  }
  return rows;
}

OcComparison oc_compare(const std::vector<OcRow>& rows, const std::string& baseline) {
  OcComparison cmp;
  cmp.baseline = baseline;
  bool found = false;
  for (const auto& row : rows) {
    if (row.method != baseline) continue;
    found = true;
    for (const auto& other : rows) {
      if (other.truth != row.truth || other.method == baseline) continue;
      OcDelta d{other.truth, other.method, other.pos - row.pos, other.abs_bias - row.abs_bias,
                other.mse - row.mse};
      cmp.max_abs_d_pos = std::max(cmp.max_abs_d_pos, std::fabs(d.d_pos));
      cmp.max_abs_d_bias = std::max(cmp.max_abs_d_bias, std::fabs(d.d_abs_bias));
      cmp.max_abs_d_mse = std::max(cmp.max_abs_d_mse, std::fabs(d.d_mse));
      cmp.deltas.push_back(std::move(d));
    }
  }
  if (!found) throw std::invalid_argument("oc_compare: baseline method '" + baseline + "' not found");
  return cmp;
}

}  // namespace ebrmap
