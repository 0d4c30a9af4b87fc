#include "ebrmap/eb_weight.hpp"

#include <cmath>
#include <stdexcept>

namespace ebrmap {

namespace {

std::vector<double> weight_grid(double grid_step) {
  if (!(grid_step > 0.0) || grid_step > 0.05) {
    throw std::domain_error("eb_weight: grid step must be in (0, 0.05]");
  }
  std::vector<double> grid;
  for (long j = 0;; ++j) {
    const double w = static_cast<double>(j) * grid_step;
    if (w >= 1.0 - 1e-12) break;
    grid.push_back(w);
  }
  grid.push_back(1.0);
  return grid;
}

}  // namespace

EbWeightResult eb_weight(const ConjugateMixture& map_mix, const MixtureComponent& vague,
                         const CurrentData& data, double gamma, double grid_step) {
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw std::domain_error("eb_weight: gamma must be in (0,1)");
  }
  EbWeightResult result;
  result.gamma = gamma;
  result.grid_step = grid_step;
  result.fallback_used = true;
  for (double w : weight_grid(grid_step)) {
    const double p = ppp(robustify(map_mix, vague, w), data);
    result.curve.emplace_back(w, p);
    if (result.fallback_used && p >= gamma) {
      result.w_eb = w;
      result.fallback_used = false;
    }
  }
  if (result.fallback_used) result.w_eb = 1.0;
  return result;
}

std::vector<double> default_observed_grid(const TrialDesign& design, long tte_max_events) {
  std::vector<double> grid;
  switch (design.endpoint) {
    case Endpoint::BinomialLogit:
      for (long y = 0; y <= design.n_c; ++y) grid.push_back(static_cast<double>(y));
      break;
    case Endpoint::PoissonLogHazard: {
      if (tte_max_events <= 0) {
        throw std::invalid_argument("default_observed_grid: TTE needs a maximum event count");
      }
      for (long r = 0; r <= tte_max_events; ++r) grid.push_back(static_cast<double>(r));
      break;
    }
    case Endpoint::NormalKnownSd:
      throw std::invalid_argument(
          "default_observed_grid: supply an explicit grid for the normal endpoint");
  }
  return grid;
}

CurrentData current_from_observed(const TrialDesign& design, double observed) {
  switch (design.endpoint) {
    case Endpoint::BinomialLogit:
      return binomial_current(static_cast<long>(std::llround(observed)), design.n_c);
    case Endpoint::PoissonLogHazard:
      return tte_current(static_cast<long>(std::llround(observed)), design.exposure_c);
    case Endpoint::NormalKnownSd:
      return normal_current(observed, design.n_c, design.sigma);
  }
  throw std::logic_error("current_from_observed: unknown endpoint");
}

std::vector<CalibrationRow> calibration_curve(const ConjugateMixture& map_mix,
                                              const MixtureComponent& vague,
                                              const TrialDesign& design,
                                              const std::vector<double>& gammas,
                                              const std::vector<double>& observed_grid,
                                              double grid_step) {
  if (gammas.empty() || observed_grid.empty()) {
    throw std::invalid_argument("calibration_curve: gammas and observed grid must be nonempty");
  }
  std::vector<CalibrationRow> rows;
  rows.reserve(gammas.size() * observed_grid.size());
  for (double g : gammas) {
    for (double obs : observed_grid) {
      const CurrentData data = current_from_observed(design, obs);
      const EbWeightResult r = eb_weight(map_mix, vague, data, g, grid_step);
      rows.push_back({g, obs, r.w_eb, r.curve.front().second, r.curve.back().second});
    }
  }
  return rows;
}

}  // namespace ebrmap
