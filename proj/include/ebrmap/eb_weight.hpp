#pragma once

#include <utility>
#include <vector>

#include "ebrmap/mixture.hpp"
#include "ebrmap/predictive.hpp"
#include "ebrmap/trial_data.hpp"

namespace ebrmap {

// Outcome of the empirical-Bayes weight search: the full ppp-vs-w_V curve on
// the grid and the selected weight (smallest grid point with ppp >= gamma,
// or 1 with fallback_used when no point qualifies).
struct EbWeightResult {
  double gamma = 0.0;
  double grid_step = 0.0;
  std::vector<std::pair<double, double>> curve;  // (w_v, ppp), full grid
  double w_eb = 1.0;
  bool fallback_used = false;
};

EbWeightResult eb_weight(const ConjugateMixture& map_mix, const MixtureComponent& vague,
                         const CurrentData& data, double gamma, double grid_step = 0.01);

// One calibration row: the EB weight a design would select had the given
// value been observed, plus the ppp extremes at w_V = 0 and 1.
struct CalibrationRow {
  double gamma;
  double observed;
  double w_eb;
  double ppp_at_w0;
  double ppp_at_w1;
};

// Sweeps observed values for each gamma; for discrete endpoints the natural
// grid is every attainable count.
std::vector<CalibrationRow> calibration_curve(const ConjugateMixture& map_mix,
                                              const MixtureComponent& vague,
                                              const TrialDesign& design,
                                              const std::vector<double>& gammas,
                                              const std::vector<double>& observed_grid,
                                              double grid_step = 0.01);

// All attainable counts 0..n (binomial) or 0..r_max (TTE).
std::vector<double> default_observed_grid(const TrialDesign& design, long tte_max_events = 0);

CurrentData current_from_observed(const TrialDesign& design, double observed);

}  // namespace ebrmap
