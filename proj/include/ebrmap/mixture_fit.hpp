#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ebrmap/mixture.hpp"

namespace ebrmap {

struct FitReport {
  int k = 0;
  double log_likelihood = 0.0;
  double aic = 0.0;
  // Kolmogorov-Smirnov distance between the empirical CDF of the draws and
  // the fitted mixture CDF; values above ~0.02 indicate a poor approximation.
  double ks_distance = 0.0;
  int iterations = 0;
  bool converged = false;
  int restarts_used = 0;
};

struct FitOptions {
  int restarts = 10;
  int max_iterations = 500;
  double relative_tolerance = 1e-8;
  double weight_floor = 1e-6;
  // Restart jitter is driven by a fixed internal stream so fits are
  // reproducible without an external seed.
  std::uint64_t jitter_seed = 0x45B2C7A1D3F69E08ull;
  // Optional per-iteration log-likelihood trace of the winning restart.
  std::vector<double>* log_likelihood_trace = nullptr;
};

// Maximum-likelihood mixture of k same-family components fitted to draws by
// EM. Throws on empty/degenerate input ("zero-variance sample") or draws
// outside the family support; non-convergence is reported, not thrown.
std::pair<ConjugateMixture, FitReport> fit_mixture_em(std::span<const double> draws,
                                                      Family family, int k,
                                                      const FitOptions& options = {});

// Fits k = 1..k_max and returns the fit with the smallest AIC
// (parameter count 3k-1; ties resolved toward smaller k).
std::pair<ConjugateMixture, FitReport> select_mixture(std::span<const double> draws,
                                                      Family family, int k_max,
                                                      const FitOptions& options = {});

}  // namespace ebrmap
