#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ebrmap/trial_data.hpp"

namespace ebrmap {

// Piecewise-exponential event table: contiguous follow-up intervals (years)
// with per-study event counts and exposures in each interval.
struct PweCell {
  long events = 0;
  double exposure = 0.0;
};

struct PweStudy {
  std::string study_id;
  std::vector<PweCell> cells;  // one per interval
};

struct PweTable {
  std::vector<std::pair<double, double>> intervals;  // (lo, hi), first lo = 0
  std::vector<PweStudy> studies;

  void validate() const;
  std::size_t interval_count() const { return intervals.size(); }
};

// Sums events and exposure over the 1-based inclusive interval range,
// yielding one flat TTE record per study.
HistoricalDataset collapse_intervals(const PweTable& table, std::size_t from_idx,
                                     std::size_t to_idx);

// The bundled 12-interval, 10-study oncology event table ("Historical 1"
// through "Historical 9" plus "Current").
PweTable embedded_appendix_data();

}  // namespace ebrmap
