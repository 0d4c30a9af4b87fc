#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ebrmap/mixture.hpp"

namespace ebrmap {

enum class Endpoint { BinomialLogit, NormalKnownSd, PoissonLogHazard };

std::string endpoint_name(Endpoint e);
Endpoint endpoint_from_name(const std::string& name);

// Responders out of a known trial size.
struct BinomialSummary {
  long responders = 0;
  long size = 0;
};

// Sample mean with known sampling SD.
struct NormalSummary {
  double mean = 0.0;
  long size = 0;
  double sd = 0.0;
};

// Event count over a total at-risk exposure (years).
struct TteSummary {
  long events = 0;
  double exposure = 0.0;
};

using EndpointSummary = std::variant<BinomialSummary, NormalSummary, TteSummary>;

void validate_summary(const EndpointSummary& s);
Endpoint summary_endpoint(const EndpointSummary& s);

// Conjugate prior family matching an endpoint's likelihood.
Family endpoint_family(Endpoint e);

struct TrialRecord {
  std::string study_id;
  EndpointSummary payload;
};

using HistoricalDataset = std::vector<TrialRecord>;

struct CurrentData {
  EndpointSummary payload;

  Endpoint endpoint() const { return summary_endpoint(payload); }
};

CurrentData binomial_current(long responders, long size);
CurrentData normal_current(double mean, long size, double sd);
CurrentData tte_current(long events, double exposure);

}  // namespace ebrmap
