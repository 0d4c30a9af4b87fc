#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebrmap/eb_weight.hpp"
#include "ebrmap/hierarchical_mcmc.hpp"
#include "ebrmap/mixture.hpp"
#include "ebrmap/mixture_fit.hpp"
#include "ebrmap/oc_simulation.hpp"
#include "ebrmap/posterior.hpp"
#include "ebrmap/pwe_table.hpp"
#include "ebrmap/trial_data.hpp"

namespace ebrmap {

using Json = nlohmann::json;

// Parsing problems carry the offending location (row number for CSV).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 17 significant digits; round-trips any double.
std::string format_sig17(double v);

Json component_to_json(const MixtureComponent& c);
MixtureComponent component_from_json(const Json& j);

Json mixture_to_json(const ConjugateMixture& m);
ConjugateMixture mixture_from_json(const Json& j);

Json fit_report_to_json(const FitReport& r);
Json eb_weight_to_json(const EbWeightResult& r);
Json posterior_summary_to_json(const PosteriorSummary& s);
Json convergence_to_json(const ConvergenceReport& r);
Json diagnostics_to_json(const MapDraws& d);

Json rule_to_json(const DecisionRule& r);
DecisionRule rule_from_json(const Json& j);

Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

// CSV schemas:
//   binomial  study,responders,n
//   normal    study,mean,n,sd
//   tte       study,events,exposure
//   tte pwe   study,interval_lo,interval_hi,events,exposure
HistoricalDataset parse_trials_csv(std::istream& in, Endpoint endpoint);
HistoricalDataset parse_trials_file(const std::string& path, Endpoint endpoint);
void write_trials_csv(std::ostream& out, const HistoricalDataset& data);

PweTable parse_pwe_csv(std::istream& in);
PweTable parse_pwe_file(const std::string& path);
void write_pwe_csv(std::ostream& out, const PweTable& table);

void write_draws_csv(std::ostream& out, const MapDraws& draws);
void write_oc_rows_csv(std::ostream& out, const std::vector<OcRow>& rows);
void write_calibration_csv(std::ostream& out, const std::vector<CalibrationRow>& rows);

// Stable under key reordering: hashes the canonical (sorted-key) JSON dump.
std::string config_digest(const Json& config);

struct RunManifest {
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string version;
  std::string started_at;
  std::string finished_at;
  double wall_seconds = 0.0;
};

Json manifest_to_json(const RunManifest& m);
std::string iso8601_utc_now();

}  // namespace ebrmap
