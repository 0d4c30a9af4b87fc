#include "ebrmap/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace ebrmap {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  for (auto& f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
  }
  return fields;
}

double parse_double(const std::string& s, int row, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("row " + std::to_string(row) + ": non-numeric " + what + " '" + s + "'");
  }
}

long parse_count(const std::string& s, int row, const char* what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("row " + std::to_string(row) + ": non-integer " + what + " '" + s + "'");
  }
}

std::vector<std::string> expected_header(Endpoint e) {
  switch (e) {
    case Endpoint::BinomialLogit: return {"study", "responders", "n"};
    case Endpoint::NormalKnownSd: return {"study", "mean", "n", "sd"};
    case Endpoint::PoissonLogHazard: return {"study", "events", "exposure"};
  }
  throw std::logic_error("expected_header: unknown endpoint");
}

}  // namespace

std::string format_sig17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json component_to_json(const MixtureComponent& c) {
  return Json{{"family", family_name(c.family())}, {"params", {c.p1(), c.p2()}}};
}

MixtureComponent component_from_json(const Json& j) {
  const Family family = family_from_name(j.at("family").get<std::string>());
  const auto& p = j.at("params");
  if (!p.is_array() || p.size() != 2) throw ParseError("component: params must be [p1, p2]");
  double p1 = p[0].get<double>();
  double p2 = p[1].get<double>();
  if (family == Family::Gamma && j.value("parameterization", "shape_rate") == "mean_n") {
    return gamma_component_mean_n(p1, p2);
  }
  return {family, p1, p2};
}

Json mixture_to_json(const ConjugateMixture& m) {
  Json params = Json::array();
  for (const auto& c : m.components()) params.push_back({c.p1(), c.p2()});
  return Json{{"family", family_name(m.family())}, {"weights", m.weights()}, {"params", params}};
}

ConjugateMixture mixture_from_json(const Json& j) {
  const Family family = family_from_name(j.at("family").get<std::string>());
  const bool mean_n =
      family == Family::Gamma && j.value("parameterization", "shape_rate") == "mean_n";
  const auto& params = j.at("params");
  const auto weights = j.at("weights").get<std::vector<double>>();
  std::vector<MixtureComponent> comps;
  for (const auto& p : params) {
    if (!p.is_array() || p.size() != 2) throw ParseError("mixture: params must be pairs");
    const double p1 = p[0].get<double>();
    const double p2 = p[1].get<double>();
    comps.push_back(mean_n ? gamma_component_mean_n(p1, p2) : MixtureComponent(family, p1, p2));
  }
  return {std::move(comps), weights};
}

Json fit_report_to_json(const FitReport& r) {
  return Json{{"k", r.k},
              {"log_likelihood", r.log_likelihood},
              {"aic", r.aic},
              {"ks_distance", r.ks_distance},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"restarts_used", r.restarts_used}};
}

Json eb_weight_to_json(const EbWeightResult& r) {
  Json curve = Json::array();
  for (const auto& [w, p] : r.curve) curve.push_back({{"w_v", w}, {"ppp", p}});
  return Json{{"gamma", r.gamma},
              {"grid_step", r.grid_step},
              {"w_eb", r.w_eb},
              {"fallback_used", r.fallback_used},
              {"curve", curve}};
}

Json posterior_summary_to_json(const PosteriorSummary& s) {
  Json j{{"posterior", mixture_to_json(s.posterior)},
         {"median", s.median},
         {"ci_level", s.ci_level},
         {"ci", {s.ci_lo, s.ci_hi}}};
  if (s.rule_prob) j["rule_probability"] = *s.rule_prob;
  if (s.success) j["success"] = *s.success;
  return j;
}

Json convergence_to_json(const ConvergenceReport& r) {
  return Json{{"pass", r.pass},
              {"degraded", r.degraded},
              {"rhat_mu", r.rhat_mu},
              {"rhat_tau", r.rhat_tau},
              {"rhat_limit", r.rhat_limit},
              {"accept_rates", r.accept_rates},
              {"bulk_draws", r.bulk_draws},
              {"message", r.message}};
}

Json diagnostics_to_json(const MapDraws& d) {
  return Json{{"chains", d.chains},
              {"draws_per_chain", d.draws_per_chain},
              {"rhat_mu", d.rhat_mu},
              {"rhat_tau", d.rhat_tau},
              {"accept_rates", d.accept_rates},
              {"warnings", d.warnings}};
}

Json rule_to_json(const DecisionRule& r) {
  return Json{{"direction", r.direction == DecisionRule::Direction::Less ? "less" : "greater"},
              {"theta_star", r.theta_star},
              {"prob_cutoff", r.prob_cutoff}};
}

DecisionRule rule_from_json(const Json& j) {
  DecisionRule r;
  const std::string dir = j.at("direction").get<std::string>();
  if (dir == "less") {
    r.direction = DecisionRule::Direction::Less;
  } else if (dir == "greater") {
    r.direction = DecisionRule::Direction::Greater;
  } else {
    throw ParseError("rule: direction must be 'less' or 'greater'");
  }
  r.theta_star = j.at("theta_star").get<double>();
  r.prob_cutoff = j.at("prob_cutoff").get<double>();
  if (!(r.prob_cutoff > 0.0) || !(r.prob_cutoff < 1.0)) {
    throw ParseError("rule: prob_cutoff must be in (0,1)");
  }
  return r;
}

namespace {

Json method_to_json(const AnalysisMethod& m) {
  if (const auto* f = std::get_if<FixedWeightMethod>(&m)) {
    return Json{{"type", "fixed"}, {"w_v", f->w_v}};
  }
  const auto& eb = std::get<EmpiricalBayesMethod>(m);
  return Json{{"type", "eb"}, {"gamma", eb.gamma}, {"grid_step", eb.grid_step}};
}

AnalysisMethod method_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "fixed") return FixedWeightMethod{j.at("w_v").get<double>()};
  if (type == "eb") {
    return EmpiricalBayesMethod{j.at("gamma").get<double>(), j.value("grid_step", 0.01)};
  }
  throw ParseError("method: type must be 'fixed' or 'eb'");
}

Json design_to_json(const TrialDesign& d) {
  switch (d.endpoint) {
    case Endpoint::BinomialLogit: return Json{{"n_c", d.n_c}};
    case Endpoint::NormalKnownSd: return Json{{"n_c", d.n_c}, {"sigma", d.sigma}};
    case Endpoint::PoissonLogHazard: return Json{{"exposure_c", d.exposure_c}};
  }
  throw std::logic_error("design_to_json: unknown endpoint");
}

TrialDesign design_from_json(Endpoint e, const Json& j) {
  switch (e) {
    case Endpoint::BinomialLogit: return binomial_design(j.at("n_c").get<long>());
    case Endpoint::NormalKnownSd:
      return normal_design(j.at("n_c").get<long>(), j.at("sigma").get<double>());
    case Endpoint::PoissonLogHazard: return tte_design(j.at("exposure_c").get<double>());
  }
  throw std::logic_error("design_from_json: unknown endpoint");
}

}  // namespace

Json scenario_to_json(const Scenario& s) {
  Json methods = Json::array();
  for (const auto& m : s.methods) methods.push_back(method_to_json(m));
  return Json{{"endpoint", endpoint_name(s.endpoint)},
              {"map", mixture_to_json(s.map_mix)},
              {"vague", component_to_json(s.vague)},
              {"methods", methods},
              {"design", design_to_json(s.design)},
              {"truth_grid", s.truth_grid},
              {"rule", rule_to_json(s.rule)},
              {"replications", s.replications},
              {"seed", s.seed}};
}

Scenario scenario_from_json(const Json& j) {
  const Endpoint endpoint = endpoint_from_name(j.at("endpoint").get<std::string>());
  std::vector<AnalysisMethod> methods;
  for (const auto& m : j.at("methods")) methods.push_back(method_from_json(m));
  Scenario s{endpoint,
             mixture_from_json(j.at("map")),
             component_from_json(j.at("vague")),
             std::move(methods),
             design_from_json(endpoint, j.at("design")),
             j.at("truth_grid").get<std::vector<double>>(),
             rule_from_json(j.at("rule")),
             j.at("replications").get<int>(),
             j.at("seed").get<std::uint64_t>()};
  return s;
}

HistoricalDataset parse_trials_csv(std::istream& in, Endpoint endpoint) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("row 1: missing header");
  const auto header = split_csv_line(line);
  const auto expected = expected_header(endpoint);
  if (header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw ParseError("row 1: header mismatch for endpoint '" + endpoint_name(endpoint) +
                     "', expected '" + want + "'");
  }
  HistoricalDataset out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != expected.size()) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(expected.size()) + " fields, got " +
                       std::to_string(f.size()));
    }
    TrialRecord rec;
    rec.study_id = f[0];
    try {
      switch (endpoint) {
        case Endpoint::BinomialLogit:
          rec.payload = BinomialSummary{parse_count(f[1], row, "responders"),
                                        parse_count(f[2], row, "n")};
          break;
        case Endpoint::NormalKnownSd:
          rec.payload = NormalSummary{parse_double(f[1], row, "mean"),
                                      parse_count(f[2], row, "n"),
                                      parse_double(f[3], row, "sd")};
          break;
        case Endpoint::PoissonLogHazard:
          rec.payload = TteSummary{parse_count(f[1], row, "events"),
                                   parse_double(f[2], row, "exposure")};
          break;
      }
      validate_summary(rec.payload);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError("row " + std::to_string(row) + ": " + e.what());
    }
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw ParseError("no data rows");
  return out;
}

HistoricalDataset parse_trials_file(const std::string& path, Endpoint endpoint) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_trials_csv(in, endpoint);
}

void write_trials_csv(std::ostream& out, const HistoricalDataset& data) {
  if (data.empty()) throw std::invalid_argument("write_trials_csv: empty dataset");
  const Endpoint e = summary_endpoint(data.front().payload);
  const auto header = expected_header(e);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& rec : data) {
    if (summary_endpoint(rec.payload) != e) {
      throw std::invalid_argument("write_trials_csv: mixed endpoints");
    }
    out << rec.study_id;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, BinomialSummary>) {
            out << "," << v.responders << "," << v.size;
          } else if constexpr (std::is_same_v<T, NormalSummary>) {
            out << "," << format_sig17(v.mean) << "," << v.size << "," << format_sig17(v.sd);
          } else {
            out << "," << v.events << "," << format_sig17(v.exposure);
          }
        },
        rec.payload);
    out << "\n";
  }
}

PweTable parse_pwe_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("row 1: missing header");
  const auto header = split_csv_line(line);
  const std::vector<std::string> expected{"study", "interval_lo", "interval_hi", "events",
                                          "exposure"};
  if (header != expected) {
    throw ParseError("row 1: header mismatch, expected 'study,interval_lo,interval_hi,events,exposure'");
  }
  PweTable table;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) {
      throw ParseError("row " + std::to_string(row) + ": expected 5 fields");
    }
    const double lo = parse_double(f[1], row, "interval_lo");
    const double hi = parse_double(f[2], row, "interval_hi");
    const long events = parse_count(f[3], row, "events");
    const double exposure = parse_double(f[4], row, "exposure");

    std::size_t interval_idx = table.intervals.size();
    for (std::size_t i = 0; i < table.intervals.size(); ++i) {
      if (table.intervals[i] == std::make_pair(lo, hi)) {
        interval_idx = i;
        break;
      }
    }
    if (interval_idx == table.intervals.size()) table.intervals.emplace_back(lo, hi);

    PweStudy* study = nullptr;
    for (auto& s : table.studies) {
      if (s.study_id == f[0]) {
        study = &s;
        break;
      }
    }
    if (!study) {
      table.studies.push_back({f[0], {}});
      study = &table.studies.back();
    }
    if (study->cells.size() != interval_idx) {
      throw ParseError("row " + std::to_string(row) + ": intervals of study '" + f[0] +
                       "' out of order or incomplete");
    }
    study->cells.push_back({events, exposure});
  }
  try {
    table.validate();
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  return table;
}

PweTable parse_pwe_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_pwe_csv(in);
}

void write_pwe_csv(std::ostream& out, const PweTable& table) {
  out << "study,interval_lo,interval_hi,events,exposure\n";
  for (const auto& s : table.studies) {
    for (std::size_t i = 0; i < table.intervals.size(); ++i) {
      out << s.study_id << "," << format_sig17(table.intervals[i].first) << ","
          << format_sig17(table.intervals[i].second) << "," << s.cells[i].events << ","
          << format_sig17(s.cells[i].exposure) << "\n";
    }
  }
}

void write_draws_csv(std::ostream& out, const MapDraws& draws) {
  out << "iteration,chain,theta_natural,theta_transformed\n";
  for (std::size_t i = 0; i < draws.theta_new.size(); ++i) {
    const int chain = draws.draws_per_chain > 0 ? static_cast<int>(i) / draws.draws_per_chain : 0;
    const int iter = draws.draws_per_chain > 0 ? static_cast<int>(i) % draws.draws_per_chain : 0;
    out << iter << "," << chain << "," << format_sig17(draws.theta_new[i]) << ","
        << format_sig17(draws.transformed_scale_draws[i]) << "\n";
  }
}

void write_oc_rows_csv(std::ostream& out, const std::vector<OcRow>& rows) {
  out << "truth,method,pos,abs_bias,mse,mc_se_pos,replications\n";
  for (const auto& r : rows) {
    out << format_sig17(r.truth) << "," << r.method << "," << format_sig17(r.pos) << ","
        << format_sig17(r.abs_bias) << "," << format_sig17(r.mse) << ","
        << format_sig17(r.mc_se_pos) << "," << r.replications << "\n";
  }
}

void write_calibration_csv(std::ostream& out, const std::vector<CalibrationRow>& rows) {
  out << "gamma,observed,w_eb,ppp_at_w0,ppp_at_w1\n";
  for (const auto& r : rows) {
    out << format_sig17(r.gamma) << "," << format_sig17(r.observed) << ","
        << format_sig17(r.w_eb) << "," << format_sig17(r.ppp_at_w0) << ","
        << format_sig17(r.ppp_at_w1) << "\n";
  }
}

std::string config_digest(const Json& config) {
  const std::string dump = config.dump();  // object keys are already sorted
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json manifest_to_json(const RunManifest& m) {
  return Json{{"command", m.command},
              {"config_digest", m.config_digest},
              {"seed", m.seed},
              {"version", m.version},
              {"started_at", m.started_at},
              {"finished_at", m.finished_at},
              {"wall_seconds", m.wall_seconds}};
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace ebrmap
