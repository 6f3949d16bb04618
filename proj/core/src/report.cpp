#include "robmean/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace robmean::bench {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string opt_field(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

nlohmann::ordered_json opt_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

}  // namespace

std::string csv_report(const ExperimentResult& result, const ExperimentConfig& config) {
  std::ostringstream out;
  out << "trial,estimator,dist,n,d,delta,seed,error,bound_eq1,bound_eq2,bound_prop1,"
         "bound_eq3,feasible,wall_ms\n";
  for (const auto& r : result.records) {
    out << r.trial << ',' << config.estimator << ',' << config.dist << ',' << config.n << ','
        << config.d << ',' << fmt(config.delta) << ',' << config.seed << ',' << fmt(r.error)
        << ',' << opt_field(r.bound_eq1) << ',' << opt_field(r.bound_eq2) << ','
        << opt_field(r.bound_prop1) << ',' << opt_field(r.bound_eq3) << ','
        << (r.feasible ? 1 : 0) << ',' << fmt(r.wall_ms) << '\n';
  }
  return out.str();
}

std::string json_report(const ExperimentResult& result, const ExperimentConfig& config) {
  nlohmann::ordered_json doc;
  doc["config"] = {
      {"dist", config.dist}, {"estimator", config.estimator}, {"n", config.n},
      {"d", config.d},       {"delta", config.delta},         {"seed", config.seed},
      {"trials", config.trials},
  };
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : result.records) {
    nlohmann::ordered_json row;
    row["trial"] = r.trial;
    row["estimator"] = config.estimator;
    row["dist"] = config.dist;
    row["n"] = config.n;
    row["d"] = config.d;
    row["delta"] = config.delta;
    row["seed"] = config.seed;
    row["error"] = r.error;
    row["bound_eq1"] = opt_json(r.bound_eq1);
    row["bound_eq2"] = opt_json(r.bound_eq2);
    row["bound_prop1"] = opt_json(r.bound_prop1);
    row["bound_eq3"] = opt_json(r.bound_eq3);
    row["feasible"] = r.feasible;
    row["wall_ms"] = r.wall_ms;
    records.push_back(std::move(row));
  }
  doc["records"] = std::move(records);

  const Summary& s = result.summary;
  nlohmann::ordered_json sum;
  sum["trials"] = s.trials;
  sum["q50"] = s.q50;
  sum["q90"] = s.q90;
  sum["q_high"] = s.q_high;
  sum["feasible_rate"] = s.feasible_rate;
  sum["fail_rate_eq1"] = opt_json(s.fail_rate_eq1);
  sum["fail_rate_eq2"] = opt_json(s.fail_rate_eq2);
  sum["fail_rate_prop1"] = opt_json(s.fail_rate_prop1);
  sum["fail_rate_eq3"] = opt_json(s.fail_rate_eq3);
  sum["const_eq1"] = opt_json(s.const_eq1);
  sum["const_eq2"] = opt_json(s.const_eq2);
  sum["const_prop1"] = opt_json(s.const_prop1);
  sum["const_eq3"] = opt_json(s.const_eq3);
  sum["const_thm"] = opt_json(s.const_thm);
  sum["regime"] = s.regime;
  sum["note"] = s.note;
  doc["summary"] = std::move(sum);
  return doc.dump(2) + "\n";
}

void write_report(const ExperimentResult& result, const ExperimentConfig& config,
                  const std::string& path, const std::string& format) {
  std::string body;
  if (format == "csv") {
    body = csv_report(result, config);
  } else if (format == "json") {
    body = json_report(result, config);
  } else {
    throw std::invalid_argument("unknown format: '" + format + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to: " + path);
  out << body;
  out.flush();
  if (!out) throw std::runtime_error("cannot write report to: " + path);
}

std::string summary_text(const ExperimentResult& result, const ExperimentConfig& config) {
  const Summary& s = result.summary;
  std::ostringstream out;
  out << config.estimator << " on " << config.dist << " (n=" << config.n << ", d=" << config.d
      << ", delta=" << config.delta << ", trials=" << s.trials << ", seed=" << config.seed
      << ")\n";
  out << "  regime: " << s.regime;
  if (!s.note.empty()) out << "  [" << s.note << "]";
  out << "\n";
  out << "  error quantiles: q50=" << fmt(s.q50) << "  q90=" << fmt(s.q90)
      << "  q(1-delta)=" << fmt(s.q_high) << "\n";
  auto line = [&](const char* name, const std::optional<double>& rate,
                  const std::optional<double>& cst) {
    if (!rate && !cst) return;
    out << "  " << name << ":";
    if (rate) out << " fail_rate=" << fmt(*rate);
    if (cst) out << " fitted_constant=" << fmt(*cst);
    out << "\n";
  };
  line("eq1", s.fail_rate_eq1, s.const_eq1);
  line("eq2", s.fail_rate_eq2, s.const_eq2);
  line("prop1", s.fail_rate_prop1, s.const_prop1);
  line("eq3", s.fail_rate_eq3, s.const_eq3);
  line("theorem", std::nullopt, s.const_thm);
  if (s.feasible_rate < 1.0) out << "  feasible_rate=" << fmt(s.feasible_rate) << "\n";
  if (config.timing) out << "  mean wall per trial: " << fmt(s.mean_wall_ms) << " ms\n";
  return out.str();
}

}  // namespace robmean::bench
