#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robmean/distributions.hpp"

namespace robmean::bench {

enum class EstimatorId { sample_mean, mom_coordinatewise, minsker, spherical, hybrid };

// Flat key=value config; every key can also be set on the command line, with
// CLI > file > defaults precedence.
struct ExperimentConfig {
  std::string dist = "gaussian";  // gaussian | student_t:NU | pareto:ALPHA |
                                  // lognormal | contaminated:RATE:SCALE
  std::string estimator = "sample_mean";
  int n = 1000;
  int d = 2;
  double delta = 0.05;
  int trials = 100;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";  // csv | json
  double lambda = -1.0;        // spherical: radius scale; <= 0 uses the true top eigenvalue
  double kurtosis = -1.0;      // <= 0 uses the distribution's exact constant
  std::string cov = "identity";  // identity | iso:X | diag:a,b,...
  std::string mean = "zero";     // zero | const:C | list:a,b,...
  int threads = 0;               // 0 = hardware concurrency
  bool timing = false;           // emit measured wall_ms (breaks byte-determinism)
  bool per_paper = false;        // refuse configs outside the analyzed regime
};

struct TrialRecord {
  int trial = 0;
  double error = 0.0;
  std::optional<double> bound_eq1, bound_eq2, bound_prop1, bound_eq3;
  std::optional<bool> exceeded_eq1, exceeded_eq2, exceeded_prop1, exceeded_eq3;
  bool feasible = true;
  double wall_ms = 0.0;
};

struct Summary {
  int trials = 0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q_high = 0.0;  // nearest-rank quantile at level 1 - delta
  std::optional<double> fail_rate_eq1, fail_rate_eq2, fail_rate_prop1, fail_rate_eq3;
  // Observed q_high divided by the bound evaluated with constant 1.
  std::optional<double> const_eq1, const_eq2, const_prop1, const_eq3, const_thm;
  double feasible_rate = 1.0;
  std::string regime;  // "per-paper" or "desk"
  std::string note;
  double mean_wall_ms = 0.0;  // informational; never part of file outputs
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  Summary summary;
};

EstimatorId parse_estimator(const std::string& name);
std::string estimator_name(EstimatorId id);

// Distribution, ground-truth mean and shape from the config's dist/cov/mean
// strings. Throws std::invalid_argument on malformed values.
DistributionSpec build_distribution(const ExperimentConfig& config);

// `trials` independent seeded runs (parallel; per-trial substreams of
// config.seed), error and bound bookkeeping against ground truth, and a
// summary with nearest-rank quantiles and fitted constants.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Nearest-rank quantile: the ceil(p*N)-th smallest value.
double nearest_rank_quantile(std::vector<double> values, double p);

// key=value text form (round-trips through parse_config_text).
std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace robmean::bench
