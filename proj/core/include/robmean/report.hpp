#pragma once

#include <string>

#include "robmean/experiment.hpp"

namespace robmean::bench {

// CSV columns, in order:
//   trial,estimator,dist,n,d,delta,seed,error,bound_eq1,bound_eq2,
//   bound_prop1,bound_eq3,feasible,wall_ms
// Absent bounds are empty fields. Numbers use 17 significant digits, so a
// rerun with the same config and seed is byte-identical (wall_ms is 0 unless
// timing was requested).
std::string csv_report(const ExperimentResult& result, const ExperimentConfig& config);

// Same fields per record, plus the summary block.
std::string json_report(const ExperimentResult& result, const ExperimentConfig& config);

// format must be "csv" or "json"; throws std::runtime_error when the path
// cannot be written (message echoes the path).
void write_report(const ExperimentResult& result, const ExperimentConfig& config,
                  const std::string& path, const std::string& format);

// Human-oriented summary for stdout.
std::string summary_text(const ExperimentResult& result, const ExperimentConfig& config);

}  // namespace robmean::bench
