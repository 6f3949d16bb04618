#pragma once

#include <Eigen/Core>

namespace robmean {

// An n x d batch of observations, one observation per row.
struct SampleSet {
  Eigen::MatrixXd data;

  SampleSet() = default;
  explicit SampleSet(Eigen::MatrixXd rows) : data(std::move(rows)) {}

  int size() const { return static_cast<int>(data.rows()); }
  int dim() const { return static_cast<int>(data.cols()); }
};

}  // namespace robmean
