#pragma once

#include <Eigen/Core>

#include "robmean/sample_set.hpp"

namespace robmean {

struct GeoMedianResult {
  Eigen::VectorXd point;
  double objective = 0.0;  // sum of Euclidean distances to the inputs
  int iterations = 0;
  bool converged = false;
};

// Minimizer of the sum of distances to the rows of `points`, by Weiszfeld
// iteration from the centroid. Iterates landing on an input point are tested
// for optimality via the subgradient condition and stepped off along the
// violated direction otherwise (Vardi-Zhang). tol < 0 selects the default
// 1e-10 * (data diameter).
GeoMedianResult geometric_median(const Eigen::MatrixXd& points, double tol = -1.0,
                                 int max_iter = 10000);

// Geometric median of the ceil(ln(1/delta)) contiguous block means.
Eigen::VectorXd minsker_estimator(const SampleSet& samples, double delta);

}  // namespace robmean
