#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "robmean/sample_set.hpp"

namespace robmean {

enum class DistKind { gaussian, student_t, pareto_product, lognormal, contaminated_gaussian };

// Seeded sampler with exact ground truth. Observations are X = mean + shape*Z
// where Z has i.i.d. standardized coordinates (the multivariate t couples
// coordinates through one chi-square divisor; the contaminated Gaussian
// rescales whole observations at the contamination rate).
struct DistributionSpec {
  DistKind kind = DistKind::gaussian;
  int d = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd shape;
  double nu = 0.0;     // student_t
  double alpha = 0.0;  // pareto_product
  double rate = 0.0;   // contaminated_gaussian
  double scale = 0.0;  // contaminated_gaussian

  Eigen::MatrixXd true_cov;
  double kurtosis_K = 0.0;
  // True when kurtosis_K certifies sup_v E[((X-mu)^T v)^4]/(v^T Sigma v)^2
  // only from above (attained on coordinate axes for full-rank shapes).
  bool kurtosis_is_upper_bound = false;

  double trace() const { return true_cov.trace(); }
  double lambda_max() const;
  double coordinate_variance(int j) const { return true_cov(j, j); }
};

DistributionSpec make_gaussian(Eigen::VectorXd mean, Eigen::MatrixXd shape);
// nu > 4 required; the directional fourth-moment constant is 3(nu-2)/(nu-4).
DistributionSpec make_student_t(double nu, Eigen::VectorXd mean, Eigen::MatrixXd shape);
// alpha > 4 required; coordinates are centered standardized Pareto(alpha).
DistributionSpec make_pareto_product(double alpha, Eigen::VectorXd mean, Eigen::MatrixXd shape);
// Coordinates are centered standardized exp(N(0,1)).
DistributionSpec make_lognormal(Eigen::VectorXd mean, Eigen::MatrixXd shape);
// (1-rate) N(mean, S S^T) + rate N(mean, scale^2 S S^T).
DistributionSpec make_contaminated_gaussian(double rate, double scale, Eigen::VectorXd mean,
                                            Eigen::MatrixXd shape);

SampleSet sample(const DistributionSpec& spec, int n, std::uint64_t seed);

double kurtosis_constant(const DistributionSpec& spec);

// Max over seeded random unit directions of (empirical fourth central moment)
// / (v^T Sigma v)^2, with 0/0 guarded to 0. Reported for sanity only;
// empirical fourth moments of heavy-tailed data are themselves heavy-tailed.
double empirical_kurtosis_check(const SampleSet& samples, const DistributionSpec& spec,
                                int directions, std::uint64_t seed);

std::string dist_kind_name(DistKind kind);

}  // namespace robmean
