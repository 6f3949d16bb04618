#pragma once

#include <utility>

#include <Eigen/Core>

#include "robmean/sample_set.hpp"
#include "robmean/sphere_cover.hpp"

namespace robmean {

// Robust estimates of the quadratic forms u^T Sigma u over a net of
// directions, from median-of-means over halved-pair squared projections.
struct QuadFormEstimates {
  Cover cover;
  Eigen::VectorXd values;  // one per net direction, clamped at 0
  int m = 0;               // samples used (even)
  double delta_eff = 0.0;  // per-direction confidence level
};

struct CovFit {
  Eigen::MatrixXd sigma_hat;  // symmetric PSD
  double epsilon_m = 0.0;
  bool member = false;        // all per-direction slabs satisfied at exit
  Eigen::VectorXd residuals;  // |u^T Sigma_hat u - V(u)| / max(V(u), tiny)
  int sweeps_used = 0;
};

// MoM over the m/2 values (1/2)(u^T(X_i - X_{m/2+i}))^2, clamped at 0.
// Odd-sized inputs drop the last sample; m < 8 throws.
double quad_form_mom(const SampleSet& samples, const Eigen::VectorXd& u, double delta_eff);

// quad_form_mom applied to every net direction (batched via one pair-difference
// projection product; arithmetic matches the per-direction operation up to
// accumulation order).
QuadFormEstimates estimate_quad_forms(const SampleSet& samples, const Cover& cover,
                                      double delta_eff);

// Uniform relative accuracy 4e * sqrt(K * ln(s (4/gamma)^d / delta) / m).
double epsilon_m(double kurtosis, int m, int d, int s, double delta, double gamma);

// Three stages: least-squares fit of a symmetric matrix to the quadratic-form
// values over the net, projection onto the PSD cone by eigenvalue clamping,
// then alternating-projection sweeps between the PSD cone and the slabs
// |u^T A u - V(u)| <= eps V(u)/(1-eps). The slab normalization uses V(u)
// rather than the unknown true quadratic form; on the event that V is within
// relative eps of the truth these slabs still contain the true matrix.
// For eps >= 1 the slabs are vacuous and only the PSD-projected fit is
// returned (member = true).
CovFit fit_covariance(const QuadFormEstimates& estimates, double epsilon, int max_sweeps = 1000);

// Eigenvalues sorted descending (clamped at 0) and matching orthonormal
// eigenvector columns.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> spectral_decompose(const CovFit& fit);

// d_1 = #{i: lambda_i >= lambda_1 / 2} (boundary inclusive) and the first d_1
// eigenvector columns. lambda_1 = 0 degenerates to the whole space.
std::pair<int, Eigen::MatrixXd> select_top_subspace(const Eigen::VectorXd& eigenvalues,
                                                    const Eigen::MatrixXd& eigenvectors);

}  // namespace robmean
