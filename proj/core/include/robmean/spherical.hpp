#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "robmean/sample_set.hpp"
#include "robmean/sphere_cover.hpp"

namespace robmean {

// Directional constraint set: vectors x whose projections onto every cover
// direction w agree with the directional MoM value m(w) up to the halfwidth
// 2e * sqrt(2 lambda ln(e 8^d / delta) / n). The per-direction confidence is
// delta / 8^d, using the cardinality bound on a 1/2-cover rather than the
// realized cover size (the constants downstream depend on the bound).
struct Polytope {
  Cover cover;  // gamma must be 1/2
  Eigen::VectorXd centers;
  double halfwidth = 0.0;
  double delta = 0.0;
  double lambda = 0.0;
  // Coordinate-wise MoM vector, the default start for the feasibility search.
  Eigen::VectorXd init_point;
  int sample_count = 0;
};

struct SphericalEstimate {
  Eigen::VectorXd value;
  bool feasible = false;
  double residual = 0.0;  // achieved max directional violation
  double bound = 0.0;
};

struct FeasibleSearchOptions {
  int max_iterations = 5000;
  // Feasibility slack, relative to the halfwidth; an absolute floor of
  // 1e-12 * (1 + max|center|) keeps zero-halfwidth (lambda = 0) polytopes
  // solvable in floating point.
  double tol_rel = 1e-6;
  std::optional<Eigen::VectorXd> init;
};

struct SphericalOptions {
  std::uint64_t cover_seed = 0;
  FeasibleSearchOptions search;
};

// MoM of the projections w^T X_i at confidence delta_eff.
double directional_mom(const SampleSet& samples, const Eigen::VectorXd& w, double delta_eff);

Polytope build_polytope(const SampleSet& samples, double lambda, double delta,
                        const Cover& cover);

// Minimizes f(x) = max_w |m(w) - w^T x| (piecewise-linear convex) by
// subgradient descent with Polyak steps f(x_k)/||g_k||^2 from the polytope's
// init point. Feasible iff the best value reaches halfwidth + tol; otherwise
// value = 0 (infeasibility is an outcome, not an error).
SphericalEstimate find_feasible_point(const Polytope& polytope,
                                      const FeasibleSearchOptions& options = {});

double effective_search_tol(const Polytope& polytope, const FeasibleSearchOptions& options);

// Composition: 1/2-cover, polytope, feasible-point search. lambda should
// upper-bound the top covariance eigenvalue for the bound to hold.
SphericalEstimate estimate_spherical(const SampleSet& samples, double lambda, double delta,
                                     const SphericalOptions& options = {});

// 8e * sqrt(2 lambda (d ln 8 + ln(e/delta)) / n); equals 4x the polytope
// halfwidth at matching arguments.
double spherical_error_bound(double lambda, int d, int n, double delta);

struct LambdaMaxOptions {
  double gamma = -1.0;  // <= 0: default policy for the dimension
  std::uint64_t cover_seed = 0;
};

// 1.1 x the top eigenvalue of the robust covariance fit; on the event that
// the fit's quadratic forms are accurate this lies in [lambda_max, 1.21 lambda_max].
double estimate_lambda_max(const SampleSet& samples, double delta, double kurtosis,
                           const LambdaMaxOptions& options = {});

}  // namespace robmean
