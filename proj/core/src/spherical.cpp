#include "robmean/spherical.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "robmean/covariance.hpp"
#include "robmean/cover_cache.hpp"
#include "robmean/scalar_mom.hpp"

namespace robmean {

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;
constexpr double kLn8 = 2.079441541679835928251696;

double delta_per_direction(double delta, int d) {
  return delta * std::exp(-d * kLn8);  // delta / 8^d
}

}  // namespace

const Cover& shared_cover(int d, double gamma, std::uint64_t seed) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, std::uint64_t>, std::unique_ptr<Cover>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(d, gamma, seed);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto cover = std::make_unique<Cover>(build_cover(d, gamma, seed));
    it = cache.emplace(key, std::move(cover)).first;
  }
  return *it->second;
}

double default_net_gamma(int d) {
  if (d <= 2) return 0.01;
  if (d == 3) return 0.1;
  return 0.2;
}

double directional_mom(const SampleSet& samples, const Eigen::VectorXd& w, double delta_eff) {
  const Eigen::VectorXd proj = samples.data * w;
  std::vector<double> vals(proj.data(), proj.data() + proj.size());
  return median_of_means(vals, delta_eff).value;
}

Polytope build_polytope(const SampleSet& samples, double lambda, double delta,
                        const Cover& cover) {
  if (cover.gamma != 0.5) throw std::invalid_argument("polytope requires a 1/2-cover");
  if (cover.dim != samples.dim()) throw std::invalid_argument("cover/sample dimension mismatch");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  const int n = samples.size();
  const int d = samples.dim();
  const double delta_eff = delta_per_direction(delta, d);
  int b = 0;
  try {
    b = choose_block_count(delta_eff, n);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("sample too small for d at this delta");
  }

  Polytope poly;
  poly.cover = cover;
  poly.delta = delta;
  poly.lambda = lambda;
  poly.sample_count = n;
  // ln(e 8^d / delta) = 1 + d ln 8 + ln(1/delta)
  const double log_term = 1.0 + d * kLn8 + std::log(1.0 / delta);
  poly.halfwidth = 2.0 * kE * std::sqrt(2.0 * lambda * log_term / n);

  const Eigen::MatrixXd proj = samples.data * cover.directions.transpose();  // n x count
  poly.centers.resize(cover.count());
  std::vector<double> col(static_cast<std::size_t>(n));
  for (int j = 0; j < cover.count(); ++j) {
    Eigen::VectorXd::Map(col.data(), n) = proj.col(j);
    poly.centers[j] = detail::mom_of_values(col, b);
  }
  poly.init_point.resize(d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd::Map(col.data(), n) = samples.data.col(j);
    poly.init_point[j] = detail::mom_of_values(col, b);
  }
  return poly;
}

double effective_search_tol(const Polytope& polytope, const FeasibleSearchOptions& options) {
  const double scale = polytope.centers.size() ? polytope.centers.cwiseAbs().maxCoeff() : 0.0;
  return options.tol_rel * polytope.halfwidth + 1e-12 * (1.0 + scale);
}

SphericalEstimate find_feasible_point(const Polytope& polytope,
                                      const FeasibleSearchOptions& options) {
  const int d = polytope.cover.dim;
  const double tol = effective_search_tol(polytope, options);
  const Eigen::MatrixXd& dirs = polytope.cover.directions;

  Eigen::VectorXd x = options.init ? *options.init : polytope.init_point;
  Eigen::VectorXd best = x;
  double best_f = std::numeric_limits<double>::infinity();

  for (int k = 0; k < options.max_iterations; ++k) {
    const Eigen::VectorXd viol = dirs * x - polytope.centers;
    Eigen::Index arg = 0;
    const double f = viol.cwiseAbs().maxCoeff(&arg);
    if (f < best_f) {
      best_f = f;
      best = x;
    }
    // Deep inside the polytope or at the constant-data fixed point: done.
    if (best_f <= 0.5 * tol || best_f <= 1e-3 * polytope.halfwidth) break;
    // Polyak step toward f* = 0; the active subgradient is +-w (unit norm).
    x -= std::copysign(f, viol[arg]) * dirs.row(arg).transpose();
  }

  SphericalEstimate est;
  est.residual = best_f;
  est.feasible = best_f <= polytope.halfwidth + tol;
  est.value = est.feasible ? best : Eigen::VectorXd::Zero(d);
  est.bound = 4.0 * polytope.halfwidth;
  return est;
}

SphericalEstimate estimate_spherical(const SampleSet& samples, double lambda, double delta,
                                     const SphericalOptions& options) {
  const Cover& cover = shared_cover(samples.dim(), 0.5, options.cover_seed);
  const Polytope poly = build_polytope(samples, lambda, delta, cover);
  SphericalEstimate est = find_feasible_point(poly, options.search);
  est.bound = spherical_error_bound(lambda, samples.dim(), samples.size(), delta);
  return est;
}

double spherical_error_bound(double lambda, int d, int n, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (lambda < 0.0 || n < 1 || d < 1) throw std::invalid_argument("bad bound arguments");
  const double log_term = d * kLn8 + 1.0 + std::log(1.0 / delta);
  return 8.0 * kE * std::sqrt(2.0 * lambda * log_term / n);
}

double estimate_lambda_max(const SampleSet& samples, double delta, double kurtosis,
                           const LambdaMaxOptions& options) {
  const int d = samples.dim();
  const double gamma = options.gamma > 0.0 ? options.gamma : default_net_gamma(d);
  const Cover& cover = shared_cover(d, gamma, options.cover_seed);
  const int m = samples.size() - (samples.size() % 2);
  const double delta_eff = delta / std::pow(4.0 / gamma, d);  // single stage, s = 1
  const QuadFormEstimates est = estimate_quad_forms(samples, cover, delta_eff);
  const double eps = epsilon_m(kurtosis, m, d, 1, delta, gamma);
  const CovFit fit = fit_covariance(est, eps);
  const auto [eigenvalues, eigenvectors] = spectral_decompose(fit);
  return 1.1 * eigenvalues[0];
}

}  // namespace robmean
