#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "robmean/cover_cache.hpp"
#include "robmean/distributions.hpp"
#include "robmean/rng.hpp"
#include "robmean/scalar_mom.hpp"
#include "robmean/spherical.hpp"

using namespace robmean;

namespace {

SampleSet gaussian_samples(int n, int d, std::uint64_t seed) {
  return sample(make_gaussian(Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d, d)), n,
                seed);
}

}  // namespace

TEST_SUITE("spherical") {

TEST_CASE("directional_mom: constants project exactly") {
  Eigen::VectorXd v(3);
  v << 1.0, -2.0, 0.5;
  SampleSet s(v.transpose().replicate(30, 1));
  Eigen::VectorXd w(3);
  w << 0.0, 1.0, 0.0;
  CHECK(directional_mom(s, w, 0.1) == doctest::Approx(-2.0).epsilon(1e-14));

  SampleSet zeros(Eigen::MatrixXd::Zero(30, 3));
  Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 0);
  CHECK(directional_mom(zeros, e1, 0.1) == 0.0);
}

TEST_CASE("directional_mom: d=1 with w=+1 reproduces the scalar estimator") {
  Rng rng(12);
  Eigen::MatrixXd col(50, 1);
  for (int i = 0; i < 50; ++i) col(i, 0) = rng.normal();
  SampleSet s(col);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
  std::vector<double> xs(col.data(), col.data() + 50);
  CHECK(directional_mom(s, w, 0.07) == median_of_means(xs, 0.07).value);
}

TEST_CASE("build_polytope: halfwidth formula") {
  const Cover& cover = shared_cover(2, 0.5, 0);
  const SampleSet s = gaussian_samples(1000, 2, 5);
  const Polytope poly = build_polytope(s, 1.0, 0.1, cover);
  // 2e sqrt(2 ln(e 8^2 / 0.1) / 1000)
  CHECK(poly.halfwidth == doctest::Approx(0.6641277403359289).epsilon(1e-12));
  CHECK(poly.centers.size() == cover.count());

  const Polytope zero_lambda = build_polytope(s, 0.0, 0.1, cover);
  CHECK(zero_lambda.halfwidth == 0.0);

  const Polytope quadrupled = build_polytope(s, 4.0, 0.1, cover);
  CHECK(quadrupled.halfwidth == doctest::Approx(2.0 * poly.halfwidth).epsilon(1e-14));
}

TEST_CASE("build_polytope: rejects samples too small for the per-direction level") {
  const Cover& cover = shared_cover(2, 0.5, 0);
  const SampleSet s = gaussian_samples(10, 2, 5);
  CHECK_THROWS_WITH_AS(build_polytope(s, 1.0, 0.1, cover),
                       "sample too small for d at this delta", std::invalid_argument);
}

TEST_CASE("build_polytope: requires a 1/2-cover") {
  const Cover wrong = build_cover(2, 0.3, 0);
  const SampleSet s = gaussian_samples(100, 2, 5);
  CHECK_THROWS_AS(build_polytope(s, 1.0, 0.1, wrong), std::invalid_argument);
}

TEST_CASE("find_feasible_point: constant data is its own feasible point") {
  Eigen::VectorXd v(2);
  v << 0.3, -1.7;
  SampleSet s(v.transpose().replicate(200, 1));
  const Polytope poly = build_polytope(s, 0.0, 0.1, shared_cover(2, 0.5, 0));
  const SphericalEstimate est = find_feasible_point(poly);
  CHECK(est.feasible);
  CHECK((est.value - v).norm() <= 1e-9);
}

TEST_CASE("find_feasible_point: d=1 interval oracle") {
  Rng rng(77);
  Eigen::MatrixXd col(400, 1);
  for (int i = 0; i < 400; ++i) col(i, 0) = rng.normal();
  const Polytope poly = build_polytope(SampleSet(col), 1.0, 0.1, shared_cover(1, 0.5, 0));
  // cover rows are (-1, +1): feasible x lies in
  // [-m(-1) - r, -m(-1) + r] intersect [m(+1) - r, m(+1) + r]
  const double m_minus = poly.centers[0], m_plus = poly.centers[1];
  const double r = poly.halfwidth;
  const double lo = std::max(-m_minus - r, m_plus - r);
  const double hi = std::min(-m_minus + r, m_plus + r);
  REQUIRE(lo <= hi);
  const SphericalEstimate est = find_feasible_point(poly);
  REQUIRE(est.feasible);
  const double tol = effective_search_tol(poly, {});
  CHECK(est.value[0] >= lo - tol);
  CHECK(est.value[0] <= hi + tol);
}

TEST_CASE("find_feasible_point: contradictory zero-width polytope is infeasible") {
  Polytope poly;
  poly.cover = build_cover(1, 0.5, 0);  // rows -1, +1
  poly.centers.resize(2);
  poly.centers << 0.0, 1.0;  // m(-e1) = 0, m(+e1) = 1
  poly.halfwidth = 0.0;
  poly.delta = 0.1;
  poly.lambda = 0.0;
  poly.init_point = Eigen::VectorXd::Constant(1, 0.5);
  const SphericalEstimate est = find_feasible_point(poly);
  CHECK_FALSE(est.feasible);
  CHECK(est.value[0] == 0.0);
  CHECK(est.residual >= 0.5 - 1e-12);
}

TEST_CASE("find_feasible_point: never feasible with residual above halfwidth + tol") {
  Rng rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    Polytope poly;
    poly.cover = build_cover(2, 0.5, 0);
    poly.centers.resize(poly.cover.count());
    for (int i = 0; i < poly.centers.size(); ++i) poly.centers[i] = rng.normal();
    poly.halfwidth = 0.3 * rng.uniform01();
    poly.delta = 0.1;
    poly.lambda = 1.0;
    poly.init_point = Eigen::VectorXd::Zero(2);
    FeasibleSearchOptions opts;
    opts.max_iterations = 500;
    const SphericalEstimate est = find_feasible_point(poly, opts);
    if (est.feasible)
      CHECK(est.residual <= poly.halfwidth + effective_search_tol(poly, opts));
  }
}

TEST_CASE("estimate_spherical: constants and translation equivariance") {
  Eigen::VectorXd v(2);
  v << 2.0, -0.5;
  SampleSet s(v.transpose().replicate(300, 1));
  const SphericalEstimate est = estimate_spherical(s, 0.0, 0.05);
  CHECK(est.feasible);
  CHECK((est.value - v).norm() <= 1e-9);

  const SampleSet g = gaussian_samples(2000, 2, 44);
  Eigen::VectorXd shift(2);
  shift << 10.0, -3.0;
  SampleSet shifted(g.data.rowwise() + shift.transpose());
  const SphericalEstimate a = estimate_spherical(g, 1.0, 0.05);
  const SphericalEstimate b = estimate_spherical(shifted, 1.0, 0.05);
  REQUIRE(a.feasible);
  REQUIRE(b.feasible);
  CHECK((b.value - a.value - shift).norm() <= 1e-9);
}

TEST_CASE("spherical_error_bound: frozen value, scaling, halfwidth identity") {
  CHECK(spherical_error_bound(1.0, 2, 1000, 0.1) ==
        doctest::Approx(2.6565109613437157).epsilon(1e-12));
  CHECK(spherical_error_bound(4.0, 2, 1000, 0.1) ==
        doctest::Approx(2.0 * spherical_error_bound(1.0, 2, 1000, 0.1)).epsilon(1e-14));
  // identical logarithm expansions: bound = 4 * halfwidth
  const SampleSet s = gaussian_samples(500, 3, 9);
  const Polytope poly = build_polytope(s, 2.5, 0.07, shared_cover(3, 0.5, 0));
  CHECK(spherical_error_bound(2.5, 3, 500, 0.07) ==
        doctest::Approx(4.0 * poly.halfwidth).epsilon(1e-14));
}

TEST_CASE("estimate_spherical: empirical coverage sanity (small run)") {
  const double bound = spherical_error_bound(1.0, 2, 2000, 0.05);
  int feasible = 0, within = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    const SampleSet s = gaussian_samples(2000, 2, 1000 + t);
    const SphericalEstimate est = estimate_spherical(s, 1.0, 0.05);
    if (est.feasible) {
      ++feasible;
      if (est.value.norm() <= bound) ++within;
    }
  }
  CHECK(feasible >= 36);
  CHECK(within >= 36);
}

TEST_CASE("estimate_lambda_max: constants, quadratic scaling, gaussian interval") {
  Eigen::VectorXd v(2);
  v << 1.0, 2.0;
  SampleSet constant(v.transpose().replicate(64, 1));
  CHECK(estimate_lambda_max(constant, 0.1, 3.0) == 0.0);

  const SampleSet g = gaussian_samples(2000, 2, 8);
  SampleSet doubled(2.0 * g.data);
  const double base = estimate_lambda_max(g, 0.1, 3.0);
  CHECK(estimate_lambda_max(doubled, 0.1, 3.0) == doctest::Approx(4.0 * base).epsilon(1e-12));

  int inside = 0;
  const int trials = 60;
  for (int t = 0; t < trials; ++t) {
    const SampleSet s = gaussian_samples(8000, 2, 5000 + t);
    const double lam = estimate_lambda_max(s, 0.1, 3.0);
    if (lam >= 1.0 && lam <= 1.3) ++inside;
  }
  CHECK(inside >= 57);  // >= 95%
}

}  // TEST_SUITE
