#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "robmean/distributions.hpp"
#include "robmean/rng.hpp"

using namespace robmean;

namespace {

// Quadrature oracle for E[T^4] of a Student t: Simpson on [0, hi] of
// 2 t^4 f_nu(t), with the density from lgamma.
double t_fourth_moment_quadrature(double nu) {
  const double logc = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                      0.5 * std::log(nu * M_PI);
  auto integrand = [&](double t) {
    return 2.0 * std::pow(t, 4.0) *
           std::exp(logc - (nu + 1.0) / 2.0 * std::log1p(t * t / nu));
  };
  const double hi = 2000.0;
  const int steps = 2000000;
  const double h = hi / steps;
  double s = integrand(0.0) + integrand(hi);
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
  return s * h / 3.0;
}

Eigen::MatrixXd empirical_cov(const SampleSet& s) {
  const Eigen::RowVectorXd mean = s.data.colwise().mean();
  const Eigen::MatrixXd centered = s.data.rowwise() - mean;
  return centered.transpose() * centered / s.size();
}

double op_norm(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("distributions") {

TEST_CASE("kurtosis constants: closed forms") {
  const Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);

  CHECK(kurtosis_constant(make_gaussian(mu, id)) == 3.0);
  CHECK(kurtosis_constant(make_student_t(8.0, mu, id)) == doctest::Approx(4.5).epsilon(1e-14));
  // Gaussian limit
  CHECK(kurtosis_constant(make_student_t(1e6, mu, id)) == doctest::Approx(3.0).epsilon(1e-4));
  CHECK(kurtosis_constant(make_pareto_product(5.0, mu, id)) ==
        doctest::Approx(73.8).epsilon(1e-12));
  CHECK(make_pareto_product(5.0, mu, id).kurtosis_is_upper_bound);
  CHECK(kurtosis_constant(make_lognormal(mu, id)) ==
        doctest::Approx(113.93639217631147).epsilon(1e-12));
  CHECK(kurtosis_constant(make_contaminated_gaussian(0.05, 10.0, mu, id)) ==
        doctest::Approx(42.45039192147446).epsilon(1e-12));
}

TEST_CASE("student t fourth moment cross-checked by quadrature") {
  const double e4 = t_fourth_moment_quadrature(8.0);
  const double var = 8.0 / 6.0;
  const double k = e4 / (var * var);
  CHECK(k == doctest::Approx(4.5).epsilon(1e-6));
}

TEST_CASE("fourth-moment existence is enforced") {
  const Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_WITH_AS(make_student_t(4.0, mu, id), "fourth moment does not exist",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_pareto_product(3.9, mu, id), "fourth moment does not exist",
                       std::invalid_argument);
}

TEST_CASE("sampling is bit-deterministic given the seed") {
  const DistributionSpec spec =
      make_student_t(5.0, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
  const SampleSet a = sample(spec, 500, 42);
  const SampleSet b = sample(spec, 500, 42);
  CHECK((a.data - b.data).cwiseAbs().maxCoeff() == 0.0);
  const SampleSet c = sample(spec, 500, 43);
  CHECK((a.data - c.data).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("point mass: zero shape repeats the mean") {
  Eigen::VectorXd mu(2);
  mu << 4.0, -1.0;
  const DistributionSpec spec = make_gaussian(mu, Eigen::MatrixXd::Zero(2, 2));
  const SampleSet s = sample(spec, 50, 7);
  for (int i = 0; i < 50; ++i) CHECK((s.data.row(i).transpose() - mu).norm() == 0.0);
}

TEST_CASE("affine pushforward matches transforming standard draws") {
  Eigen::VectorXd mu(2);
  mu << 1.0, -2.0;
  Eigen::MatrixXd shape(2, 2);
  shape << 1.0, 0.0, 0.3, 0.8;
  const SampleSet transformed = sample(make_gaussian(mu, shape), 200, 99);
  const SampleSet standard =
      sample(make_gaussian(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)), 200, 99);
  const Eigen::MatrixXd manual =
      (standard.data * shape.transpose()).rowwise() + mu.transpose();
  CHECK((transformed.data - manual).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("law of large numbers: sample covariance approaches the truth") {
  const DistributionSpec spec =
      make_gaussian(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
  const SampleSet s = sample(spec, 100000, 11);
  CHECK(op_norm(empirical_cov(s) - spec.true_cov) < 0.1);
}

TEST_CASE("ground-truth covariance bookkeeping for every kind") {
  Eigen::VectorXd mu(2);
  mu << 0.5, -0.25;
  Eigen::MatrixXd shape(2, 2);
  shape << 1.0, 0.0, 0.3, 0.8;
  const int n = 1000000;

  const DistributionSpec specs[] = {
      make_gaussian(mu, shape),
      make_student_t(5.0, mu, shape),
      make_pareto_product(5.0, mu, shape),
      make_lognormal(mu, shape),
      make_contaminated_gaussian(0.05, 10.0, mu, shape),
  };
  int kind_index = 0;
  for (const auto& spec : specs) {
    const SampleSet s = sample(spec, n, 1234 + kind_index++);
    const double lam = spec.lambda_max();
    // 3-sigma slack for the empirical quadratic forms: their variance is of
    // order (K-1)(v^T Sigma v)^2 / n.
    const double slack =
        3.0 * std::sqrt(std::max(spec.kurtosis_K - 1.0, 1.0) * spec.d / double(n)) * lam;
    CHECK(op_norm(empirical_cov(s) - spec.true_cov) < slack);
  }
}

TEST_CASE("empirical kurtosis check: sanity values") {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);

  const DistributionSpec g = make_gaussian(mu, id);
  const double kg = empirical_kurtosis_check(sample(g, 100000, 5), g, 100, 6);
  CHECK(kg > 3.0 * 0.8);
  CHECK(kg < 3.0 * 1.2);

  const DistributionSpec t8 = make_student_t(8.0, mu, id);
  const double kt = empirical_kurtosis_check(sample(t8, 100000, 5), t8, 100, 6);
  CHECK(kt > 4.5 * 0.7);
  CHECK(kt < 4.5 * 1.3);

  const DistributionSpec pm = make_gaussian(mu, Eigen::MatrixXd::Zero(2, 2));
  CHECK(empirical_kurtosis_check(sample(pm, 1000, 5), pm, 50, 6) == 0.0);
}

}  // TEST_SUITE
