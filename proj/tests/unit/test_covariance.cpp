#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "robmean/covariance.hpp"
#include "robmean/cover_cache.hpp"
#include "robmean/rng.hpp"

using namespace robmean;

namespace {

Eigen::VectorXd quad_values(const Cover& cover, const Eigen::MatrixXd& sigma) {
  Eigen::VectorXd v(cover.count());
  for (int i = 0; i < cover.count(); ++i) {
    const Eigen::VectorXd u = cover.directions.row(i).transpose();
    v[i] = u.dot(sigma * u);
  }
  return v;
}

QuadFormEstimates synthetic_estimates(const Cover& cover, Eigen::VectorXd values) {
  QuadFormEstimates est;
  est.cover = cover;
  est.values = std::move(values);
  est.m = 1000;
  est.delta_eff = 0.01;
  return est;
}

}  // namespace

TEST_SUITE("covariance") {

TEST_CASE("quad_form_mom: constants give zero") {
  SampleSet s(Eigen::MatrixXd::Ones(20, 2) * 3.0);
  Eigen::VectorXd u(2);
  u << 1, 0;
  CHECK(quad_form_mom(s, u, 0.5) == 0.0);
}

TEST_CASE("quad_form_mom: hand-evaluated pairing on 8 samples") {
  // rows [v, v, -v, -v, v, -v, v, -v]: pairs (X_i - X_{4+i}) give projected
  // squares {0, 2, 2, 0}; delta_eff = 0.5 puts everything into one block.
  Eigen::MatrixXd rows(8, 2);
  rows << 1, 0, 1, 0, -1, 0, -1, 0, 1, 0, -1, 0, 1, 0, -1, 0;
  SampleSet s(rows);
  Eigen::VectorXd u(2);
  u << 1, 0;
  CHECK(quad_form_mom(s, u, 0.5) == 1.0);
}

TEST_CASE("quad_form_mom: scaling the data by 2 scales the value by 4") {
  Rng rng(3);
  Eigen::MatrixXd rows(40, 3);
  for (int i = 0; i < rows.size(); ++i) rows.data()[i] = rng.normal();
  SampleSet s(rows), s2(2.0 * rows);
  const Eigen::VectorXd u = Rng(9).unit_vector(3);
  CHECK(quad_form_mom(s2, u, 0.2) == doctest::Approx(4.0 * quad_form_mom(s, u, 0.2)).epsilon(1e-14));
}

TEST_CASE("quad_form_mom: too few samples / odd sample dropped") {
  SampleSet tiny(Eigen::MatrixXd::Zero(7, 2));
  Eigen::VectorXd u(2);
  u << 0, 1;
  CHECK_THROWS_WITH_AS(quad_form_mom(tiny, u, 0.5), "insufficient pairs",
                       std::invalid_argument);

  Rng rng(5);
  Eigen::MatrixXd nine(9, 2);
  for (int i = 0; i < nine.size(); ++i) nine.data()[i] = rng.normal();
  SampleSet s9(nine), s8(nine.topRows(8));
  CHECK(quad_form_mom(s9, u, 0.5) == quad_form_mom(s8, u, 0.5));
}

TEST_CASE("estimate_quad_forms agrees with the per-direction operation") {
  Rng rng(17);
  Eigen::MatrixXd rows(60, 2);
  for (int i = 0; i < rows.size(); ++i) rows.data()[i] = rng.normal();
  SampleSet s(rows);
  const Cover cover = build_cover(2, 0.2, 0);
  const QuadFormEstimates est = estimate_quad_forms(s, cover, 0.3);
  REQUIRE(est.values.size() == cover.count());
  for (int j = 0; j < cover.count(); ++j) {
    const double direct = quad_form_mom(s, cover.directions.row(j).transpose(), 0.3);
    CHECK(est.values[j] == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("epsilon_m: frozen value, scaling, positivity clamp") {
  CHECK(epsilon_m(3.0, 1000000, 2, 4, 0.1, 0.01) ==
        doctest::Approx(0.07455463688929688).epsilon(1e-12));
  CHECK(epsilon_m(3.0, 4000000, 2, 4, 0.1, 0.01) ==
        doctest::Approx(0.03727731844464844).epsilon(1e-12));
  CHECK_THROWS_AS(epsilon_m(3.0, 1000, 2, 4, 1.5, 0.01), std::invalid_argument);
}

TEST_CASE("fit_covariance: exact quadratic forms are recovered") {
  const Cover cover = build_cover(2, 0.01, 0);
  Eigen::MatrixXd sigma(2, 2);
  sigma << 2.0, 0.3, 0.3, 0.5;
  const CovFit fit = fit_covariance(synthetic_estimates(cover, quad_values(cover, sigma)), 0.01);
  CHECK(fit.member);
  CHECK((fit.sigma_hat - sigma).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(fit.residuals.maxCoeff() <= 1e-10);
}

TEST_CASE("fit_covariance: zero values give the zero matrix") {
  const Cover cover = build_cover(2, 0.1, 0);
  const CovFit fit =
      fit_covariance(synthetic_estimates(cover, Eigen::VectorXd::Zero(cover.count())), 0.01);
  CHECK(fit.member);
  CHECK(fit.sigma_hat.cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("fit_covariance: covers that cannot identify the form are rejected") {
  Cover tiny;
  tiny.dim = 2;
  tiny.gamma = 0.5;
  tiny.directions.resize(2, 2);
  tiny.directions << 1, 0, 0, 1;
  CHECK_THROWS_WITH_AS(
      fit_covariance(synthetic_estimates(tiny, Eigen::VectorXd::Ones(2)), 0.01),
      "cover does not identify the quadratic form", std::invalid_argument);

  // enough directions but rank-deficient (repeated axes)
  Cover degenerate;
  degenerate.dim = 2;
  degenerate.gamma = 0.5;
  degenerate.directions.resize(4, 2);
  degenerate.directions << 1, 0, 1, 0, 0, 1, 0, 1;
  CHECK_THROWS_WITH_AS(
      fit_covariance(synthetic_estimates(degenerate, Eigen::VectorXd::Ones(4)), 0.01),
      "cover does not identify the quadratic form", std::invalid_argument);
}

TEST_CASE("fit_covariance: noisy values stay in the relative slabs (sandwich)") {
  const Cover cover = build_cover(2, 0.01, 0);
  const double eps = 0.009;
  Rng rng(2024);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::MatrixXd g(2, 2);
    for (int i = 0; i < 4; ++i) g.data()[i] = rng.normal();
    const Eigen::MatrixXd sigma = g * g.transpose() + 0.05 * Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd truth = quad_values(cover, sigma);
    Eigen::VectorXd noisy(truth.size());
    for (int i = 0; i < truth.size(); ++i)
      noisy[i] = truth[i] * (1.0 + 0.9 * eps * (2.0 * rng.uniform01() - 1.0));
    const CovFit fit = fit_covariance(synthetic_estimates(cover, noisy), eps);
    REQUIRE(fit.member);
    const Eigen::VectorXd fitted = quad_values(cover, fit.sigma_hat);
    for (int i = 0; i < truth.size(); ++i) {
      CHECK(fitted[i] >= truth[i] * (1.0 - eps) / (1.0 + eps));
      CHECK(fitted[i] <= truth[i] * (1.0 + eps) / (1.0 - eps));
    }
  }
}

TEST_CASE("fit_covariance: eps >= 1 disables the slabs") {
  const Cover cover = build_cover(2, 0.1, 0);
  Eigen::VectorXd values = quad_values(cover, Eigen::MatrixXd::Identity(2, 2));
  const CovFit fit = fit_covariance(synthetic_estimates(cover, values), 1.7);
  CHECK(fit.member);
  CHECK(fit.sweeps_used == 0);
}

TEST_CASE("spectral_decompose: identity, diagonal, reconstruction") {
  CovFit fit;
  fit.sigma_hat = Eigen::MatrixXd::Identity(3, 3);
  const auto [w_id, v_id] = spectral_decompose(fit);
  CHECK((w_id.array() == 1.0).all());

  fit.sigma_hat.resize(2, 2);
  fit.sigma_hat << 3, 0, 0, 1;
  const auto [w, v] = spectral_decompose(fit);
  CHECK(w[0] == doctest::Approx(3.0));
  CHECK(w[1] == doctest::Approx(1.0));
  CHECK(std::abs(v(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(v(1, 1)) == doctest::Approx(1.0));

  Rng rng(31);
  Eigen::MatrixXd g(4, 4);
  for (int i = 0; i < 16; ++i) g.data()[i] = rng.normal();
  fit.sigma_hat = g * g.transpose();
  const auto [wr, vr] = spectral_decompose(fit);
  const Eigen::MatrixXd rebuilt = vr * wr.asDiagonal() * vr.transpose();
  CHECK((rebuilt - fit.sigma_hat).cwiseAbs().maxCoeff() <= 1e-9);
  for (int i = 0; i + 1 < 4; ++i) CHECK(wr[i] >= wr[i + 1]);
}

TEST_CASE("select_top_subspace: half-threshold rule") {
  Eigen::MatrixXd v3 = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd w(3);
  w << 1.0, 0.6, 0.4;
  CHECK(select_top_subspace(w, v3).first == 2);
  w << 1.0, 1.0, 1.0;
  CHECK(select_top_subspace(w, v3).first == 3);

  Eigen::MatrixXd v2 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd w2(2);
  w2 << 1.0, 0.5;  // boundary is inclusive
  CHECK(select_top_subspace(w2, v2).first == 2);

  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(3);
  const auto [dhat, basis] = select_top_subspace(zeros, v3);
  CHECK(dhat == 3);
  CHECK(basis.cols() == 3);
}

}  // TEST_SUITE
