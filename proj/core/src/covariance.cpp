#include "robmean/covariance.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "robmean/scalar_mom.hpp"

namespace robmean {

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

// Packs the symmetric matrix feature row for direction u: [u_i^2 ...] then
// [2 u_i u_j, i < j], matching pack/unpack below.
Eigen::RowVectorXd feature_row(const Eigen::VectorXd& u) {
  const int d = static_cast<int>(u.size());
  Eigen::RowVectorXd row(d * (d + 1) / 2);
  int k = 0;
  for (int i = 0; i < d; ++i) row[k++] = u[i] * u[i];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) row[k++] = 2.0 * u[i] * u[j];
  return row;
}

Eigen::MatrixXd unpack_symmetric(const Eigen::VectorXd& coef, int d) {
  Eigen::MatrixXd a(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i) a(i, i) = coef[k++];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      a(i, j) = coef[k];
      a(j, i) = coef[k];
      ++k;
    }
  return a;
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::VectorXd mom_per_column(const Eigen::MatrixXd& values, int block_count) {
  // values: npairs x ndirs; MoM down each column.
  const int ndirs = static_cast<int>(values.cols());
  Eigen::VectorXd out(ndirs);
  std::vector<double> col(static_cast<std::size_t>(values.rows()));
  for (int j = 0; j < ndirs; ++j) {
    Eigen::VectorXd::Map(col.data(), values.rows()) = values.col(j);
    out[j] = std::max(0.0, detail::mom_of_values(col, block_count));
  }
  return out;
}

}  // namespace

double quad_form_mom(const SampleSet& samples, const Eigen::VectorXd& u, double delta_eff) {
  const int m = samples.size() - (samples.size() % 2);
  if (m < 8) throw std::invalid_argument("insufficient pairs");
  const int half = m / 2;
  const Eigen::VectorXd proj =
      (samples.data.topRows(half) - samples.data.middleRows(half, half)) * u;
  std::vector<double> vals(static_cast<std::size_t>(half));
  for (int i = 0; i < half; ++i) vals[i] = 0.5 * proj[i] * proj[i];
  const int b = choose_block_count(delta_eff, half);
  return std::max(0.0, detail::mom_of_values(vals, b));
}

QuadFormEstimates estimate_quad_forms(const SampleSet& samples, const Cover& cover,
                                      double delta_eff) {
  const int m = samples.size() - (samples.size() % 2);
  if (m < 8) throw std::invalid_argument("insufficient pairs");
  if (samples.dim() != cover.dim) throw std::invalid_argument("cover/sample dimension mismatch");
  const int half = m / 2;
  const Eigen::MatrixXd diff =
      samples.data.topRows(half) - samples.data.middleRows(half, half);
  const Eigen::MatrixXd proj = diff * cover.directions.transpose();  // half x ndirs
  const Eigen::MatrixXd vals = 0.5 * proj.array().square();
  const int b = choose_block_count(delta_eff, half);

  QuadFormEstimates est;
  est.cover = cover;
  est.values = mom_per_column(vals, b);
  est.m = m;
  est.delta_eff = delta_eff;
  return est;
}

double epsilon_m(double kurtosis, int m, int d, int s, double delta, double gamma) {
  if (kurtosis <= 0.0 || m <= 0 || d < 1 || s < 1) throw std::invalid_argument("bad epsilon_m arguments");
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(gamma > 0.0) || !(gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
  const double log_term = std::log(static_cast<double>(s)) + d * std::log(4.0 / gamma) +
                          std::log(1.0 / delta);
  return 4.0 * kE * std::sqrt(kurtosis * log_term / m);
}

CovFit fit_covariance(const QuadFormEstimates& estimates, double epsilon, int max_sweeps) {
  const int n = static_cast<int>(estimates.values.size());
  if (n == 0) throw std::invalid_argument("no quadratic-form estimates");
  const int d = estimates.cover.dim;
  const int p = d * (d + 1) / 2;
  if (n < p) throw std::invalid_argument("cover does not identify the quadratic form");

  Eigen::MatrixXd design(n, p);
  for (int i = 0; i < n; ++i)
    design.row(i) = feature_row(estimates.cover.directions.row(i).transpose());

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < p) throw std::invalid_argument("cover does not identify the quadratic form");
  const Eigen::VectorXd coef = qr.solve(estimates.values);

  Eigen::MatrixXd a = project_psd(unpack_symmetric(coef, d));

  const Eigen::VectorXd& v = estimates.values;
  const bool slabs_active = epsilon < 1.0;
  const Eigen::VectorXd halfwidths =
      slabs_active ? Eigen::VectorXd(epsilon / (1.0 - epsilon) * v)
                   : Eigen::VectorXd(Eigen::VectorXd::Constant(
                         n, std::numeric_limits<double>::infinity()));
  const Eigen::VectorXd slack = 1e-12 * (1.0 + v.array().abs());

  CovFit fit;
  fit.epsilon_m = epsilon;
  fit.sweeps_used = 0;

  auto all_slabs_hold = [&](const Eigen::MatrixXd& mat) {
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd u = estimates.cover.directions.row(i).transpose();
      const double r = u.dot(mat * u) - v[i];
      if (std::abs(r) > halfwidths[i] + slack[i]) return false;
    }
    return true;
  };

  bool member = all_slabs_hold(a);
  for (int sweep = 0; sweep < max_sweeps && !member; ++sweep) {
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd u = estimates.cover.directions.row(i).transpose();
      const double r = u.dot(a * u) - v[i];
      if (std::abs(r) > halfwidths[i]) {
        const double corr = r - std::copysign(halfwidths[i], r);
        a.noalias() -= corr * (u * u.transpose());
      }
    }
    a = project_psd(a);
    fit.sweeps_used = sweep + 1;
    member = all_slabs_hold(a);
  }

  a = 0.5 * (a + a.transpose().eval());
  fit.sigma_hat = a;
  fit.member = member;
  fit.residuals.resize(n);
  const double floor = 1e-15 * std::max(1.0, v.maxCoeff());
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd u = estimates.cover.directions.row(i).transpose();
    const double q = u.dot(a * u);
    fit.residuals[i] = std::abs(q - v[i]) / std::max(v[i], floor);
  }
  return fit;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> spectral_decompose(const CovFit& fit) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fit.sigma_hat);
  const int d = static_cast<int>(fit.sigma_hat.rows());
  Eigen::VectorXd w(d);
  Eigen::MatrixXd vecs(d, d);
  for (int i = 0; i < d; ++i) {
    w[i] = std::max(0.0, es.eigenvalues()[d - 1 - i]);
    vecs.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  return {w, vecs};
}

std::pair<int, Eigen::MatrixXd> select_top_subspace(const Eigen::VectorXd& eigenvalues,
                                                    const Eigen::MatrixXd& eigenvectors) {
  const int d = static_cast<int>(eigenvalues.size());
  const double top = eigenvalues[0];
  int dhat;
  if (top <= 0.0) {
    dhat = d;  // point mass: the whole space is (vacuously) spherical
  } else {
    dhat = 0;
    while (dhat < d && eigenvalues[dhat] >= top / 2.0) ++dhat;
  }
  return {dhat, eigenvectors.leftCols(dhat)};
}

}  // namespace robmean
