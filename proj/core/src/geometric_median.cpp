#include "robmean/geometric_median.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "robmean/scalar_mom.hpp"

namespace robmean {

namespace {

double objective_at(const Eigen::MatrixXd& points, const Eigen::VectorXd& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    s += (points.row(i).transpose() - x).norm();
  return s;
}

}  // namespace

GeoMedianResult geometric_median(const Eigen::MatrixXd& points, double tol, int max_iter) {
  const Eigen::Index k = points.rows();
  if (k == 0) throw std::invalid_argument("empty sample");
  const Eigen::Index d = points.cols();

  GeoMedianResult res;
  if (k == 1) {
    res.point = points.row(0).transpose();
    res.converged = true;
    return res;
  }

  const Eigen::VectorXd span =
      points.colwise().maxCoeff().transpose() - points.colwise().minCoeff().transpose();
  const double diameter = span.norm();
  if (diameter == 0.0) {  // all points coincide
    res.point = points.row(0).transpose();
    res.converged = true;
    return res;
  }
  const double tol_eff = tol >= 0.0 ? tol : 1e-10 * diameter;
  const double coincide_eps = 1e-12 * diameter;

  Eigen::VectorXd x = points.colwise().mean().transpose();
  Eigen::VectorXd dist(k);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::Index nearest = 0;
    double min_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k; ++i) {
      dist[i] = (points.row(i).transpose() - x).norm();
      if (dist[i] < min_dist) {
        min_dist = dist[i];
        nearest = i;
      }
    }

    Eigen::VectorXd next(d);
    if (min_dist <= coincide_eps) {
      // At (or numerically at) an anchor: check the subgradient condition
      // ||R|| <= multiplicity, where R sums unit vectors away from the other
      // points; if violated, step off along -R (Vardi-Zhang step length).
      const Eigen::VectorXd anchor = points.row(nearest).transpose();
      Eigen::VectorXd r = Eigen::VectorXd::Zero(d);
      double lipschitz = 0.0;
      double multiplicity = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const double di = (points.row(i).transpose() - anchor).norm();
        if (di <= coincide_eps) {
          multiplicity += 1.0;
        } else {
          r += (anchor - points.row(i).transpose()) / di;
          lipschitz += 1.0 / di;
        }
      }
      const double rn = r.norm();
      if (rn <= multiplicity || lipschitz == 0.0) {
        res.point = anchor;
        res.objective = objective_at(points, anchor);
        res.iterations = it;
        res.converged = true;
        return res;
      }
      next = anchor - ((rn - multiplicity) / lipschitz) * (r / rn);
    } else {
      Eigen::VectorXd num = Eigen::VectorXd::Zero(d);
      double den = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const double wi = 1.0 / dist[i];
        num += wi * points.row(i).transpose();
        den += wi;
      }
      next = num / den;
    }

    const double step = (next - x).norm();
    x = next;
    res.iterations = it + 1;
    if (step <= tol_eff) {
      res.converged = true;
      break;
    }
  }

  res.point = x;
  res.objective = objective_at(points, x);
  return res;
}

Eigen::VectorXd minsker_estimator(const SampleSet& samples, double delta) {
  const int n = samples.size();
  const int b = choose_block_count(delta, n);
  const auto blocks = partition_indices(n, b);
  Eigen::MatrixXd means(b, samples.dim());
  for (int i = 0; i < b; ++i) {
    const int len = blocks[i].second - blocks[i].first;
    means.row(i) = samples.data.middleRows(blocks[i].first, len).colwise().mean();
  }
  return geometric_median(means).point;
}

}  // namespace robmean
