#include "robmean/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "robmean/rng.hpp"

namespace robmean {

namespace {

void check_shape(const Eigen::VectorXd& mean, const Eigen::MatrixXd& shape) {
  if (mean.size() == 0) throw std::invalid_argument("mean must be nonempty");
  if (shape.rows() != mean.size() || shape.cols() != mean.size())
    throw std::invalid_argument("shape must be d x d");
}

// Standardized Pareto(alpha) moments: Z = (P - E P)/sd(P), P on [1, inf).
double pareto_kurtosis(double alpha) {
  const double num = 6.0 * (alpha * alpha * alpha + alpha * alpha - 6.0 * alpha - 2.0);
  return 3.0 + num / (alpha * (alpha - 3.0) * (alpha - 4.0));
}

// Standardized lognormal (sigma = 1): central fourth moment over variance^2,
// from raw moments m_k = e^{k^2/2}.
double lognormal_kurtosis() {
  const double m1 = std::exp(0.5), m2 = std::exp(2.0), m3 = std::exp(4.5), m4 = std::exp(8.0);
  const double var = m2 - m1 * m1;
  const double mu4 = m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 - 3.0 * m1 * m1 * m1 * m1;
  return mu4 / (var * var);
}

}  // namespace

double DistributionSpec::lambda_max() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(true_cov);
  return es.eigenvalues().maxCoeff();
}

DistributionSpec make_gaussian(Eigen::VectorXd mean, Eigen::MatrixXd shape) {
  check_shape(mean, shape);
  DistributionSpec spec;
  spec.kind = DistKind::gaussian;
  spec.d = static_cast<int>(mean.size());
  spec.true_cov = shape * shape.transpose();
  spec.mean = std::move(mean);
  spec.shape = std::move(shape);
  spec.kurtosis_K = 3.0;
  return spec;
}

DistributionSpec make_student_t(double nu, Eigen::VectorXd mean, Eigen::MatrixXd shape) {
  check_shape(mean, shape);
  if (!(nu > 4.0)) throw std::invalid_argument("fourth moment does not exist");
  DistributionSpec spec;
  spec.kind = DistKind::student_t;
  spec.nu = nu;
  spec.d = static_cast<int>(mean.size());
  spec.true_cov = (nu / (nu - 2.0)) * (shape * shape.transpose());
  spec.mean = std::move(mean);
  spec.shape = std::move(shape);
  spec.kurtosis_K = 3.0 * (nu - 2.0) / (nu - 4.0);
  return spec;
}

DistributionSpec make_pareto_product(double alpha, Eigen::VectorXd mean, Eigen::MatrixXd shape) {
  check_shape(mean, shape);
  if (!(alpha > 4.0)) throw std::invalid_argument("fourth moment does not exist");
  DistributionSpec spec;
  spec.kind = DistKind::pareto_product;
  spec.alpha = alpha;
  spec.d = static_cast<int>(mean.size());
  spec.true_cov = shape * shape.transpose();
  spec.mean = std::move(mean);
  spec.shape = std::move(shape);
  // E[(c^T Z)^4] = 3 + (E Z^4 - 3) sum c_i^4 <= E Z^4 for unit c, attained on
  // the axes; certified as an upper bound for general shapes.
  spec.kurtosis_K = pareto_kurtosis(alpha);
  spec.kurtosis_is_upper_bound = true;
  return spec;
}

DistributionSpec make_lognormal(Eigen::VectorXd mean, Eigen::MatrixXd shape) {
  check_shape(mean, shape);
  DistributionSpec spec;
  spec.kind = DistKind::lognormal;
  spec.d = static_cast<int>(mean.size());
  spec.true_cov = shape * shape.transpose();
  spec.mean = std::move(mean);
  spec.shape = std::move(shape);
  spec.kurtosis_K = lognormal_kurtosis();
  spec.kurtosis_is_upper_bound = true;
  return spec;
}

DistributionSpec make_contaminated_gaussian(double rate, double scale, Eigen::VectorXd mean,
                                            Eigen::MatrixXd shape) {
  check_shape(mean, shape);
  if (!(rate >= 0.0) || !(rate <= 1.0)) throw std::invalid_argument("rate must lie in [0,1]");
  DistributionSpec spec;
  spec.kind = DistKind::contaminated_gaussian;
  spec.rate = rate;
  spec.scale = scale;
  spec.d = static_cast<int>(mean.size());
  const double c2 = (1.0 - rate) + rate * scale * scale;
  const double c4 = (1.0 - rate) + rate * scale * scale * scale * scale;
  spec.true_cov = c2 * (shape * shape.transpose());
  spec.mean = std::move(mean);
  spec.shape = std::move(shape);
  spec.kurtosis_K = 3.0 * c4 / (c2 * c2);
  return spec;
}

SampleSet sample(const DistributionSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  Rng rng(seed);
  const int d = spec.d;
  Eigen::MatrixXd z(n, d);

  switch (spec.kind) {
    case DistKind::gaussian:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = rng.normal();
      break;
    case DistKind::student_t:
      for (int i = 0; i < n; ++i) {
        const double w = rng.chi_square(spec.nu);
        const double f = std::sqrt(spec.nu / w);
        for (int j = 0; j < d; ++j) z(i, j) = rng.normal() * f;
      }
      break;
    case DistKind::pareto_product: {
      const double a = spec.alpha;
      const double pm = a / (a - 1.0);
      const double sd = std::sqrt(a / ((a - 1.0) * (a - 1.0) * (a - 2.0)));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) {
          const double p = std::pow(1.0 - rng.uniform01(), -1.0 / a);
          z(i, j) = (p - pm) / sd;
        }
      break;
    }
    case DistKind::lognormal: {
      const double m1 = std::exp(0.5);
      const double sd = std::sqrt(std::exp(2.0) - std::exp(1.0));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = (std::exp(rng.normal()) - m1) / sd;
      break;
    }
    case DistKind::contaminated_gaussian:
      for (int i = 0; i < n; ++i) {
        const bool contaminated = rng.uniform01() < spec.rate;
        const double f = contaminated ? spec.scale : 1.0;
        for (int j = 0; j < d; ++j) z(i, j) = rng.normal() * f;
      }
      break;
  }

  SampleSet out;
  out.data = (z * spec.shape.transpose()).rowwise() + spec.mean.transpose();
  return out;
}

double kurtosis_constant(const DistributionSpec& spec) { return spec.kurtosis_K; }

double empirical_kurtosis_check(const SampleSet& samples, const DistributionSpec& spec,
                                int directions, std::uint64_t seed) {
  if (directions < 1) throw std::invalid_argument("need at least one direction");
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < directions; ++k) {
    const Eigen::VectorXd v = rng.unit_vector(spec.d);
    const Eigen::VectorXd proj = samples.data * v;
    const double mean = proj.mean();
    const double denom_q = v.dot(spec.true_cov * v);
    if (denom_q <= 0.0) continue;  // point mass: 0/0 guarded to 0
    const double m4 = (proj.array() - mean).pow(4).mean();
    worst = std::max(worst, m4 / (denom_q * denom_q));
  }
  return worst;
}

std::string dist_kind_name(DistKind kind) {
  switch (kind) {
    case DistKind::gaussian: return "gaussian";
    case DistKind::student_t: return "student_t";
    case DistKind::pareto_product: return "pareto_product";
    case DistKind::lognormal: return "lognormal";
    case DistKind::contaminated_gaussian: return "contaminated_gaussian";
  }
  return "unknown";
}

}  // namespace robmean
