#include "robmean/sphere_cover.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "robmean/rng.hpp"
#include "robmean/scalar_mom.hpp"

namespace robmean {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Fraction of S^{d-1} covered by a cap of chord radius rho (Simpson rule on
// the sin^{d-2} surface density). Used only to size the candidate pool.
double cap_fraction(int d, double rho) {
  if (d == 2) return std::asin(std::min(1.0, rho / 2.0)) / kPi;
  const double psi = 2.0 * std::asin(std::min(1.0, rho / 2.0));
  auto integral = [&](double hi) {
    const int steps = 2000;
    const double h = hi / steps;
    double s = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      s += w * std::pow(std::sin(i * h), d - 2);
    }
    return s * h / 3.0;
  };
  return integral(psi) / integral(kPi);
}

std::int64_t auto_pool_size(int d, double gamma, double margin) {
  // Target pool resolution: 80% of the slack left by the greedy margin.
  const double rho = 0.8 * margin * gamma;
  const double frac = std::max(cap_fraction(d, rho), 1e-12);
  double m = 1e6;
  for (int it = 0; it < 3; ++it) m = (std::log(m) + 12.0) / frac;
  return std::clamp<std::int64_t>(static_cast<std::int64_t>(m), 20000, 2000000);
}

Eigen::MatrixXd uniform_pool(int d, std::int64_t count, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd pool(count, d);
  for (std::int64_t i = 0; i < count; ++i) {
    Eigen::VectorXd v = rng.unit_vector(d);
    pool.row(i) = v.transpose();
  }
  return pool;
}

}  // namespace

double cover_cardinality_cap(int d, double gamma) {
  return std::pow(4.0 / gamma, d);
}

Cover build_cover(int d, double gamma, std::uint64_t seed, const CoverBuildOptions& options) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(gamma > 0.0) || !(gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");

  Cover cover;
  cover.gamma = gamma;
  cover.dim = d;

  if (d == 1) {
    cover.directions.resize(2, 1);
    cover.directions(0, 0) = -1.0;
    cover.directions(1, 0) = 1.0;
    return cover;
  }

  if (d == 2) {
    const double spacing = 2.0 * std::asin(gamma / 2.0);
    const int count = std::max(3, detail::ceil_with_slack(2.0 * kPi / spacing));
    cover.directions.resize(count, 2);
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * kPi * k / count;
      cover.directions(k, 0) = std::cos(a);
      cover.directions(k, 1) = std::sin(a);
    }
    return cover;
  }

  const std::int64_t pool_n =
      options.pool_size > 0 ? options.pool_size : auto_pool_size(d, gamma, options.margin);
  const Eigen::MatrixXd pool = uniform_pool(d, pool_n, seed);
  const double gamma_eff = gamma * (1.0 - options.margin);
  const double cap = cover_cardinality_cap(d, gamma);

  std::vector<int> selected;
  selected.push_back(0);
  // Squared distance to the nearest selected direction, maintained
  // incrementally; dist^2 = 2 - 2 <u, w> for unit vectors.
  Eigen::ArrayXd min_sq =
      (2.0 - 2.0 * (pool * pool.row(0).transpose()).array()).max(0.0);
  const double thresh_sq = gamma_eff * gamma_eff;
  for (;;) {
    Eigen::Index arg = 0;
    const double worst = min_sq.maxCoeff(&arg);
    if (worst <= thresh_sq) break;
    if (static_cast<double>(selected.size()) + 1.0 > cap)
      throw std::runtime_error("cover construction failed; increase pool");
    selected.push_back(static_cast<int>(arg));
    Eigen::ArrayXd sq = (2.0 - 2.0 * (pool * pool.row(arg).transpose()).array()).max(0.0);
    min_sq = min_sq.min(sq);
  }

  cover.directions.resize(static_cast<Eigen::Index>(selected.size()), d);
  for (std::size_t i = 0; i < selected.size(); ++i)
    cover.directions.row(static_cast<Eigen::Index>(i)) = pool.row(selected[i]);
  return cover;
}

bool verify_cover(Cover& cover, std::int64_t probes, std::uint64_t seed) {
  if (probes < 1) throw std::invalid_argument("probe count must be >= 1");
  Rng rng(seed);
  // Within gamma iff max dot >= 1 - gamma^2/2.
  const double dot_needed = 1.0 - cover.gamma * cover.gamma / 2.0;
  bool ok = true;
  constexpr std::int64_t kBlock = 4096;
  Eigen::MatrixXd buf(kBlock, cover.dim);
  std::int64_t done = 0;
  while (done < probes && ok) {
    const std::int64_t take = std::min(kBlock, probes - done);
    for (std::int64_t i = 0; i < take; ++i)
      buf.row(i) = rng.unit_vector(cover.dim).transpose();
    const Eigen::MatrixXd dots = buf.topRows(take) * cover.directions.transpose();
    for (std::int64_t i = 0; i < take && ok; ++i)
      ok = dots.row(i).maxCoeff() >= dot_needed;
    done += take;
  }
  cover.certified = ok;
  cover.probe_count = probes;
  return ok;
}

std::pair<int, double> nearest_direction(const Cover& cover, const Eigen::VectorXd& u) {
  Eigen::Index arg = 0;
  (cover.directions * u).maxCoeff(&arg);
  // recompute the winning chord by subtraction: exact at distance zero, where
  // sqrt(2 - 2 dot) loses half the significant digits
  const double dist = (cover.directions.row(arg).transpose() - u).norm();
  return {static_cast<int>(arg), dist};
}

void save_cover(const Cover& cover, std::ostream& out) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", cover.gamma);
  out << cover.dim << ' ' << buf << ' ' << cover.count() << '\n';
  for (int i = 0; i < cover.count(); ++i) {
    for (int j = 0; j < cover.dim; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", cover.directions(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

Cover load_cover(std::istream& in) {
  Cover cover;
  int count = 0;
  if (!(in >> cover.dim >> cover.gamma >> count))
    throw std::runtime_error("malformed cover header");
  cover.directions.resize(count, cover.dim);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < cover.dim; ++j)
      if (!(in >> cover.directions(i, j))) throw std::runtime_error("truncated cover data");
  for (int i = 0; i < count; ++i) {
    const double n = cover.directions.row(i).norm();
    if (std::abs(n - 1.0) > 1e-12) throw std::runtime_error("cover direction not unit norm");
  }
  return cover;
}

void save_cover_file(const Cover& cover, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_cover(cover, out);
}

Cover load_cover_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return load_cover(in);
}

}  // namespace robmean
