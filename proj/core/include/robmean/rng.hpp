#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace robmean {

// Deterministic splittable generator (SplitMix64 core). All samplers in this
// library draw from Rng instead of <random> distributions so that results are
// bit-identical across platforms and standard-library versions. Substreams
// derived via child() are statistically independent, which lets parallel
// trials share one master seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent substream `stream` of the generator seeded with `seed`.
  static Rng child(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01();

  // Standard normal via the polar method (second variate cached).
  double normal();

  // Gamma(shape, 1), shape > 0, Marsaglia-Tsang.
  double gamma(double shape);

  double chi_square(double dof) { return 2.0 * gamma(dof / 2.0); }

  Eigen::VectorXd normal_vector(int d);

  // Uniform on the unit sphere S^{d-1}.
  Eigen::VectorXd unit_vector(int d);

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace robmean
