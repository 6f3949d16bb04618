#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace robmean {

// Finite set of unit directions forming a gamma-cover of S^{d-1}: every unit
// vector is within Euclidean distance gamma of some direction. Cardinality is
// capped at (4/gamma)^d; minimality is not attempted.
struct Cover {
  double gamma = 0.0;
  int dim = 0;
  Eigen::MatrixXd directions;  // count x dim, unit rows
  bool certified = false;
  std::int64_t probe_count = 0;

  int count() const { return static_cast<int>(directions.rows()); }
};

struct CoverBuildOptions {
  // Candidate pool size for the greedy construction (d >= 3); 0 = sized
  // automatically from gamma and d via a spherical-cap coverage estimate.
  std::int64_t pool_size = 0;
  // Greedy stops once no candidate is farther than gamma*(1-margin) from the
  // selected set; the margin absorbs the pool's own resolution.
  double margin = 0.35;
};

// Deterministic given (d, gamma, seed). d=1: {-1,+1}; d=2: angular grid with
// spacing 2*asin(gamma/2); d>=3: greedy farthest-point selection over a
// seeded uniform pool. Throws if gamma is outside (0,1) or if the greedy
// pass would exceed the (4/gamma)^d cardinality cap.
Cover build_cover(int d, double gamma, std::uint64_t seed,
                  const CoverBuildOptions& options = {});

// Probe-based certification: samples `probes` uniform unit vectors and checks
// each lies within gamma of some direction. Updates certified/probe_count.
bool verify_cover(Cover& cover, std::int64_t probes, std::uint64_t seed);

// Index of the closest direction and its Euclidean distance (ties broken by
// smallest index).
std::pair<int, double> nearest_direction(const Cover& cover, const Eigen::VectorXd& u);

double cover_cardinality_cap(int d, double gamma);

// Flat text format: header "d gamma count", then one unit vector per line,
// 17 significant digits (round-trips doubles exactly).
void save_cover(const Cover& cover, std::ostream& out);
Cover load_cover(std::istream& in);
void save_cover_file(const Cover& cover, const std::string& path);
Cover load_cover_file(const std::string& path);

}  // namespace robmean
