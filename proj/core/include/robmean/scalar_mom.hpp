#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace robmean {

// Index blocks are half-open ranges [first, second) over 0..n-1.
using IndexBlock = std::pair<int, int>;

struct MomConfig {
  double delta = 0.0;
  int block_count = 0;
  std::vector<IndexBlock> blocks;
};

struct ScalarEstimate {
  double value = 0.0;
  // Deviation radius at level delta; present only when the caller supplied a
  // variance (the radius depends on Var(X), which is unknown in general).
  std::optional<double> bound;
  double delta = 0.0;
};

// Lower median: the smallest value x in xs with #{k: x_k <= x} >= n/2 and
// #{k: x_k >= x} >= n/2. Equals the ceil(n/2)-th order statistic, so it is
// permutation invariant. Throws on empty input.
double median(std::span<const double> xs);

// b = ceil(ln(1/delta)), valid for delta in [e^{1-n/2}, 1) and n >= 4; the
// range guarantees b <= n/2.
int choose_block_count(double delta, int n);

// Contiguous partition of [0, n) into b blocks; the first n mod b blocks get
// ceil(n/b) elements, the rest floor(n/b). Requires 1 <= b <= n/2.
std::vector<IndexBlock> partition_indices(int n, int b);

MomConfig make_mom_config(double delta, int n);

ScalarEstimate median_of_means(std::span<const double> xs, double delta);
ScalarEstimate median_of_means(std::span<const double> xs, double delta, double variance);

// Deviation radius 2e * sqrt(2 Var (1 + ln(1/delta)) / n).
double mom_error_bound(double variance, int n, double delta);

namespace detail {
// Median of contiguous-block means; shared by the scalar, directional and
// quadratic-form estimators.
double mom_of_values(std::span<const double> values, int block_count);
// ceil with a 1e-9 slack so that analytically integer arguments (e.g.
// ln(1/delta) at delta = e^{-5}) are not bumped by float roundoff.
int ceil_with_slack(double x);
}  // namespace detail

}  // namespace robmean
