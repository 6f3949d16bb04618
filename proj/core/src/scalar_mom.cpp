#include "robmean/scalar_mom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robmean {

namespace detail {

int ceil_with_slack(double x) {
  return static_cast<int>(std::ceil(x - 1e-9));
}

double mom_of_values(std::span<const double> values, int block_count) {
  const int n = static_cast<int>(values.size());
  const auto blocks = partition_indices(n, block_count);
  std::vector<double> means(block_count);
  for (int i = 0; i < block_count; ++i) {
    double s = 0.0;
    for (int k = blocks[i].first; k < blocks[i].second; ++k) s += values[k];
    means[i] = s / (blocks[i].second - blocks[i].first);
  }
  return median(means);
}

}  // namespace detail

double median(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("empty sample");
  std::vector<double> tmp(xs.begin(), xs.end());
  const int n = static_cast<int>(tmp.size());
  const int k = (n + 1) / 2 - 1;  // lower median, 0-based
  std::nth_element(tmp.begin(), tmp.begin() + k, tmp.end());
  return tmp[k];
}

int choose_block_count(double delta, int n) {
  if (n < 4) throw std::invalid_argument("sample too small (need n >= 4)");
  const double lo = std::exp(1.0 - 0.5 * static_cast<double>(n));
  if (!(delta >= lo) || !(delta < 1.0))
    throw std::invalid_argument("delta out of admissible range");
  const int b = std::max(1, detail::ceil_with_slack(-std::log(delta)));
  return b;
}

std::vector<IndexBlock> partition_indices(int n, int b) {
  if (b < 1 || 2 * b > n) throw std::invalid_argument("block count must satisfy 1 <= b <= n/2");
  const int base = n / b;
  const int extra = n % b;
  std::vector<IndexBlock> blocks;
  blocks.reserve(b);
  int pos = 0;
  for (int i = 0; i < b; ++i) {
    const int len = base + (i < extra ? 1 : 0);
    blocks.emplace_back(pos, pos + len);
    pos += len;
  }
  return blocks;
}

MomConfig make_mom_config(double delta, int n) {
  MomConfig cfg;
  cfg.delta = delta;
  cfg.block_count = choose_block_count(delta, n);
  cfg.blocks = partition_indices(n, cfg.block_count);
  return cfg;
}

ScalarEstimate median_of_means(std::span<const double> xs, double delta) {
  const int n = static_cast<int>(xs.size());
  const int b = choose_block_count(delta, n);
  ScalarEstimate est;
  est.value = detail::mom_of_values(xs, b);
  est.delta = delta;
  return est;
}

ScalarEstimate median_of_means(std::span<const double> xs, double delta, double variance) {
  ScalarEstimate est = median_of_means(xs, delta);
  est.bound = mom_error_bound(variance, static_cast<int>(xs.size()), delta);
  return est;
}

double mom_error_bound(double variance, int n, double delta) {
  if (variance < 0.0) throw std::invalid_argument("variance must be nonnegative");
  choose_block_count(delta, n);  // validates n and delta
  constexpr double kE = 2.718281828459045235360287471352662498;
  return 2.0 * kE * std::sqrt(2.0 * variance * (1.0 + std::log(1.0 / delta)) / n);
}

}  // namespace robmean
