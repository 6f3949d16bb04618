#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "robmean/sample_set.hpp"
#include "robmean/spherical.hpp"
#include "robmean/subspace.hpp"

namespace robmean {

struct SubspaceEstimate {
  int stage = 0;  // 0-based; stages.size() marks the residual subspace
  int dim = 0;
  Eigen::VectorXd contribution;  // estimate embedded in ambient coordinates
  double lambda_used = 0.0;      // (4/3) lambda1_hat; 0 for the residual
  double delta_used = 0.0;
  bool feasible = true;
};

struct HybridReport {
  Eigen::VectorXd estimate;  // sum of the per-subspace contributions
  std::vector<SubspaceEstimate> per_subspace;
  SubspaceDecomposition decomposition;
  double trace_aggregate = 0.0;   // sum of lambda1_hat * dhat over stages
  double lambda_hat_max = 0.0;    // max lambda1_hat over stages
  bool all_feasible = true;
};

struct HybridOptions {
  double gamma = -1.0;  // net resolution for the splitter; <= 0: default policy
  std::uint64_t cover_seed = 0;
  FeasibleSearchOptions search;
};

// Two-half estimator: the second half drives the subspace decomposition, the
// first half is estimated per subspace — directional-polytope search with
// lambda = (4/3) lambda1_hat at level delta/(s+1) on each spherical subspace,
// geometric-median-of-means on the residual. Odd-sized inputs drop the last
// sample.
HybridReport estimate_mean_hybrid(const SampleSet& samples, double delta, double kurtosis,
                                  const HybridOptions& options = {});

// C (sqrt(trace/n) + sqrt(lambda_max ln(max(ln d, 1)/delta) / n)); the inner
// log is floored at 1 so d <= e stays defined.
double theorem_bound(double trace, double lambda_max, int n, int d, double delta, double c);

// Sample size needed by the full analysis:
// 2 (400e)^2 K log_{3/2}(d) (d ln 25 + ln(2 log_{3/2} d) + ln(1/delta)).
// Far above any desk-scale n; runs below it are labeled "desk regime".
double samplesize_threshold(int d, double delta, double kurtosis);
bool samplesize_gate(int n, int d, double delta, double kurtosis);

}  // namespace robmean
