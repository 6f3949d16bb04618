#include "robmean/hybrid.hpp"

#include <cmath>
#include <stdexcept>

#include "robmean/cover_cache.hpp"
#include "robmean/geometric_median.hpp"

namespace robmean {

HybridReport estimate_mean_hybrid(const SampleSet& samples, double delta, double kurtosis,
                                  const HybridOptions& options) {
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (kurtosis < 1.0) throw std::invalid_argument("kurtosis constant must be >= 1");
  const int total = samples.size() - (samples.size() % 2);
  if (total < 16) throw std::invalid_argument("sample too small");
  const int n = total / 2;
  const int d = samples.dim();
  const double gamma = options.gamma > 0.0 ? options.gamma : default_net_gamma(d);

  const SampleSet first(samples.data.topRows(n));
  const SampleSet second(samples.data.middleRows(n, n));

  const SplitPlan plan = make_split_plan(n, d, delta, kurtosis, gamma);
  HybridReport report;
  report.decomposition = split_subspaces(second, plan, options.cover_seed);
  const double delta_i = delta / (plan.s + 1);

  report.estimate = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < report.decomposition.stages.size(); ++i) {
    const SubspaceStage& st = report.decomposition.stages[i];
    if (st.dim_hat == 0) continue;  // empty or failed stages contribute zero
    SampleSet projected(first.data * st.basis);
    SphericalOptions sopt;
    sopt.cover_seed = options.cover_seed;
    sopt.search = options.search;
    const double lambda = (4.0 / 3.0) * st.lambda1_hat;
    const SphericalEstimate est = estimate_spherical(projected, lambda, delta_i, sopt);

    SubspaceEstimate entry;
    entry.stage = static_cast<int>(i);
    entry.dim = st.dim_hat;
    entry.contribution = st.basis * est.value;
    entry.lambda_used = lambda;
    entry.delta_used = delta_i;
    entry.feasible = est.feasible;
    report.all_feasible = report.all_feasible && est.feasible;
    report.estimate += entry.contribution;
    report.per_subspace.push_back(std::move(entry));

    if (st.success) {
      report.trace_aggregate += st.lambda1_hat * st.dim_hat;
      report.lambda_hat_max = std::max(report.lambda_hat_max, st.lambda1_hat);
    }
  }

  const int r = report.decomposition.residual_dim();
  if (r > 0) {
    SampleSet projected(first.data * report.decomposition.residual_basis);
    SubspaceEstimate entry;
    entry.stage = static_cast<int>(report.decomposition.stages.size());
    entry.dim = r;
    entry.contribution =
        report.decomposition.residual_basis * minsker_estimator(projected, delta_i);
    entry.delta_used = delta_i;
    report.estimate += entry.contribution;
    report.per_subspace.push_back(std::move(entry));
  }
  return report;
}

double theorem_bound(double trace, double lambda_max, int n, int d, double delta, double c) {
  if (trace < 0.0 || lambda_max < 0.0 || n < 1 || d < 1)
    throw std::invalid_argument("bad bound arguments");
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  const double log_d = std::max(std::log(static_cast<double>(d)), 1.0);
  return c * (std::sqrt(trace / n) +
              std::sqrt(lambda_max * std::log(log_d / delta) / n));
}

double samplesize_threshold(int d, double delta, double kurtosis) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (kurtosis <= 0.0) throw std::invalid_argument("kurtosis constant must be positive");
  if (d == 1) return 0.0;  // the log_{3/2} d factor vanishes
  constexpr double kE = 2.718281828459045235360287471352662498;
  const double log15_d = std::log(static_cast<double>(d)) / std::log(1.5);
  const double inner = d * std::log(25.0) + std::log(2.0 * log15_d) + std::log(1.0 / delta);
  return 2.0 * (400.0 * kE) * (400.0 * kE) * kurtosis * log15_d * inner;
}

bool samplesize_gate(int n, int d, double delta, double kurtosis) {
  return static_cast<double>(n) >= samplesize_threshold(d, delta, kurtosis);
}

}  // namespace robmean
