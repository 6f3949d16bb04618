#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "robmean/sample_set.hpp"

namespace robmean {

struct SplitPlan {
  int s = 0;  // ceil(log_{3/2} d^2); 0 when d = 1 (no splitting)
  int m = 0;  // floor(n / s)
  std::vector<std::pair<int, int>> blocks;  // contiguous, each of size >= m
  double gamma = 0.0;
  double delta = 0.0;
  double kurtosis = 0.0;
  int n = 0;
  int dim = 0;
};

struct SubspaceStage {
  Eigen::MatrixXd basis;   // ambient d x dhat, orthonormal columns
  int dim_hat = 0;
  double lambda1_hat = 0.0;
  bool success = false;
};

// Orthogonal decomposition R^d = V_1 + ... + V_s + residual. Stage bases are
// mutually orthogonal and, together with the residual basis, complete to an
// orthonormal basis of R^d.
struct SubspaceDecomposition {
  std::vector<SubspaceStage> stages;
  Eigen::MatrixXd residual_basis;  // d x residual_dim
  int dim = 0;

  int residual_dim() const { return static_cast<int>(residual_basis.cols()); }
  bool all_success() const;
};

// Requires n >= 8 s so every block supports quadratic-form estimation.
SplitPlan make_split_plan(int n, int d, double delta, double kurtosis, double gamma);

// One covariance fit + spectral split per block: stage i runs inside the
// orthogonal complement of the subspaces found so far, with per-direction
// confidence delta / (s (4/gamma)^{d_rem}). A failed fit (exception or slab
// infeasibility) flags the stage and sweeps all remaining dimensions into the
// residual subspace; the residual needs no sphericity downstream.
SubspaceDecomposition split_subspaces(const SampleSet& samples, const SplitPlan& plan,
                                      std::uint64_t cover_seed = 0);

// Same flat text format as covers: header, then per-stage metadata and basis
// vectors, 17 significant digits.
void save_decomposition(const SubspaceDecomposition& dec, std::ostream& out);
SubspaceDecomposition load_decomposition(std::istream& in);
void save_decomposition_file(const SubspaceDecomposition& dec, const std::string& path);
SubspaceDecomposition load_decomposition_file(const std::string& path);

}  // namespace robmean
