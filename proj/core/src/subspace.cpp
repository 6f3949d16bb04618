#include "robmean/subspace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "robmean/covariance.hpp"
#include "robmean/cover_cache.hpp"
#include "robmean/scalar_mom.hpp"

namespace robmean {

bool SubspaceDecomposition::all_success() const {
  for (const auto& st : stages)
    if (!st.success) return false;
  return true;
}

SplitPlan make_split_plan(int n, int d, double delta, double kurtosis, double gamma) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(gamma > 0.0) || !(gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");

  SplitPlan plan;
  plan.dim = d;
  plan.n = n;
  plan.delta = delta;
  plan.kurtosis = kurtosis;
  plan.gamma = gamma;
  plan.s = d == 1 ? 0 : detail::ceil_with_slack(2.0 * std::log(d) / std::log(1.5));
  if (plan.s == 0) {
    plan.m = n;
    return plan;
  }
  if (n < 8 * plan.s) throw std::invalid_argument("sample too small for the split plan");
  plan.m = n / plan.s;
  const int extra = n % plan.s;
  int pos = 0;
  for (int i = 0; i < plan.s; ++i) {
    const int len = plan.m + (i < extra ? 1 : 0);
    plan.blocks.emplace_back(pos, pos + len);
    pos += len;
  }
  return plan;
}

SubspaceDecomposition split_subspaces(const SampleSet& samples, const SplitPlan& plan,
                                      std::uint64_t cover_seed) {
  if (samples.dim() != plan.dim || samples.size() < plan.n)
    throw std::invalid_argument("plan does not match the samples");
  const int d = plan.dim;

  SubspaceDecomposition dec;
  dec.dim = d;
  dec.residual_basis = Eigen::MatrixXd::Identity(d, d);
  if (plan.s == 0) return dec;  // d = 1: single residual subspace

  Eigen::MatrixXd complement = Eigen::MatrixXd::Identity(d, d);
  bool aborted = false;
  for (int i = 0; i < plan.s; ++i) {
    SubspaceStage stage;
    stage.basis = Eigen::MatrixXd::Zero(d, 0);
    if (aborted) {
      dec.stages.push_back(std::move(stage));
      continue;
    }
    const int d_rem = static_cast<int>(complement.cols());
    if (d_rem == 0) {  // space exhausted: remaining stages are empty
      stage.success = true;
      dec.stages.push_back(std::move(stage));
      continue;
    }

    const auto& blk = plan.blocks[i];
    SampleSet local(samples.data.middleRows(blk.first, blk.second - blk.first) * complement);
    const double delta_eff =
        plan.delta / (plan.s * std::pow(4.0 / plan.gamma, d_rem));
    bool ok = true;
    try {
      const Cover& cover = shared_cover(d_rem, plan.gamma, cover_seed);
      const QuadFormEstimates est = estimate_quad_forms(local, cover, delta_eff);
      const int m_even = local.size() - (local.size() % 2);
      const double eps = epsilon_m(plan.kurtosis, m_even, d_rem, plan.s, plan.delta, plan.gamma);
      const CovFit fit = fit_covariance(est, eps);
      if (!fit.member) {
        ok = false;
      } else {
        const auto [eigenvalues, eigenvectors] = spectral_decompose(fit);
        const auto [dhat, local_basis] = select_top_subspace(eigenvalues, eigenvectors);
        stage.dim_hat = dhat;
        stage.lambda1_hat = eigenvalues[0];
        stage.basis = complement * local_basis;
        stage.success = true;
        complement = (complement * eigenvectors.rightCols(d_rem - dhat)).eval();
      }
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) {
      stage.success = false;
      stage.basis = Eigen::MatrixXd::Zero(d, 0);
      stage.dim_hat = 0;
      aborted = true;  // dump what is left into the residual subspace
    }
    dec.stages.push_back(std::move(stage));
  }
  dec.residual_basis = complement;
  return dec;
}

void save_decomposition(const SubspaceDecomposition& dec, std::ostream& out) {
  char buf[64];
  out << dec.dim << ' ' << dec.stages.size() << ' ' << dec.residual_dim() << '\n';
  auto write_vec = [&](const Eigen::VectorXd& v) {
    for (int j = 0; j < v.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", v[j]);
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  };
  for (const auto& st : dec.stages) {
    std::snprintf(buf, sizeof(buf), "%.17g", st.lambda1_hat);
    out << st.dim_hat << ' ' << buf << ' ' << (st.success ? 1 : 0) << '\n';
    for (int c = 0; c < st.basis.cols(); ++c) write_vec(st.basis.col(c));
  }
  for (int c = 0; c < dec.residual_basis.cols(); ++c) write_vec(dec.residual_basis.col(c));
}

SubspaceDecomposition load_decomposition(std::istream& in) {
  SubspaceDecomposition dec;
  std::size_t stage_count = 0;
  int residual = 0;
  if (!(in >> dec.dim >> stage_count >> residual))
    throw std::runtime_error("malformed decomposition header");
  auto read_vec = [&](Eigen::Ref<Eigen::VectorXd> v) {
    for (int j = 0; j < v.size(); ++j)
      if (!(in >> v[j])) throw std::runtime_error("truncated decomposition data");
  };
  for (std::size_t i = 0; i < stage_count; ++i) {
    SubspaceStage st;
    int success = 0;
    if (!(in >> st.dim_hat >> st.lambda1_hat >> success))
      throw std::runtime_error("truncated decomposition data");
    st.success = success != 0;
    st.basis.resize(dec.dim, st.dim_hat);
    for (int c = 0; c < st.dim_hat; ++c) {
      Eigen::VectorXd col(dec.dim);
      read_vec(col);
      st.basis.col(c) = col;
    }
    dec.stages.push_back(std::move(st));
  }
  dec.residual_basis.resize(dec.dim, residual);
  for (int c = 0; c < residual; ++c) {
    Eigen::VectorXd col(dec.dim);
    read_vec(col);
    dec.residual_basis.col(c) = col;
  }
  return dec;
}

void save_decomposition_file(const SubspaceDecomposition& dec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_decomposition(dec, out);
}

SubspaceDecomposition load_decomposition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return load_decomposition(in);
}

}  // namespace robmean
