#include "stelnet/constrained_mle.hpp"

#include "stelnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace stelnet {

double gaussian_objective(const Matrix& psi, const Matrix& s) {
  return log_determinant(psi) - (s.cwiseProduct(psi)).sum();
}

double stationarity_residual(const Matrix& psi, const Matrix& s, const EdgeSet& edges) {
  Eigen::LLT<Matrix> llt(psi);
  if (llt.info() != Eigen::Success) throw DomainError("stationarity_residual: psi is not positive definite");
  const Matrix w = llt.solve(Matrix::Identity(psi.rows(), psi.cols()));
  double worst = (w.diagonal() - s.diagonal()).cwiseAbs().maxCoeff();
  for (const auto& e : edges.edges()) worst = std::max(worst, std::abs(w(e.first, e.second) - s(e.first, e.second)));
  return worst;
}

namespace {

std::string describe(const EdgeSet& edges) {
  return "p=" + std::to_string(edges.nodes()) + ", |E|=" + std::to_string(edges.size());
}

// One node's neighbor regression: beta on the neighbor indices such that
// W[ne,ne] beta = S[ne,j].
Vector neighbor_coefficients(const Matrix& w, const Matrix& s, Eigen::Index j, const std::vector<int>& ne,
                             const EdgeSet& edges) {
  const auto q = static_cast<Eigen::Index>(ne.size());
  Matrix block(q, q);
  Vector rhs(q);
  for (Eigen::Index a = 0; a < q; ++a) {
    rhs(a) = s(ne[a], j);
    for (Eigen::Index b = 0; b < q; ++b) block(a, b) = w(ne[a], ne[b]);
  }
  Eigen::LLT<Matrix> llt(block);
  if (llt.info() != Eigen::Success) {
    throw EstimationError("constrained MLE: neighbor covariance of node " + std::to_string(j) +
                          " is not positive definite; no PD fit for this edge set (" + describe(edges) + ")");
  }
  return llt.solve(rhs);
}

}  // namespace

ConstrainedMLEResult fit_constrained_mle(const Matrix& s_in, const EdgeSet& edges,
                                         const ConstrainedMLEOptions& options) {
  require_symmetric(s_in, "fit_constrained_mle");
  const Matrix s = 0.5 * (s_in + s_in.transpose());
  const Eigen::Index p = s.rows();
  if (static_cast<std::size_t>(p) != edges.nodes()) {
    throw ShapeError("fit_constrained_mle: S is " + std::to_string(p) + "x" + std::to_string(p) +
                     " but edge set has " + std::to_string(edges.nodes()) + " nodes");
  }
  if (!s.allFinite()) throw DomainError("fit_constrained_mle: S has non-finite entries");
  for (Eigen::Index j = 0; j < p; ++j)
    if (!(s(j, j) > 0.0)) throw DomainError("fit_constrained_mle: S diagonal entry " + std::to_string(j) + " is not positive");

  std::vector<std::vector<int>> ne(static_cast<std::size_t>(p));
  for (const auto& e : edges.edges()) {
    ne[e.first].push_back(e.second);
    ne[e.second].push_back(e.first);
  }
  for (auto& v : ne) std::sort(v.begin(), v.end());

  const double mean_abs_s = s.cwiseAbs().mean();
  const double off_count = p > 1 ? static_cast<double>(p * (p - 1)) : 1.0;

  Matrix w = s;
  int sweep = 0;
  bool converged = false;
  for (sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    const Matrix w_old = w;
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto& nj = ne[static_cast<std::size_t>(j)];
      Vector w12 = Vector::Zero(p);
      if (!nj.empty()) {
        const Vector beta = neighbor_coefficients(w, s, j, nj, edges);
        for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(nj.size()); ++a) w12 += beta(a) * w.col(nj[a]);
      }
      for (Eigen::Index k = 0; k < p; ++k) {
        if (k == j) continue;
        w(k, j) = w12(k);
        w(j, k) = w12(k);
      }
    }
    if (!w.allFinite()) throw EstimationError("constrained MLE diverged at sweep " + std::to_string(sweep) + " (" + describe(edges) + ")");
    const double change = (w - w_old).cwiseAbs().sum() / off_count;
    if (options.on_sweep) {
      Eigen::LLT<Matrix> llt(w);
      if (llt.info() == Eigen::Success) {
        const Matrix psi = llt.solve(Matrix::Identity(p, p));
        options.on_sweep(sweep, log_determinant(psi) - s.cwiseProduct(psi).sum());
      }
    }
    if (change < options.tolerance * mean_abs_s) {
      converged = true;
      break;
    }
  }
  if (sweep > options.max_sweeps) sweep = options.max_sweeps;

  // Recover psi column by column from the converged regressions.
  Matrix psi = Matrix::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto& nj = ne[static_cast<std::size_t>(j)];
    double explained = 0.0;
    Vector beta;
    if (!nj.empty()) {
      beta = neighbor_coefficients(w, s, j, nj, edges);
      for (Eigen::Index a = 0; a < beta.size(); ++a) explained += beta(a) * w(j, nj[a]);
    }
    const double resid = s(j, j) - explained;
    if (!(resid > 1e-12 * s(j, j))) {
      throw EstimationError("constrained MLE: residual variance of node " + std::to_string(j) +
                            " is not positive; no PD fit for this edge set (" + describe(edges) + ")");
    }
    const double theta_jj = 1.0 / resid;
    psi(j, j) = theta_jj;
    for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(nj.size()); ++a) psi(nj[a], j) = -beta(a) * theta_jj;
  }
  psi = (0.5 * (psi + psi.transpose())).eval();
  if (!is_positive_definite(psi)) {
    throw EstimationError("constrained MLE: recovered precision is not positive definite (" + describe(edges) + ")");
  }

  ConstrainedMLEResult result{PrecisionMatrix(psi), Matrix(), sweep, converged, 0.0};
  Eigen::LLT<Matrix> llt(result.psi.matrix());
  result.covariance = llt.solve(Matrix::Identity(p, p));
  result.covariance = (0.5 * (result.covariance + result.covariance.transpose())).eval();
  double worst = (result.covariance.diagonal() - s.diagonal()).cwiseAbs().maxCoeff();
  for (const auto& e : edges.edges())
    worst = std::max(worst, std::abs(result.covariance(e.first, e.second) - s(e.first, e.second)));
  result.max_kkt_residual = worst;
  return result;
}

}  // namespace stelnet
