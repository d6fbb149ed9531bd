#pragma once

// Stage two: Gaussian maximum likelihood of a precision matrix whose
// off-diagonal zeros are fixed outside a given edge set,
//
//   max_Psi  log det Psi - trace(S Psi)   s.t. psi_jk = 0 for (j,k) not in E.
//
// Solved with the covariance-graph regression algorithm: cycle over nodes,
// regress each on its neighbors only using the current covariance estimate W,
// and update the corresponding row/column of W.

#include "stelnet/model_core.hpp"

#include <functional>
#include <optional>

namespace stelnet {

struct ConstrainedMLEOptions {
  double tolerance = 1e-8;  ///< on mean |dW| off-diagonal, relative to mean |S|
  int max_sweeps = 500;
  /// Called with the log-likelihood of the implied precision after each
  /// sweep; for monotonicity checks. Costs one inversion per sweep.
  std::function<void(int sweep, double loglik)> on_sweep;
};

struct ConstrainedMLEResult {
  PrecisionMatrix psi;
  Matrix covariance;  ///< W = psi^-1
  int iterations = 0;
  bool converged = false;
  /// max |(psi^-1)_jk - s_jk| over edges and diagonal.
  double max_kkt_residual = 0.0;
};

/// Throws EstimationError when no positive-definite fit exists for this
/// edge structure (e.g. n < p with too many edges) or the iteration breaks
/// down; DomainError/ShapeError for invalid S.
ConstrainedMLEResult fit_constrained_mle(const Matrix& s, const EdgeSet& edges,
                                         const ConstrainedMLEOptions& options = {});

/// log det Psi - trace(S Psi). Throws DomainError if psi is not PD.
double gaussian_objective(const Matrix& psi, const Matrix& s);

/// max |(psi^-1)_jk - s_jk| over edges and diagonal entries.
double stationarity_residual(const Matrix& psi, const Matrix& s, const EdgeSet& edges);

}  // namespace stelnet
