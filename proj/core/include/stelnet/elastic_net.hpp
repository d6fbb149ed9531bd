#pragma once

// Coordinate-descent solver for the single-response elastic net
//
//   min_{a,b} (1/2n) ||y - a - X b||^2 + lambda * (alpha ||b||_1 + (1-alpha)/2 ||b||^2)
//
// The intercept is never penalized. Predictors are NOT standardized: callers
// that want standardized columns must scale them first. Inside the EM loop
// rows are already rescaled by sqrt(tau), and standardizing here would change
// the estimator.

#include "stelnet/model_core.hpp"

#include <vector>

namespace stelnet {

struct PenaltyConfig {
  double alpha = 0.5;   ///< l1 weight in [0, 1]; alpha = 1 is the lasso.
  double lambda = 0.0;  ///< overall strength, >= 0.

  /// Throws ConfigError if alpha is outside [0, 1] or lambda is negative.
  void validate() const;
};

struct SolverOptions {
  double tolerance = 1e-7;      ///< max absolute coefficient change per sweep
  double kkt_tolerance = 1e-9;  ///< max subgradient residual required to stop
  int max_sweeps = 10000;
  bool record_objective = false;  ///< fill ElasticNetFit::objective_trace
};

struct ElasticNetFit {
  Vector coefficients;
  double intercept = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double kkt_residual = 0.0;
  /// Objective after each sweep (only when SolverOptions::record_objective).
  std::vector<double> objective_trace;
};

/// Fits the elastic net on an explicit design. Throws DataError on
/// non-finite input or n < 2, ShapeError on mismatched row counts.
/// Hitting the sweep cap returns the current iterate with converged = false.
ElasticNetFit solve(const Matrix& design, const Vector& response, const PenaltyConfig& penalty,
                    const SolverOptions& options = {});

/// Covariance-form solve: `gram` = Xc'Xc/n and `xy` = Xc'yc/n for centered
/// design Xc and centered response yc; `yy` = yc'yc/n is only used to report
/// the objective. Returns coefficients only (intercept left at 0).
ElasticNetFit solve_gram(const Matrix& gram, const Vector& xy, double yy, const PenaltyConfig& penalty,
                         const SolverOptions& options = {});

/// Smallest lambda at which every coefficient is zero:
/// max_j |x_j'(y - ybar)| / (n alpha). Throws DomainError for alpha = 0.
double lambda_max(const Matrix& design, const Vector& response, double alpha);

/// Total penalty lambda * (alpha ||b||_1 + (1-alpha)/2 ||b||_2^2).
double penalty_value(const Vector& b, const PenaltyConfig& penalty);

/// Soft-thresholding operator sign(z) * max(|z| - t, 0).
inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

}  // namespace stelnet
