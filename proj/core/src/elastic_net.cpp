#include "stelnet/elastic_net.hpp"

#include "stelnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stelnet {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw DataError(std::string("elastic_net: non-finite values in ") + what);
}

// Gram-form objective: 0.5 yy - b'xy + 0.5 b'Gb + penalty.
double gram_objective(const Matrix& gram, const Vector& xy, double yy, const Vector& b,
                      const PenaltyConfig& pen) {
  return 0.5 * yy - b.dot(xy) + 0.5 * b.dot(gram * b) + penalty_value(b, pen);
}

double kkt_residual(const Matrix& gram, const Vector& xy, const Vector& b, const PenaltyConfig& pen) {
  const double l1 = pen.lambda * pen.alpha;
  const double l2 = pen.lambda * (1.0 - pen.alpha);
  const Vector grad = xy - gram * b;  // negative gradient of the smooth loss
  double worst = 0.0;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    double r;
    if (b(j) != 0.0) {
      r = std::abs(grad(j) - l2 * b(j) - l1 * (b(j) > 0 ? 1.0 : -1.0));
    } else {
      r = std::max(0.0, std::abs(grad(j)) - l1);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace

void PenaltyConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("penalty: alpha must lie in [0, 1]");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("penalty: lambda must be finite and >= 0");
}

double penalty_value(const Vector& b, const PenaltyConfig& pen) {
  return pen.lambda * (pen.alpha * b.lpNorm<1>() + 0.5 * (1.0 - pen.alpha) * b.squaredNorm());
}

ElasticNetFit solve_gram(const Matrix& gram, const Vector& xy, double yy, const PenaltyConfig& penalty,
                         const SolverOptions& options) {
  penalty.validate();
  const Eigen::Index m = gram.rows();
  if (gram.cols() != m || xy.size() != m) throw ShapeError("solve_gram: gram/xy dimensions disagree");

  const double l1 = penalty.lambda * penalty.alpha;
  const double l2 = penalty.lambda * (1.0 - penalty.alpha);

  ElasticNetFit fit;
  fit.coefficients = Vector::Zero(m);
  Vector& b = fit.coefficients;
  // Running gradient term xy - G b, updated per coordinate.
  Vector grad = xy;

  // At or above lambda_max the zero vector satisfies the KKT conditions; the
  // comparison mirrors lambda_max() so the boundary itself returns exact zeros.
  if (m > 0 && penalty.alpha > 0.0 && xy.cwiseAbs().maxCoeff() / penalty.alpha <= penalty.lambda) {
    fit.converged = true;
    fit.kkt_residual = kkt_residual(gram, xy, b, penalty);
    fit.objective = gram_objective(gram, xy, yy, b, penalty);
    return fit;
  }

  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double gjj = gram(j, j);
      const double old = b(j);
      const double z = grad(j) + gjj * old;
      const double denom = gjj + l2;
      const double updated = denom > 0.0 ? soft_threshold(z, l1) / denom : 0.0;
      if (updated != old) {
        const double delta = updated - old;
        grad.noalias() -= delta * gram.col(j);
        b(j) = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    fit.iterations = sweep;
    if (options.record_objective) fit.objective_trace.push_back(gram_objective(gram, xy, yy, b, penalty));
    if (max_change < options.tolerance) {
      // Refresh the gradient to shed accumulated rounding before the KKT check.
      grad = xy - gram * b;
      fit.kkt_residual = kkt_residual(gram, xy, b, penalty);
      if (fit.kkt_residual <= options.kkt_tolerance) {
        fit.converged = true;
        break;
      }
    }
  }
  if (!fit.converged) fit.kkt_residual = kkt_residual(gram, xy, b, penalty);
  fit.objective = gram_objective(gram, xy, yy, b, penalty);
  return fit;
}

ElasticNetFit solve(const Matrix& design, const Vector& response, const PenaltyConfig& penalty,
                    const SolverOptions& options) {
  penalty.validate();
  if (design.rows() != response.size()) {
    throw ShapeError("elastic_net::solve: design has " + std::to_string(design.rows()) + " rows, response has " +
                     std::to_string(response.size()));
  }
  const Eigen::Index n = design.rows();
  if (n < 2) throw DataError("elastic_net::solve: need at least 2 observations");
  require_finite(design, "design");
  require_finite(response, "response");

  const Eigen::RowVectorXd xbar = design.colwise().mean();
  const double ybar = response.mean();
  const Matrix xc = design.rowwise() - xbar;
  const Vector yc = response.array() - ybar;
  const double inv_n = 1.0 / static_cast<double>(n);

  const Matrix gram = inv_n * (xc.transpose() * xc);
  const Vector xy = inv_n * (xc.transpose() * yc);
  const double yy = inv_n * yc.squaredNorm();

  ElasticNetFit fit = solve_gram(gram, xy, yy, penalty, options);
  fit.intercept = ybar - xbar.dot(fit.coefficients);
  const Vector resid = (response - design * fit.coefficients).array() - fit.intercept;
  fit.objective = 0.5 * inv_n * resid.squaredNorm() + penalty_value(fit.coefficients, penalty);
  return fit;
}

double lambda_max(const Matrix& design, const Vector& response, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("lambda_max: alpha must be positive (ridge never zeroes coefficients)");
  if (design.rows() != response.size()) throw ShapeError("lambda_max: row counts differ");
  if (design.cols() == 0) return 0.0;
  // Same centering and scaling as solve(), so solve(lambda_max) hits the exact-zero path.
  const Matrix xc = design.rowwise() - design.colwise().mean();
  const Vector yc = response.array() - response.mean();
  const Vector xy = (1.0 / static_cast<double>(design.rows())) * (xc.transpose() * yc);
  return xy.cwiseAbs().maxCoeff() / alpha;
}

}  // namespace stelnet
