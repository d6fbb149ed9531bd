#pragma once

// EM estimation of a sparse inverse scatter matrix under the multivariate t
// scale mixture, with the two-stage elastic-net estimator as the M-step.
// Gaussian mode fixes tau = 1 and performs a single M-step pass.

#include "stelnet/constrained_mle.hpp"
#include "stelnet/elastic_net.hpp"
#include "stelnet/model_core.hpp"
#include "stelnet/neighborhood.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stelnet {

enum class EstimatorMode { StudentT, Gaussian };

/// Parses "t" / "student-t" / "gaussian". Throws ConfigError otherwise.
EstimatorMode parse_estimator_mode(std::string_view text);
std::string to_string(EstimatorMode mode);

struct EMConfig {
  EstimatorMode mode = EstimatorMode::StudentT;
  double nu = 3.0;  ///< fixed degrees of freedom; only used in t mode
  PenaltyConfig penalty;
  EdgeRule rule = EdgeRule::And;
  double delta = 1e-4;  ///< stop when max |psi_new - psi_old| < delta
  int max_iterations = 200;
  SolverOptions solver;
  ConstrainedMLEOptions mle;

  /// Throws ConfigError: nu <= 2 in t mode, delta <= 0, bad penalty, ...
  void validate() const;
};

struct EMState {
  Vector mu;
  PrecisionMatrix psi{Matrix::Identity(1, 1)};
  Vector tau;
  EdgeSet edges;
  int iteration = 0;
  double last_change = 0.0;
  bool converged = false;
  /// Nodes whose regressions hit the sweep cap in the final M-step.
  std::vector<int> unconverged_nodes;
  std::vector<double> change_history;
};

/// tau_i = (nu + p) / (nu + (x_i - mu)' psi (x_i - mu)).
/// Throws DomainError for nu <= 2, DataError naming the row whose quadratic
/// form is non-finite.
Vector e_step(const Dataset& data, const Vector& mu, const PrecisionMatrix& psi, double nu);

/// sum tau_i x_i / sum tau_i. Throws DataError for non-positive tau.
Vector m_step_mean(const Dataset& data, const Vector& tau);

/// (1/n) sum tau_i (x_i - mu)(x_i - mu)'.
Matrix weighted_scatter(const Dataset& data, const Vector& tau, const Vector& mu);

/// Rows (x_i - mu) sqrt(tau_i).
Dataset transform_rows(const Dataset& data, const Vector& tau, const Vector& mu);

/// Called after every accepted iterate with its index and psi.
using IterateObserver = std::function<void(int iteration, const PrecisionMatrix& psi)>;

/// Runs the EM loop (or the single Gaussian pass). Throws EstimationError if
/// stage two fails, with the iteration index and edge count in the message.
/// Reaching max_iterations returns a state with converged = false.
EMState estimate(const Dataset& data, const EMConfig& config, const IterateObserver& observer = {});

}  // namespace stelnet
