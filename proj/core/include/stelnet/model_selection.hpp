#pragma once

// Lambda grids and BIC-based choice of the penalty strength.

#include "stelnet/em_estimator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stelnet {

class LambdaGrid {
 public:
  /// lambda_i = lo * (hi/lo)^(i/(count-1)), i = 0..count-1; endpoints are
  /// exactly lo and hi. Throws ConfigError unless 0 < lo < hi and count >= 2.
  static LambdaGrid exponential(double lo, double hi, int count);
  /// A single value (useful to fit one lambda through the selection path).
  static LambdaGrid single(double lambda);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

 private:
  std::vector<double> values_;
};

/// Shorthand for LambdaGrid::exponential.
LambdaGrid build_grid(double lo, double hi, int count);

struct LambdaRecord {
  double lambda = 0.0;
  double bic = 0.0;
  double log_likelihood = 0.0;
  std::size_t edge_count = 0;
  int iterations = 0;
  bool converged = false;
  bool failed = false;
  std::string message;  ///< failure diagnostic
};

struct SelectionReport {
  std::vector<LambdaRecord> records;  ///< grid order
  std::size_t chosen_index = 0;
  double chosen_lambda = 0.0;
  std::optional<EMState> chosen;
};

/// Log-likelihood at (mu, psi): multivariate t with scatter psi^-1 and nu in
/// t mode, Gaussian with precision psi otherwise.
double log_likelihood(const EMState& state, const Dataset& data, const EMConfig& config);

/// -2 loglik + log(n) (|E| + p). Throws DomainError for non-PD psi.
double bic(const EMState& state, const Dataset& data, const EMConfig& config);

/// Runs estimate at every lambda (config.penalty.lambda is overridden), scores
/// each non-failed fit by BIC and returns the minimum; ties go to the larger
/// lambda. Failed fits are recorded and skipped. Throws SelectionError when
/// every lambda fails. `threads` > 1 fits lambdas concurrently; the report
/// is identical.
SelectionReport select(const Dataset& data, const LambdaGrid& grid, const EMConfig& config, int threads = 1);

}  // namespace stelnet
