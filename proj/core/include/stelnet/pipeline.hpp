#pragma once

// Empirical path: prices -> log-returns -> AR(1)-GARCH(1,1) residuals ->
// rolling-window network estimation.

#include "stelnet/analytics.hpp"
#include "stelnet/model_selection.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stelnet {

/// Dated rows of named price series. Missing cells are NaN.
struct PriceTable {
  std::vector<std::string> dates;  ///< ISO dates; may be empty
  std::vector<std::string> names;
  Matrix prices;  ///< rows x series

  /// Throws DataError: non-positive prices, non-increasing dates, size mismatch.
  void validate() const;
};

/// Rows aligned with dates[1..]; NaN where either price is missing.
struct ReturnTable {
  std::vector<std::string> dates;
  std::vector<std::string> names;
  Matrix values;
};

/// r_t = ln(p_t / p_{t-1}). Throws DataError with fewer than 2 rows.
ReturnTable log_returns(const PriceTable& prices);

/// Drops rows that contain any NaN.
ReturnTable complete_rows(const ReturnTable& table);

struct GarchParameters {
  double c = 0.0;
  double phi = 0.0;
  double omega = 0.0;
  double a = 0.0;
  double b = 0.0;
};

struct GarchFit {
  GarchParameters params;
  Vector residuals;  ///< standardized z_t = eps_t / sigma_t, length T - 1
  Vector variance;   ///< sigma_t^2, length T - 1
  double log_likelihood = 0.0;  ///< Gaussian quasi log-likelihood
  bool converged = false;
  int restarts_used = 0;
};

struct GarchOptions {
  int min_length = 250;
  int max_iterations = 4000;
  double size_tolerance = 1e-7;
};

/// Quasi-ML fit of r_t = c + phi r_{t-1} + eps_t, sigma_t^2 = omega +
/// a eps_{t-1}^2 + b sigma_{t-1}^2 by Nelder-Mead on a reparameterization
/// that keeps |phi| < 1, omega > 0, a, b >= 0 and a + b < 1. The first
/// variance is the sample variance of eps. Throws FitError on short or
/// degenerate series or when no restart converges.
GarchFit fit_ar_garch(const Vector& returns, const GarchOptions& options = {});

/// Simulates n observations (after a burn-in) with Gaussian innovations.
Vector simulate_ar_garch(const GarchParameters& params, int n, std::uint64_t seed, int burn_in = 500);

/// Conditional variances and standardized residuals for fixed parameters.
void garch_filter(const Vector& returns, const GarchParameters& params, Vector& variance, Vector& residuals);

enum class KsReferenceKind { Normal, StudentT };

struct KsReference {
  KsReferenceKind kind = KsReferenceKind::Normal;
  double nu = 0.0;  ///< t only; the t law is rescaled to unit variance (nu > 2)
};

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;  ///< 1.358 / sqrt(n)
  bool reject = false;    ///< at the 5% level
};

/// One-sample Kolmogorov-Smirnov test against N(0,1) or the unit-variance t.
/// Throws DataError with fewer than 20 observations.
KsResult ks_statistic(const Vector& sample, const KsReference& reference);

/// ML estimate of nu for the unit-variance t, searched on (2, 200].
double fit_t_dof(const Vector& sample);

struct Window {
  std::size_t begin = 0;  ///< first row, inclusive
  std::size_t end = 0;    ///< one past the last row
  std::string label;
};

/// floor((rows - window) / step) + 1 windows of `window` rows each.
std::vector<Window> windows_by_rows(std::size_t rows, std::size_t window, std::size_t step);

/// Calendar windows over the months spanned by ISO dates (YYYY-MM-...).
std::vector<Window> windows_by_months(const std::vector<std::string>& dates, int window_months, int step_months);

struct WindowEstimate {
  Window window;
  std::optional<SelectionReport> report;
  std::optional<PartialCorrelationMatrix> partial_correlation;
  std::optional<NetworkMeasures> measures;
  std::string error;  ///< empty on success
};

/// Estimates one network per window via select(); failures are recorded and
/// the sequence continues.
std::vector<WindowEstimate> rolling_estimate(const Matrix& residuals, const std::vector<Window>& windows,
                                             const LambdaGrid& grid, const EMConfig& config, int threads = 1);

}  // namespace stelnet
