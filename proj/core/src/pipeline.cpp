#include "stelnet/pipeline.hpp"

#include "stelnet/errors.hpp"
#include "stelnet/rng.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <random>

namespace stelnet {

void PriceTable::validate() const {
  if (static_cast<std::size_t>(prices.cols()) != names.size()) throw DataError("price table: header/column count mismatch");
  if (!dates.empty() && dates.size() != static_cast<std::size_t>(prices.rows())) {
    throw DataError("price table: date count differs from row count");
  }
  for (std::size_t i = 1; i < dates.size(); ++i)
    if (!(dates[i - 1] < dates[i])) throw DataError("price table: dates not strictly increasing at row " + std::to_string(i));
  for (Eigen::Index i = 0; i < prices.rows(); ++i)
    for (Eigen::Index j = 0; j < prices.cols(); ++j) {
      const double v = prices(i, j);
      if (std::isnan(v)) continue;
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw DataError("price table: non-positive price at row " + std::to_string(i) + ", series " + names[j]);
      }
    }
}

ReturnTable log_returns(const PriceTable& prices) {
  prices.validate();
  if (prices.prices.rows() < 2) throw DataError("log_returns: need at least 2 rows of prices");
  ReturnTable out;
  out.names = prices.names;
  if (!prices.dates.empty()) out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
  const Matrix& p = prices.prices;
  out.values.resize(p.rows() - 1, p.cols());
  for (Eigen::Index t = 1; t < p.rows(); ++t)
    for (Eigen::Index j = 0; j < p.cols(); ++j) out.values(t - 1, j) = std::log(p(t, j) / p(t - 1, j));
  return out;
}

ReturnTable complete_rows(const ReturnTable& table) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < table.values.rows(); ++i)
    if (!table.values.row(i).array().isNaN().any()) keep.push_back(i);
  ReturnTable out;
  out.names = table.names;
  out.values.resize(static_cast<Eigen::Index>(keep.size()), table.values.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    out.values.row(static_cast<Eigen::Index>(r)) = table.values.row(keep[r]);
    if (!table.dates.empty()) out.dates.push_back(table.dates[static_cast<std::size_t>(keep[r])]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// AR(1)-GARCH(1,1)

void garch_filter(const Vector& r, const GarchParameters& g, Vector& variance, Vector& residuals) {
  const Eigen::Index m = r.size() - 1;
  Vector eps(m);
  for (Eigen::Index t = 0; t < m; ++t) eps(t) = r(t + 1) - g.c - g.phi * r(t);
  variance.resize(m);
  residuals.resize(m);
  const double mean = eps.mean();
  double sigma2 = (eps.array() - mean).square().sum() / static_cast<double>(m);
  for (Eigen::Index t = 0; t < m; ++t) {
    if (t > 0) sigma2 = g.omega + g.a * eps(t - 1) * eps(t - 1) + g.b * sigma2;
    variance(t) = sigma2;
    residuals(t) = eps(t) / std::sqrt(sigma2);
  }
}

namespace {

constexpr int kGarchDim = 5;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

GarchParameters decode(const gsl_vector* x) {
  GarchParameters g;
  g.c = gsl_vector_get(x, 0);
  g.phi = std::tanh(gsl_vector_get(x, 1));
  g.omega = std::exp(gsl_vector_get(x, 2));
  const double persistence = logistic(gsl_vector_get(x, 3));
  g.a = persistence * logistic(gsl_vector_get(x, 4));
  g.b = persistence - g.a;
  return g;
}

void encode(const GarchParameters& g, gsl_vector* x) {
  gsl_vector_set(x, 0, g.c);
  gsl_vector_set(x, 1, std::atanh(g.phi));
  gsl_vector_set(x, 2, std::log(g.omega));
  const double persistence = g.a + g.b;
  gsl_vector_set(x, 3, logit(persistence));
  gsl_vector_set(x, 4, logit(g.a / persistence));
}

struct QmleData {
  const Vector* returns;
};

double negative_quasi_loglik(const Vector& r, const GarchParameters& g) {
  const Eigen::Index m = r.size() - 1;
  double sigma2 = 0.0;
  {
    double mean = 0.0;
    for (Eigen::Index t = 0; t < m; ++t) mean += r(t + 1) - g.c - g.phi * r(t);
    mean /= static_cast<double>(m);
    for (Eigen::Index t = 0; t < m; ++t) {
      const double e = r(t + 1) - g.c - g.phi * r(t) - mean;
      sigma2 += e * e;
    }
    sigma2 /= static_cast<double>(m);
  }
  double nll = 0.0;
  double prev_eps = 0.0;
  for (Eigen::Index t = 0; t < m; ++t) {
    const double eps = r(t + 1) - g.c - g.phi * r(t);
    if (t > 0) sigma2 = g.omega + g.a * prev_eps * prev_eps + g.b * sigma2;
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) return std::numeric_limits<double>::max();
    nll += 0.5 * (std::log(sigma2) + eps * eps / sigma2);
    prev_eps = eps;
  }
  return std::isfinite(nll) ? nll : std::numeric_limits<double>::max();
}

double gsl_objective(const gsl_vector* x, void* params) {
  const auto* data = static_cast<const QmleData*>(params);
  return negative_quasi_loglik(*data->returns, decode(x));
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* s) const { gsl_multimin_fminimizer_free(s); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

struct SimplexOutcome {
  GarchParameters params;
  double value = 0.0;
  bool converged = false;
};

SimplexOutcome run_simplex(const Vector& r, const GarchParameters& start, const GarchOptions& options) {
  QmleData data{&r};
  gsl_multimin_function fn{&gsl_objective, kGarchDim, &data};
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(kGarchDim));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(kGarchDim));
  encode(start, x.get());
  const std::array<double, kGarchDim> steps{0.05, 0.1, 0.5, 0.5, 0.5};
  for (int i = 0; i < kGarchDim; ++i) gsl_vector_set(step.get(), i, steps[static_cast<std::size_t>(i)]);

  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, kGarchDim));
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());

  SimplexOutcome out;
  for (int it = 0; it < options.max_iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), options.size_tolerance) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
  }
  out.params = decode(gsl_multimin_fminimizer_x(s.get()));
  out.value = gsl_multimin_fminimizer_minimum(s.get());
  return out;
}

}  // namespace

GarchFit fit_ar_garch(const Vector& returns, const GarchOptions& options) {
  if (returns.size() < options.min_length) {
    throw FitError("fit_ar_garch: series has " + std::to_string(returns.size()) + " observations, need at least " +
                   std::to_string(options.min_length));
  }
  if (!returns.allFinite()) throw FitError("fit_ar_garch: series contains non-finite values");
  const double mean = returns.mean();
  const double sd = std::sqrt((returns.array() - mean).square().sum() / static_cast<double>(returns.size() - 1));
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) throw FitError("fit_ar_garch: degenerate (constant) series");

  gsl_set_error_handler_off();
  // Fit on the standardized scale, then map c and omega back.
  const Vector r = (returns.array() - mean) / sd;
  double lag1 = 0.0;
  for (Eigen::Index t = 1; t < r.size(); ++t) lag1 += r(t) * r(t - 1);
  lag1 = std::clamp(lag1 / r.squaredNorm(), -0.9, 0.9);

  const std::array<std::pair<double, double>, 3> starts{{{0.05, 0.90}, {0.10, 0.80}, {0.02, 0.95}}};
  std::optional<SimplexOutcome> best;
  int restarts = 0;
  bool any_converged = false;
  for (const auto& [a0, b0] : starts) {
    GarchParameters g{0.0, lag1, 1.0 - a0 - b0, a0, b0};
    // Polish with a second simplex started at the first optimum.
    SimplexOutcome o = run_simplex(r, g, options);
    SimplexOutcome polished = run_simplex(r, o.params, options);
    if (polished.value <= o.value) o = polished;
    ++restarts;
    any_converged = any_converged || o.converged;
    if (!best || o.value < best->value) best = o;
  }
  if (!any_converged) throw FitError("fit_ar_garch: Nelder-Mead did not converge after " + std::to_string(restarts) + " restarts");

  GarchFit fit;
  fit.params = best->params;
  fit.params.c = mean * (1.0 - fit.params.phi) + sd * best->params.c;
  fit.params.omega = best->params.omega * sd * sd;
  fit.converged = true;
  fit.restarts_used = restarts;
  garch_filter(returns, fit.params, fit.variance, fit.residuals);
  const auto m = static_cast<double>(fit.residuals.size());
  fit.log_likelihood = -0.5 * m * std::log(2.0 * std::numbers::pi) - 0.5 * (fit.variance.array().log().sum() + fit.residuals.squaredNorm());
  return fit;
}

Vector simulate_ar_garch(const GarchParameters& g, int n, std::uint64_t seed, int burn_in) {
  if (n < 1) throw ConfigError("simulate_ar_garch: n must be positive");
  if (!(g.a + g.b < 1.0) || !(g.omega > 0.0)) throw ConfigError("simulate_ar_garch: non-stationary parameters");
  auto rng = make_stream(seed, {streams::kNormal, 0x67617263ULL});
  std::normal_distribution<double> z(0.0, 1.0);
  double sigma2 = g.omega / (1.0 - g.a - g.b);
  double r_prev = g.c / (1.0 - g.phi);
  double eps_prev = 0.0;
  Vector out(n);
  for (int t = -burn_in; t < n; ++t) {
    sigma2 = g.omega + g.a * eps_prev * eps_prev + g.b * sigma2;
    const double eps = std::sqrt(sigma2) * z(rng);
    const double r = g.c + g.phi * r_prev + eps;
    if (t >= 0) out(t) = r;
    r_prev = r;
    eps_prev = eps;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

namespace {

double reference_cdf(double x, const KsReference& ref) {
  if (ref.kind == KsReferenceKind::Normal) {
    static const boost::math::normal_distribution<double> unit;
    return boost::math::cdf(unit, x);
  }
  const boost::math::students_t_distribution<double> t(ref.nu);
  return boost::math::cdf(t, x * std::sqrt(ref.nu / (ref.nu - 2.0)));
}

}  // namespace

KsResult ks_statistic(const Vector& sample, const KsReference& reference) {
  if (sample.size() < 20) throw DataError("ks_statistic: need at least 20 observations");
  if (reference.kind == KsReferenceKind::StudentT && !(reference.nu > 2.0)) {
    throw DomainError("ks_statistic: unit-variance t reference needs nu > 2");
  }
  std::vector<double> x(sample.data(), sample.data() + sample.size());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = reference_cdf(x[i], reference);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  KsResult r;
  r.statistic = d;
  r.critical = 1.358 / std::sqrt(n);
  r.reject = d > r.critical;
  return r;
}

double fit_t_dof(const Vector& sample) {
  if (sample.size() < 20) throw DataError("fit_t_dof: need at least 20 observations");
  // Negative log-likelihood of the unit-variance t in u = log(nu - 2).
  auto nll = [&](double u) {
    const double nu = 2.0 + std::exp(u);
    const double scale = std::sqrt((nu - 2.0) / nu);
    const boost::math::students_t_distribution<double> t(nu);
    double total = 0.0;
    for (Eigen::Index i = 0; i < sample.size(); ++i) total -= std::log(boost::math::pdf(t, sample(i) / scale) / scale);
    return total;
  };
  const auto [u, value] = boost::math::tools::brent_find_minima(nll, std::log(0.01), std::log(198.0), 40);
  (void)value;
  return 2.0 + std::exp(u);
}

// ---------------------------------------------------------------------------
// Rolling windows

std::vector<Window> windows_by_rows(std::size_t rows, std::size_t window, std::size_t step) {
  if (window == 0 || step == 0) throw ConfigError("windows_by_rows: window and step must be positive");
  if (rows < window) throw DataError("windows_by_rows: table shorter than the window");
  std::vector<Window> out;
  for (std::size_t b = 0; b + window <= rows; b += step)
    out.push_back({b, b + window, "rows " + std::to_string(b + 1) + "-" + std::to_string(b + window)});
  return out;
}

std::vector<Window> windows_by_months(const std::vector<std::string>& dates, int window_months, int step_months) {
  if (window_months < 1 || step_months < 1) throw ConfigError("windows_by_months: window and step must be positive");
  if (dates.empty()) throw DataError("windows_by_months: no dates");
  std::vector<int> month(dates.size());
  for (std::size_t i = 0; i < dates.size(); ++i) {
    const auto& d = dates[i];
    if (d.size() < 7 || d[4] != '-') throw DataError("windows_by_months: date '" + d + "' is not ISO YYYY-MM-DD");
    month[i] = std::stoi(d.substr(0, 4)) * 12 + (std::stoi(d.substr(5, 2)) - 1);
  }
  const int first = month.front();
  const int span = month.back() - first + 1;
  if (span < window_months) throw DataError("windows_by_months: dates span fewer months than the window");
  auto label = [](int m) {
    const int y = m / 12;
    const int mo = m % 12 + 1;
    return std::to_string(y) + "-" + (mo < 10 ? "0" : "") + std::to_string(mo);
  };
  std::vector<Window> out;
  for (int start = first; start + window_months <= first + span; start += step_months) {
    const int stop = start + window_months;
    const auto b = static_cast<std::size_t>(std::lower_bound(month.begin(), month.end(), start) - month.begin());
    const auto e = static_cast<std::size_t>(std::lower_bound(month.begin(), month.end(), stop) - month.begin());
    out.push_back({b, e, label(start) + ".." + label(stop - 1)});
  }
  return out;
}

std::vector<WindowEstimate> rolling_estimate(const Matrix& residuals, const std::vector<Window>& windows,
                                             const LambdaGrid& grid, const EMConfig& config, int threads) {
  std::vector<WindowEstimate> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    WindowEstimate we;
    we.window = w;
    try {
      if (w.end > static_cast<std::size_t>(residuals.rows()) || w.begin >= w.end) {
        throw DataError("window " + w.label + " outside the residual table");
      }
      const Dataset data(residuals.middleRows(static_cast<Eigen::Index>(w.begin), static_cast<Eigen::Index>(w.end - w.begin)));
      SelectionReport report = select(data, grid, config, threads);
      we.partial_correlation = precision_to_partial_correlation(report.chosen->psi);
      we.measures = measures(*we.partial_correlation);
      we.report = std::move(report);
    } catch (const Error& e) {
      we.error = e.what();
    }
    out.push_back(std::move(we));
  }
  return out;
}

}  // namespace stelnet
