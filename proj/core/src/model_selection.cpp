#include "stelnet/model_selection.hpp"

#include "stelnet/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace stelnet {

LambdaGrid LambdaGrid::exponential(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) throw ConfigError("lambda grid: need 0 < lo < hi");
  if (count < 2) throw ConfigError("lambda grid: count must be at least 2");
  LambdaGrid g;
  g.values_.resize(static_cast<std::size_t>(count));
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) g.values_[static_cast<std::size_t>(i)] = std::exp(log_lo + step * i);
  g.values_.front() = lo;
  g.values_.back() = hi;
  return g;
}

LambdaGrid LambdaGrid::single(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda grid: lambda must be finite and >= 0");
  LambdaGrid g;
  g.values_ = {lambda};
  return g;
}

LambdaGrid build_grid(double lo, double hi, int count) { return LambdaGrid::exponential(lo, hi, count); }

double log_likelihood(const EMState& state, const Dataset& data, const EMConfig& config) {
  const Matrix& x = data.values();
  const auto n = static_cast<double>(x.rows());
  const auto p = static_cast<double>(x.cols());
  const Matrix& psi = state.psi.matrix();
  const double logdet = log_determinant(psi);
  const Matrix centered = x.rowwise() - state.mu.transpose();
  const Vector quad = (centered * psi).cwiseProduct(centered).rowwise().sum();

  if (config.mode == EstimatorMode::Gaussian) {
    return -0.5 * n * p * std::log(2.0 * std::numbers::pi) + 0.5 * n * logdet - 0.5 * quad.sum();
  }
  const double nu = config.nu;
  const double norm = std::lgamma(0.5 * (nu + p)) - std::lgamma(0.5 * nu) - 0.5 * p * std::log(nu * std::numbers::pi);
  double kernel = 0.0;
  for (Eigen::Index i = 0; i < quad.size(); ++i) kernel += std::log1p(std::max(0.0, quad(i)) / nu);
  return n * (norm + 0.5 * logdet) - 0.5 * (nu + p) * kernel;
}

double bic(const EMState& state, const Dataset& data, const EMConfig& config) {
  if (!is_positive_definite(state.psi.matrix())) throw DomainError("bic: psi is not positive definite");
  const double k = static_cast<double>(state.edges.size()) + static_cast<double>(data.cols());
  return -2.0 * log_likelihood(state, data, config) + std::log(static_cast<double>(data.rows())) * k;
}

namespace {

struct Candidate {
  LambdaRecord record;
  std::optional<EMState> state;
};

Candidate fit_one(const Dataset& data, double lambda, const EMConfig& base) {
  Candidate c;
  c.record.lambda = lambda;
  EMConfig cfg = base;
  cfg.penalty.lambda = lambda;
  try {
    EMState st = estimate(data, cfg);
    c.record.iterations = st.iteration;
    c.record.converged = st.converged;
    c.record.edge_count = st.edges.size();
    c.record.log_likelihood = log_likelihood(st, data, cfg);
    c.record.bic = bic(st, data, cfg);
    c.state = std::move(st);
  } catch (const EstimationError& e) {
    c.record.failed = true;
    c.record.message = e.what();
  } catch (const NumericError& e) {
    c.record.failed = true;
    c.record.message = e.what();
  }
  return c;
}

}  // namespace

SelectionReport select(const Dataset& data, const LambdaGrid& grid, const EMConfig& config, int threads) {
  config.validate();
  const auto& lambdas = grid.values();
  if (lambdas.empty()) throw ConfigError("select: empty lambda grid");
  std::vector<Candidate> cands(lambdas.size());

  const int workers = std::clamp(threads, 1, static_cast<int>(lambdas.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) cands[i] = fit_one(data, lambdas[i], config);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < lambdas.size(); i = next++) cands[i] = fit_one(data, lambdas[i], config);
      });
    }
    for (auto& t : pool) t.join();
  }

  SelectionReport report;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    report.records.push_back(cands[i].record);
    if (cands[i].record.failed) continue;
    if (!best) {
      best = i;
      continue;
    }
    const double b = cands[i].record.bic;
    const double cur = cands[*best].record.bic;
    if (b < cur || (b == cur && lambdas[i] > lambdas[*best])) best = i;
  }
  if (!best) {
    std::string msg = "select: every lambda failed";
    if (!report.records.empty()) msg += " (first: " + report.records.front().message + ")";
    throw SelectionError(msg);
  }
  report.chosen_index = *best;
  report.chosen_lambda = lambdas[*best];
  report.chosen = std::move(cands[*best].state);
  return report;
}

}  // namespace stelnet
