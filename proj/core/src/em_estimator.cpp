#include "stelnet/em_estimator.hpp"

#include "stelnet/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace stelnet {

EstimatorMode parse_estimator_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "t" || lower == "student-t" || lower == "student" || lower == "tstudent") return EstimatorMode::StudentT;
  if (lower == "gaussian" || lower == "normal" || lower == "g") return EstimatorMode::Gaussian;
  throw ConfigError("unknown estimator mode '" + std::string(text) + "' (expected t|gaussian)");
}

std::string to_string(EstimatorMode mode) { return mode == EstimatorMode::StudentT ? "t" : "gaussian"; }

void EMConfig::validate() const {
  penalty.validate();
  if (mode == EstimatorMode::StudentT && !(nu > 2.0)) throw ConfigError("EM config: nu must exceed 2 in t mode");
  if (!(delta > 0.0)) throw ConfigError("EM config: delta must be positive");
  if (max_iterations < 1) throw ConfigError("EM config: max_iterations must be at least 1");
}

Vector e_step(const Dataset& data, const Vector& mu, const PrecisionMatrix& psi, double nu) {
  if (!(nu > 2.0)) throw DomainError("e_step: nu must exceed 2");
  const Matrix& x = data.values();
  if (mu.size() != x.cols() || static_cast<Eigen::Index>(psi.dim()) != x.cols()) {
    throw ShapeError("e_step: dimension mismatch between data, mu and psi");
  }
  const double p = static_cast<double>(x.cols());
  const Matrix centered = x.rowwise() - mu.transpose();
  const Vector quad = (centered * psi.matrix()).cwiseProduct(centered).rowwise().sum();
  Vector tau(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (!std::isfinite(quad(i))) throw DataError("e_step: non-finite quadratic form at row " + std::to_string(i));
    // A PD psi gives quad >= 0 up to rounding.
    tau(i) = (nu + p) / (nu + std::max(0.0, quad(i)));
  }
  return tau;
}

Vector m_step_mean(const Dataset& data, const Vector& tau) {
  const Matrix& x = data.values();
  if (tau.size() != x.rows()) throw ShapeError("m_step_mean: tau length differs from row count");
  if (!tau.allFinite() || (tau.array() <= 0.0).any()) throw DataError("m_step_mean: tau must be finite and positive");
  const Vector mu = (x.transpose() * tau) / tau.sum();
  if (!mu.allFinite()) throw DataError("m_step_mean: non-finite mean");
  return mu;
}

Matrix weighted_scatter(const Dataset& data, const Vector& tau, const Vector& mu) {
  const Matrix& x = data.values();
  if (tau.size() != x.rows() || mu.size() != x.cols()) throw ShapeError("weighted_scatter: dimension mismatch");
  const Matrix centered = x.rowwise() - mu.transpose();
  Matrix s = (centered.transpose() * tau.asDiagonal() * centered) / static_cast<double>(x.rows());
  return 0.5 * (s + s.transpose());
}

Dataset transform_rows(const Dataset& data, const Vector& tau, const Vector& mu) {
  const Matrix& x = data.values();
  if (tau.size() != x.rows() || mu.size() != x.cols()) throw ShapeError("transform_rows: dimension mismatch");
  if ((tau.array() <= 0.0).any()) throw DataError("transform_rows: tau must be positive");
  Matrix out = (x.rowwise() - mu.transpose());
  out = tau.array().sqrt().matrix().asDiagonal() * out;
  return Dataset(std::move(out));
}

namespace {

Matrix initial_psi(const Matrix& s0, double nu) {
  const Eigen::Index p = s0.rows();
  Matrix s = s0;
  if (!is_positive_definite(s)) s.diagonal().array() += 1e-3 * s.trace() / static_cast<double>(p);
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) throw EstimationError("EM initialization: sample covariance cannot be inverted");
  Matrix inv = llt.solve(Matrix::Identity(p, p));
  return (nu / (nu - 2.0)) * 0.5 * (inv + inv.transpose());
}

// Stage one on the transformed rows and stage two on the weighted scatter.
ConstrainedMLEResult two_stage_step(const Dataset& transformed, const Matrix& scatter, const EMConfig& config,
                                    EdgeSet& edges, std::vector<int>& unconverged, int iteration) {
  const Neighborhoods nb = select_neighborhoods(transformed, config.penalty, config.solver);
  edges = assemble_edges(nb, config.rule);
  unconverged = nb.unconverged;
  try {
    return fit_constrained_mle(scatter, edges, config.mle);
  } catch (const EstimationError& e) {
    throw EstimationError("EM iteration " + std::to_string(iteration) + ", edge set of " +
                          std::to_string(edges.size()) + " edges: " + e.what());
  }
}

}  // namespace

EMState estimate(const Dataset& data, const EMConfig& config, const IterateObserver& observer) {
  config.validate();
  const Matrix& x = data.values();
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (p < 2) throw DataError("estimate: need at least 2 variables");

  const Vector mu0 = x.colwise().mean().transpose();
  const Vector ones = Vector::Ones(n);
  const Matrix s0 = weighted_scatter(data, ones, mu0);

  if (config.mode == EstimatorMode::Gaussian) {
    const Dataset centered = transform_rows(data, ones, mu0);
    EdgeSet edges;
    std::vector<int> unconverged;
    ConstrainedMLEResult fit = two_stage_step(centered, s0, config, edges, unconverged, 1);
    EMState state{mu0, fit.psi, ones, edges, 1, 0.0, true, unconverged, {}};
    if (observer) observer(1, state.psi);
    return state;
  }

  EMState state{mu0, PrecisionMatrix(initial_psi(s0, config.nu)), ones, EdgeSet(static_cast<std::size_t>(p)), 0, 0.0,
                false, {}, {}};
  for (int t = 1; t <= config.max_iterations; ++t) {
    state.tau = e_step(data, state.mu, state.psi, config.nu);
    state.mu = m_step_mean(data, state.tau);
    const Dataset transformed = transform_rows(data, state.tau, state.mu);
    const Matrix scatter = weighted_scatter(data, state.tau, state.mu);
    ConstrainedMLEResult fit = two_stage_step(transformed, scatter, config, state.edges, state.unconverged_nodes, t);

    const double change = (fit.psi.matrix() - state.psi.matrix()).cwiseAbs().maxCoeff();
    state.psi = fit.psi;
    state.iteration = t;
    state.last_change = change;
    state.change_history.push_back(change);
    if (observer) observer(t, state.psi);
    if (change < config.delta) {
      state.converged = true;
      break;
    }
  }
  return state;
}

}  // namespace stelnet
