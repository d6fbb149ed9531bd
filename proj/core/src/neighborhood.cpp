#include "stelnet/neighborhood.hpp"

#include "stelnet/errors.hpp"

#include <algorithm>
#include <cctype>
#include <thread>

namespace stelnet {

EdgeRule parse_edge_rule(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "and") return EdgeRule::And;
  if (lower == "or") return EdgeRule::Or;
  throw ConfigError("unknown edge rule '" + std::string(text) + "' (expected and|or)");
}

std::string to_string(EdgeRule rule) { return rule == EdgeRule::And ? "and" : "or"; }

namespace {

void regress_node(const Matrix& cov, Eigen::Index k, const PenaltyConfig& penalty, const SolverOptions& options,
                  std::vector<int>& ne, bool& converged) {
  const Eigen::Index p = cov.rows();
  std::vector<Eigen::Index> others;
  others.reserve(static_cast<std::size_t>(p - 1));
  for (Eigen::Index j = 0; j < p; ++j)
    if (j != k) others.push_back(j);

  const auto m = static_cast<Eigen::Index>(others.size());
  Matrix gram(m, m);
  Vector xy(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    xy(a) = cov(others[a], k);
    for (Eigen::Index b = 0; b < m; ++b) gram(a, b) = cov(others[a], others[b]);
  }
  const ElasticNetFit fit = solve_gram(gram, xy, cov(k, k), penalty, options);
  ne.clear();
  for (Eigen::Index a = 0; a < m; ++a)
    if (fit.coefficients(a) != 0.0) ne.push_back(static_cast<int>(others[a]));
  converged = fit.converged;
}

}  // namespace

Neighborhoods select_neighborhoods_from_covariance(const Matrix& cov, const PenaltyConfig& penalty,
                                                   const SolverOptions& options, int threads) {
  penalty.validate();
  require_symmetric(cov, "select_neighborhoods");
  const Eigen::Index p = cov.rows();
  if (p < 2) throw DataError("select_neighborhoods: need at least 2 variables");
  if (!cov.allFinite()) throw DataError("select_neighborhoods: non-finite covariance");

  Neighborhoods out;
  out.ne.assign(static_cast<std::size_t>(p), {});
  std::vector<char> ok(static_cast<std::size_t>(p), 1);

  auto run_range = [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index k = begin; k < end; ++k) {
      bool conv = true;
      regress_node(cov, k, penalty, options, out.ne[static_cast<std::size_t>(k)], conv);
      ok[static_cast<std::size_t>(k)] = conv ? 1 : 0;
    }
  };

  const int workers = std::clamp(threads, 1, static_cast<int>(p));
  if (workers == 1) {
    run_range(0, p);
  } else {
    std::vector<std::thread> pool;
    const Eigen::Index chunk = (p + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const Eigen::Index b = w * chunk;
      const Eigen::Index e = std::min(p, b + chunk);
      if (b < e) pool.emplace_back(run_range, b, e);
    }
    for (auto& t : pool) t.join();
  }
  for (Eigen::Index k = 0; k < p; ++k)
    if (!ok[static_cast<std::size_t>(k)]) out.unconverged.push_back(static_cast<int>(k));
  return out;
}

Neighborhoods select_neighborhoods(const Dataset& data, const PenaltyConfig& penalty, const SolverOptions& options,
                                   int threads) {
  const Matrix& x = data.values();
  const Matrix xc = x.rowwise() - x.colwise().mean();
  const Matrix cov = (xc.transpose() * xc) / static_cast<double>(x.rows());
  return select_neighborhoods_from_covariance(0.5 * (cov + cov.transpose()), penalty, options, threads);
}

EdgeSet assemble_edges(const Neighborhoods& neighborhoods, EdgeRule rule) {
  const auto p = neighborhoods.ne.size();
  Eigen::MatrixXi hit = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t k = 0; k < p; ++k) {
    for (int j : neighborhoods.ne[k]) {
      if (j < 0 || static_cast<std::size_t>(j) >= p || static_cast<std::size_t>(j) == k) {
        throw ShapeError("assemble_edges: neighbor index " + std::to_string(j) + " invalid for node " +
                         std::to_string(k));
      }
      hit(j, static_cast<Eigen::Index>(k)) = 1;
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j + 1; k < p; ++k) {
      const bool a = hit(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) != 0;
      const bool b = hit(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) != 0;
      if (rule == EdgeRule::And ? (a && b) : (a || b)) pairs.emplace_back(static_cast<int>(j), static_cast<int>(k));
    }
  }
  return EdgeSet(p, pairs);
}

NeighborhoodResult estimate_edge_set(const Dataset& data, const PenaltyConfig& penalty, EdgeRule rule,
                                     const SolverOptions& options) {
  NeighborhoodResult r;
  r.neighborhoods = select_neighborhoods(data, penalty, options);
  r.edges = assemble_edges(r.neighborhoods, rule);
  r.rule = rule;
  return r;
}

}  // namespace stelnet
