#include "stelnet/analytics.hpp"

#include "stelnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace stelnet {

namespace {

std::vector<std::vector<int>> adjacency_lists(const Matrix& p) {
  const Eigen::Index n = p.rows();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      if (j != k && p(j, k) != 0.0) adj[j].push_back(static_cast<int>(k));
  return adj;
}

// Hop distances from `source`; -1 for unreachable nodes.
std::vector<int> bfs(const std::vector<std::vector<int>>& adj, int source) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : adj[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

double mean_of(const auto& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

NodeStatistics node_statistics(const PartialCorrelationMatrix& pc, StrengthOptions options) {
  const Matrix& p = pc.matrix();
  const auto adj = adjacency_lists(p);
  const std::size_t n = adj.size();
  NodeStatistics s;
  s.degree.resize(n);
  s.eccentricity.resize(n);
  s.clustering.resize(n);
  s.strength.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.degree[j] = static_cast<int>(adj[j].size());
    const auto dist = bfs(adj, static_cast<int>(j));
    s.eccentricity[j] = *std::max_element(dist.begin(), dist.end());
    if (s.eccentricity[j] < 0) s.eccentricity[j] = 0;

    const auto& nb = adj[j];
    const std::size_t k = nb.size();
    if (k >= 2) {
      std::size_t links = 0;
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
          if (p(nb[a], nb[b]) != 0.0) ++links;
      s.clustering[j] = 2.0 * static_cast<double>(links) / static_cast<double>(k * (k - 1));
    }
    const auto row = p.row(static_cast<Eigen::Index>(j));
    s.strength[j] = options.absolute ? row.cwiseAbs().sum() : row.sum();
  }
  return s;
}

NetworkMeasures measures(const PartialCorrelationMatrix& pc, StrengthOptions options) {
  const NodeStatistics s = node_statistics(pc, options);
  const auto adj = adjacency_lists(pc.matrix());
  NetworkMeasures m;
  m.mean_degree = mean_of(s.degree);
  m.mean_eccentricity = mean_of(s.eccentricity);
  m.mean_clustering = mean_of(s.clustering);
  m.mean_strength = mean_of(s.strength);
  m.edge_count = static_cast<std::size_t>(std::accumulate(s.degree.begin(), s.degree.end(), 0) / 2);

  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t j = 0; j < adj.size(); ++j) {
    const auto dist = bfs(adj, static_cast<int>(j));
    for (std::size_t k = j + 1; k < adj.size(); ++k) {
      if (dist[k] > 0) {
        total += dist[k];
        ++pairs;
      }
    }
  }
  m.mean_distance = pairs ? total / static_cast<double>(pairs) : 0.0;
  return m;
}

Centralities centralities(const PartialCorrelationMatrix& pc, StrengthOptions options) {
  const NodeStatistics s = node_statistics(pc, options);
  Centralities c;
  c.degree = s.degree;
  c.strength = s.strength;

  const Eigen::Index n = static_cast<Eigen::Index>(pc.dim());
  // The identity shift keeps the Perron root strictly dominant in modulus
  // (bipartite graphs have -rho in their spectrum).
  const Matrix a = pc.matrix().cwiseAbs() + Matrix::Identity(n, n);
  Vector v = Vector::Ones(n);
  bool settled = false;
  for (int it = 0; it < 10000; ++it) {
    Vector next = a * v;
    next /= next.cwiseAbs().maxCoeff();
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (change < 1e-12) {
      settled = true;
      break;
    }
  }
  if (!settled) throw NumericError("eigenvector centrality: power iteration did not converge in 10000 steps");
  c.eigenvector.assign(v.data(), v.data() + v.size());
  return c;
}

std::vector<int> degree_histogram(const PartialCorrelationMatrix& pc) {
  const NodeStatistics s = node_statistics(pc);
  const int max_degree = s.degree.empty() ? 0 : *std::max_element(s.degree.begin(), s.degree.end());
  std::vector<int> bins(static_cast<std::size_t>(max_degree) + 1, 0);
  for (int d : s.degree) ++bins[static_cast<std::size_t>(d)];
  return bins;
}

double spectral_radius(const PartialCorrelationMatrix& pc) {
  if (pc.dim() == 0) return 0.0;
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(pc.matrix(), Eigen::EigenvaluesOnly).eigenvalues();
  return ev.cwiseAbs().maxCoeff();
}

double absolute_spectral_radius(const PartialCorrelationMatrix& pc) {
  const Eigen::Index n = static_cast<Eigen::Index>(pc.dim());
  if (n == 0) return 0.0;
  const Matrix a = pc.matrix().cwiseAbs() + Matrix::Identity(n, n);
  Vector v = Vector::Ones(n);
  for (int it = 0; it < 10000; ++it) {
    Vector next = a * v;
    next /= next.cwiseAbs().maxCoeff();
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (change < 1e-13) break;
  }
  // Rayleigh quotient of the shifted matrix, minus the shift.
  return v.dot(a * v) / v.squaredNorm() - 1.0;
}

ShockResult shock(const PartialCorrelationMatrix& pc, int node) {
  const Eigen::Index n = static_cast<Eigen::Index>(pc.dim());
  if (node < 0 || node >= n) throw ShapeError("shock: node " + std::to_string(node) + " out of range");
  ShockResult r;
  r.node = node;
  r.spectral_radius = spectral_radius(pc);
  r.absolute_radius = absolute_spectral_radius(pc);
  // Eigenvalues carry rounding of a few ulps; a radius that close to 1 leaves
  // I - P numerically singular and is treated as divergent.
  if (!(r.spectral_radius < 1.0 - 1e-12)) {
    throw DivergenceError("shock: spectral radius " + std::to_string(r.spectral_radius) + " >= 1, series diverges",
                          r.spectral_radius);
  }
  r.initial = Vector::Unit(n, node);
  const Matrix system = Matrix::Identity(n, n) - pc.matrix();
  r.steady_state = system.partialPivLu().solve(r.initial);
  r.total_impact = r.steady_state.sum();
  return r;
}

}  // namespace stelnet
