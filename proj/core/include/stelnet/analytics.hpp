#pragma once

// Network summaries of an estimated partial-correlation matrix: global
// measures, node centralities and the linear shock-propagation steady state.

#include "stelnet/model_core.hpp"

#include <vector>

namespace stelnet {

struct NetworkMeasures {
  double mean_degree = 0.0;
  double mean_eccentricity = 0.0;  ///< isolated nodes count as 0
  double mean_distance = 0.0;      ///< over connected pairs only
  double mean_clustering = 0.0;    ///< nodes of degree < 2 count as 0
  double mean_strength = 0.0;
  std::size_t edge_count = 0;
};

struct NodeStatistics {
  std::vector<int> degree;
  std::vector<int> eccentricity;
  std::vector<double> clustering;
  std::vector<double> strength;
};

struct Centralities {
  std::vector<int> degree;
  std::vector<double> strength;
  std::vector<double> eigenvector;  ///< principal eigenvector of |P|, max scaled to 1
};

struct StrengthOptions {
  /// Sum |p_jk| instead of signed weights.
  bool absolute = false;
};

/// Per-node statistics on the graph with an edge wherever p_jk != 0.
NodeStatistics node_statistics(const PartialCorrelationMatrix& pc, StrengthOptions options = {});

NetworkMeasures measures(const PartialCorrelationMatrix& pc, StrengthOptions options = {});

/// Degree, strength and eigenvector centrality. Eigenvector scores come from
/// power iteration on |P| + I started from the all-ones vector; for graphs
/// with several components of equal leading eigenvalue the result depends on
/// that start. Throws NumericError if the iteration does not settle in 1e4
/// steps.
Centralities centralities(const PartialCorrelationMatrix& pc, StrengthOptions options = {});

/// Counts of nodes per degree 0..max degree.
std::vector<int> degree_histogram(const PartialCorrelationMatrix& pc);

/// max |eigenvalue| of the symmetric matrix P.
double spectral_radius(const PartialCorrelationMatrix& pc);

/// Perron root of |P| by power iteration; an upper bound on spectral_radius.
double absolute_spectral_radius(const PartialCorrelationMatrix& pc);

struct ShockResult {
  int node = 0;
  Vector initial;       ///< e_i
  Vector steady_state;  ///< (I - P)^-1 e_i
  double total_impact = 0.0;
  double spectral_radius = 0.0;
  double absolute_radius = 0.0;
};

/// Steady state of a unit shock at `node` (0-based). Throws DivergenceError
/// when the spectral radius of P is at least 1, ShapeError for a bad node.
ShockResult shock(const PartialCorrelationMatrix& pc, int node);

}  // namespace stelnet
