#pragma once

// Stage one: p conditional elastic-net regressions whose nonzero coefficients
// define each node's neighborhood, symmetrized into an undirected edge set.

#include "stelnet/elastic_net.hpp"
#include "stelnet/model_core.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace stelnet {

enum class EdgeRule { And, Or };

/// Parses "and" / "or" (case-insensitive). Throws ConfigError otherwise.
EdgeRule parse_edge_rule(std::string_view text);
std::string to_string(EdgeRule rule);

struct Neighborhoods {
  /// ne[k] holds the sorted predictors with a nonzero coefficient when
  /// column k is the response.
  std::vector<std::vector<int>> ne;
  /// Nodes whose regression hit the sweep cap (result still used).
  std::vector<int> unconverged;
};

struct NeighborhoodResult {
  Neighborhoods neighborhoods;
  EdgeSet edges;
  EdgeRule rule = EdgeRule::And;
};

/// Runs one elastic-net regression per column, sharing a single penalty.
/// `threads` > 1 splits the nodes across workers; the result is identical.
Neighborhoods select_neighborhoods(const Dataset& data, const PenaltyConfig& penalty,
                                   const SolverOptions& options = {}, int threads = 1);

/// Same regressions from the centered covariance C = Xc'Xc / n of the data.
Neighborhoods select_neighborhoods_from_covariance(const Matrix& centered_cov, const PenaltyConfig& penalty,
                                                   const SolverOptions& options = {}, int threads = 1);

/// AND: (j,k) iff j in ne(k) and k in ne(j). OR: iff either holds.
/// Throws ShapeError on out-of-range neighbor indices.
EdgeSet assemble_edges(const Neighborhoods& neighborhoods, EdgeRule rule);

NeighborhoodResult estimate_edge_set(const Dataset& data, const PenaltyConfig& penalty, EdgeRule rule,
                                     const SolverOptions& options = {});

}  // namespace stelnet
