#pragma once

// Ground-truth sparse precision matrices on seven graph topologies.

#include "stelnet/model_core.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace stelnet {

enum class Topology { ScaleFree, Random, Band, Cluster, Hub, SmallWorld, CorePeriphery };

inline constexpr std::array<Topology, 7> kAllTopologies = {Topology::ScaleFree, Topology::SmallWorld,
                                                           Topology::CorePeriphery, Topology::Random,
                                                           Topology::Band, Topology::Cluster, Topology::Hub};

std::string to_string(Topology kind);
/// Accepts "scale-free", "random", "band", "cluster", "hub", "small-world",
/// "core-periphery" (underscores allowed). Throws ConfigError otherwise.
Topology parse_topology(std::string_view text);

/// Kind-specific knobs. Values of zero or below mean "use the default for p".
struct TopologySpec {
  Topology kind = Topology::ScaleFree;
  int p = 50;
  std::uint64_t seed = 0;

  double edge_probability = 0.0;  ///< random: default 3/p
  int bandwidth = 2;              ///< band
  int groups = 5;                 ///< cluster and hub
  double within_probability = 0.3;  ///< cluster
  int ring_neighbors = 4;         ///< small-world ring degree k (even)
  double rewire_probability = 0.1;  ///< small-world
  double core_fraction = 0.1;     ///< core-periphery
  double core_core = 0.8;
  double core_periphery = 0.2;
  double periphery_periphery = 0.02;

  double v = 0.3;  ///< off-diagonal magnitude
  double u = 0.1;  ///< extra diagonal boost

  /// Throws ConfigError on p < 4, v <= 0, u < 0 or infeasible kind knobs.
  void validate() const;
};

/// Deterministic for a given spec (including seed).
EdgeSet generate_pattern(const TopologySpec& spec);

/// theta_jk = v on edges, zero elsewhere off the diagonal; every diagonal
/// entry is |lambda_min(offdiag)| + 0.1 + u, which makes theta PD.
PrecisionMatrix pattern_to_precision(const EdgeSet& edges, double v, double u);

/// generate_pattern followed by pattern_to_precision.
PrecisionMatrix generate_precision(const TopologySpec& spec);

}  // namespace stelnet
