#include "stelnet/netgen.hpp"

#include "stelnet/errors.hpp"
#include "stelnet/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>

namespace stelnet {

std::string to_string(Topology kind) {
  switch (kind) {
    case Topology::ScaleFree: return "scale-free";
    case Topology::Random: return "random";
    case Topology::Band: return "band";
    case Topology::Cluster: return "cluster";
    case Topology::Hub: return "hub";
    case Topology::SmallWorld: return "small-world";
    case Topology::CorePeriphery: return "core-periphery";
  }
  return "unknown";
}

Topology parse_topology(std::string_view text) {
  std::string s(text);
  for (auto& c : s) c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (Topology t : kAllTopologies)
    if (to_string(t) == s) return t;
  if (s == "scalefree") return Topology::ScaleFree;
  if (s == "smallworld") return Topology::SmallWorld;
  if (s == "coreperiphery") return Topology::CorePeriphery;
  throw ConfigError("unknown topology '" + std::string(text) + "'");
}

void TopologySpec::validate() const {
  if (p < 4) throw ConfigError("topology: p must be at least 4");
  if (!(v > 0.0)) throw ConfigError("topology: v must be positive");
  if (!(u >= 0.0)) throw ConfigError("topology: u must be non-negative");
  auto prob = [](double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(std::string("topology: ") + name + " must lie in [0, 1]");
  };
  switch (kind) {
    case Topology::Random:
      if (edge_probability > 0.0) prob(edge_probability, "edge_probability");
      break;
    case Topology::Band:
      if (bandwidth < 1 || bandwidth >= p) throw ConfigError("topology: band needs 1 <= bandwidth < p");
      break;
    case Topology::Cluster:
      prob(within_probability, "within_probability");
      [[fallthrough]];
    case Topology::Hub:
      if (groups < 1 || groups > p / 2) throw ConfigError("topology: groups must lie in [1, p/2]");
      break;
    case Topology::SmallWorld:
      if (ring_neighbors < 2 || ring_neighbors % 2 != 0 || ring_neighbors >= p - 1) {
        throw ConfigError("topology: small-world ring_neighbors must be even and in [2, p-2]");
      }
      prob(rewire_probability, "rewire_probability");
      break;
    case Topology::CorePeriphery:
      if (!(core_fraction > 0.0 && core_fraction < 1.0)) throw ConfigError("topology: core_fraction must lie in (0, 1)");
      prob(core_core, "core_core");
      prob(core_periphery, "core_periphery");
      prob(periphery_periphery, "periphery_periphery");
      break;
    case Topology::ScaleFree: break;
  }
}

namespace {

using Pairs = std::vector<std::pair<int, int>>;

// Contiguous near-equal groups; group g covers [start[g], start[g+1]).
std::vector<int> group_starts(int p, int groups) {
  std::vector<int> start(static_cast<std::size_t>(groups) + 1);
  for (int g = 0; g <= groups; ++g) start[static_cast<std::size_t>(g)] = static_cast<int>((static_cast<long>(g) * p) / groups);
  return start;
}

Pairs scale_free(const TopologySpec& s, std::mt19937_64& rng) {
  // Preferential-attachment tree: each arriving node links to one existing
  // node chosen with probability proportional to its degree.
  Pairs out{{0, 1}};
  std::vector<int> endpoints{0, 1};  // each node appears once per incident edge
  for (int i = 2; i < s.p; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    const int target = endpoints[pick(rng)];
    out.emplace_back(target, i);
    endpoints.push_back(target);
    endpoints.push_back(i);
  }
  return out;
}

Pairs erdos_renyi(const TopologySpec& s, std::mt19937_64& rng) {
  const double prob = s.edge_probability > 0.0 ? s.edge_probability : std::min(1.0, 3.0 / s.p);
  std::bernoulli_distribution coin(prob);
  Pairs out;
  for (int j = 0; j < s.p; ++j)
    for (int k = j + 1; k < s.p; ++k)
      if (coin(rng)) out.emplace_back(j, k);
  return out;
}

Pairs band(const TopologySpec& s) {
  Pairs out;
  for (int j = 0; j < s.p; ++j)
    for (int d = 1; d <= s.bandwidth && j + d < s.p; ++d) out.emplace_back(j, j + d);
  return out;
}

Pairs cluster(const TopologySpec& s, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(s.within_probability);
  const auto start = group_starts(s.p, s.groups);
  Pairs out;
  for (int g = 0; g < s.groups; ++g)
    for (int j = start[g]; j < start[g + 1]; ++j)
      for (int k = j + 1; k < start[g + 1]; ++k)
        if (coin(rng)) out.emplace_back(j, k);
  return out;
}

Pairs hub(const TopologySpec& s) {
  const auto start = group_starts(s.p, s.groups);
  Pairs out;
  for (int g = 0; g < s.groups; ++g)
    for (int j = start[g] + 1; j < start[g + 1]; ++j) out.emplace_back(start[g], j);
  return out;
}

Pairs small_world(const TopologySpec& s, std::mt19937_64& rng) {
  // Ring lattice with k/2 neighbors per side; each lattice edge (i, i+d) has
  // its far endpoint rewired with the given probability, avoiding self-loops
  // and duplicates.
  std::set<std::pair<int, int>> edges;
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  const int half = s.ring_neighbors / 2;
  for (int i = 0; i < s.p; ++i)
    for (int d = 1; d <= half; ++d) edges.insert(key(i, (i + d) % s.p));

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> node(0, s.p - 1);
  for (int d = 1; d <= half; ++d) {
    for (int i = 0; i < s.p; ++i) {
      const auto e = key(i, (i + d) % s.p);
      if (unif(rng) >= s.rewire_probability || !edges.count(e)) continue;
      int target = node(rng);
      int guard = 0;
      while ((target == i || edges.count(key(i, target))) && guard++ < 10 * s.p) target = node(rng);
      if (target == i || edges.count(key(i, target))) continue;
      edges.erase(e);
      edges.insert(key(i, target));
    }
  }
  return Pairs(edges.begin(), edges.end());
}

Pairs core_periphery(const TopologySpec& s, std::mt19937_64& rng) {
  const int core = std::max(1, static_cast<int>(std::lround(s.core_fraction * s.p)));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Pairs out;
  for (int j = 0; j < s.p; ++j) {
    for (int k = j + 1; k < s.p; ++k) {
      const bool cj = j < core;
      const bool ck = k < core;
      const double prob = cj && ck ? s.core_core : (cj || ck ? s.core_periphery : s.periphery_periphery);
      if (unif(rng) < prob) out.emplace_back(j, k);
    }
  }
  return out;
}

}  // namespace

EdgeSet generate_pattern(const TopologySpec& spec) {
  spec.validate();
  auto rng = make_stream(spec.seed, {streams::kTopology, static_cast<std::uint64_t>(spec.kind)});
  Pairs pairs;
  switch (spec.kind) {
    case Topology::ScaleFree: pairs = scale_free(spec, rng); break;
    case Topology::Random: pairs = erdos_renyi(spec, rng); break;
    case Topology::Band: pairs = band(spec); break;
    case Topology::Cluster: pairs = cluster(spec, rng); break;
    case Topology::Hub: pairs = hub(spec); break;
    case Topology::SmallWorld: pairs = small_world(spec, rng); break;
    case Topology::CorePeriphery: pairs = core_periphery(spec, rng); break;
  }
  return EdgeSet(static_cast<std::size_t>(spec.p), pairs);
}

PrecisionMatrix pattern_to_precision(const EdgeSet& edges, double v, double u) {
  if (!(v > 0.0)) throw ConfigError("pattern_to_precision: v must be positive");
  const auto p = static_cast<Eigen::Index>(edges.nodes());
  Matrix theta = Matrix::Zero(p, p);
  for (const auto& e : edges.edges()) {
    theta(e.first, e.second) = v;
    theta(e.second, e.first) = v;
  }
  const double lambda_min = Eigen::SelfAdjointEigenSolver<Matrix>(theta, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  theta.diagonal().setConstant(std::abs(lambda_min) + 0.1 + u);
  return PrecisionMatrix(std::move(theta));
}

PrecisionMatrix generate_precision(const TopologySpec& spec) {
  return pattern_to_precision(generate_pattern(spec), spec.v, spec.u);
}

}  // namespace stelnet
