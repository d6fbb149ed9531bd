#include "experiment.hpp"

#include "stelnet/errors.hpp"
#include "stelnet/io.hpp"
#include "stelnet/metrics.hpp"
#include "stelnet/model_selection.hpp"
#include "stelnet/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <map>
#include <optional>
#include <ostream>
#include <thread>
#include <tuple>

namespace stelnet::cli {

using nlohmann::json;

std::string EstimatorSpec::label() const { return to_string(mode); }

void ExperimentManifest::validate() const {
  if (p < 4) throw ConfigError("manifest: p must be at least 4");
  if (topologies.empty()) throw ConfigError("manifest: no topologies");
  if (distributions.empty()) throw ConfigError("manifest: no distributions");
  if (sample_sizes.empty()) throw ConfigError("manifest: no sample sizes");
  for (int n : sample_sizes)
    if (n < 2) throw ConfigError("manifest: sample sizes must be at least 2");
  if (runs < 1) throw ConfigError("manifest: runs must be at least 1");
  if (estimators.empty()) throw ConfigError("manifest: no estimators");
  for (const auto& t : topologies) t.validate();
  for (const auto& d : distributions) d.validate();
  for (const auto& e : estimators) PenaltyConfig{e.alpha, 0.0}.validate();
  if (!(nu > 2.0)) throw ConfigError("manifest: nu must exceed 2");
  build_grid(lambda_lo, lambda_hi, lambda_count);
  if (!(delta > 0.0)) throw ConfigError("manifest: delta must be positive");
  if (max_iterations < 1) throw ConfigError("manifest: max_iterations must be positive");
}

namespace {

template <typename T>
std::vector<T> as_list(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

}  // namespace

ExperimentManifest parse_manifest(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest: malformed JSON (") + e.what() + ")");
  }
  if (!j.is_object()) throw ConfigError("manifest: top level must be an object");

  ExperimentManifest m;
  try {
    m.p = j.value("p", m.p);
    m.seed = j.value("seed", m.seed);
    m.runs = j.value("runs", m.runs);
    m.nu = j.value("nu", m.nu);
    m.delta = j.value("delta", m.delta);
    m.max_iterations = j.value("max_iterations", m.max_iterations);
    if (j.contains("n")) m.sample_sizes = as_list<int>(j["n"]);
    if (j.contains("rule")) m.rule = parse_edge_rule(j["rule"].get<std::string>());
    if (j.contains("lambda")) {
      const auto& l = j["lambda"];
      m.lambda_lo = l.value("lo", m.lambda_lo);
      m.lambda_hi = l.value("hi", m.lambda_hi);
      m.lambda_count = l.value("count", m.lambda_count);
    }

    const json topo = j.contains("topologies") ? j["topologies"] : j.value("topology", json("scale-free"));
    const json topo_params = j.value("topology_params", json::object());
    const std::uint64_t topo_seed = j.value("topology_seed", derive_seed(m.seed, {streams::kTopology}));
    for (const auto& name : as_list<std::string>(topo)) {
      TopologySpec t;
      t.kind = parse_topology(name);
      t.p = m.p;
      t.seed = topo_seed;
      t.v = topo_params.value("v", t.v);
      t.u = topo_params.value("u", t.u);
      t.edge_probability = topo_params.value("edge_probability", t.edge_probability);
      t.bandwidth = topo_params.value("bandwidth", t.bandwidth);
      t.groups = topo_params.value("groups", t.groups);
      t.within_probability = topo_params.value("within_probability", t.within_probability);
      t.ring_neighbors = topo_params.value("ring_neighbors", t.ring_neighbors);
      t.rewire_probability = topo_params.value("rewire_probability", t.rewire_probability);
      t.core_fraction = topo_params.value("core_fraction", t.core_fraction);
      t.core_core = topo_params.value("core_core", t.core_core);
      t.core_periphery = topo_params.value("core_periphery", t.core_periphery);
      t.periphery_periphery = topo_params.value("periphery_periphery", t.periphery_periphery);
      m.topologies.push_back(t);
    }

    const json dist = j.contains("distributions") ? j["distributions"] : j.value("distribution", json("normal"));
    for (const auto& name : as_list<std::string>(dist)) m.distributions.push_back(parse_distribution(name));

    const auto modes = as_list<std::string>(j.value("estimators", json::array({"t", "gaussian"})));
    const auto alphas = as_list<double>(j.value("alpha", json(0.5)));
    for (const auto& mode : modes)
      for (double a : alphas) m.estimators.push_back({parse_estimator_mode(mode), a});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  m.validate();
  return m;
}

std::string manifest_to_json(const ExperimentManifest& m) {
  json j;
  j["p"] = m.p;
  j["seed"] = m.seed;
  j["runs"] = m.runs;
  j["n"] = m.sample_sizes;
  j["nu"] = m.nu;
  j["delta"] = m.delta;
  j["max_iterations"] = m.max_iterations;
  j["rule"] = to_string(m.rule);
  j["lambda"] = {{"lo", m.lambda_lo}, {"hi", m.lambda_hi}, {"count", m.lambda_count}};
  json topos = json::array();
  for (const auto& t : m.topologies) {
    topos.push_back({{"kind", to_string(t.kind)},
                     {"p", t.p},
                     {"seed", t.seed},
                     {"v", t.v},
                     {"u", t.u},
                     {"edge_probability", t.edge_probability > 0.0 ? t.edge_probability : std::min(1.0, 3.0 / t.p)},
                     {"bandwidth", t.bandwidth},
                     {"groups", t.groups},
                     {"within_probability", t.within_probability},
                     {"ring_neighbors", t.ring_neighbors},
                     {"rewire_probability", t.rewire_probability},
                     {"core_fraction", t.core_fraction},
                     {"core_core", t.core_core},
                     {"core_periphery", t.core_periphery},
                     {"periphery_periphery", t.periphery_periphery}});
  }
  j["topologies"] = topos;
  json dists = json::array();
  for (const auto& d : m.distributions) {
    json dj{{"label", d.label()}};
    if (d.kind == DistributionKind::StudentT) dj["nu"] = d.nu;
    if (d.kind == DistributionKind::ContaminatedNormal) dj["keep_probability"] = d.keep_probability;
    dists.push_back(dj);
  }
  j["distributions"] = dists;
  json ests = json::array();
  for (const auto& e : m.estimators) ests.push_back({{"mode", e.label()}, {"alpha", e.alpha}});
  j["estimators"] = ests;
  return j.dump(2);
}

namespace {

struct Cell {
  std::size_t topology;
  std::size_t distribution;
  std::size_t size;
  int run;
};

std::vector<ExperimentRow> run_cell(const ExperimentManifest& m, const Cell& cell, const PrecisionMatrix& theta,
                                    const EdgeSet& truth_edges, const PartialCorrelationMatrix& truth_pc,
                                    const LambdaGrid& grid) {
  DistributionSpec dist = m.distributions[cell.distribution];
  dist.seed = derive_seed(m.seed, {streams::kExperiment, cell.topology, cell.distribution, cell.size,
                                   static_cast<std::uint64_t>(cell.run)});
  const int n = m.sample_sizes[cell.size];

  std::vector<ExperimentRow> rows;
  std::optional<Dataset> data;
  std::string sample_error;
  try {
    data = sample(theta, n, dist);
  } catch (const Error& e) {
    sample_error = e.what();
  }

  for (const auto& est : m.estimators) {
    ExperimentRow row;
    row.run = cell.run + 1;
    row.topology = to_string(m.topologies[cell.topology].kind);
    row.distribution = dist.label();
    row.n = n;
    row.estimator = est.label();
    row.alpha = est.alpha;
    row.true_edges = truth_edges.size();
    if (!data) {
      row.failed = true;
      row.message = sample_error;
      rows.push_back(row);
      continue;
    }
    EMConfig cfg;
    cfg.mode = est.mode;
    cfg.nu = m.nu;
    cfg.penalty.alpha = est.alpha;
    cfg.rule = m.rule;
    cfg.delta = m.delta;
    cfg.max_iterations = m.max_iterations;
    try {
      const SelectionReport report = select(*data, grid, cfg);
      const EMState& st = *report.chosen;
      row.lambda = report.chosen_lambda;
      row.edges = st.edges.size();
      row.f1 = f1(confusion(st.edges, truth_edges));
      row.frobenius = frobenius_partial_corr(precision_to_partial_correlation(st.psi), truth_pc);
    } catch (const Error& e) {
      row.failed = true;
      row.message = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentManifest& m, int threads) {
  m.validate();
  const LambdaGrid grid = build_grid(m.lambda_lo, m.lambda_hi, m.lambda_count);

  std::vector<PrecisionMatrix> thetas;
  std::vector<EdgeSet> truths;
  std::vector<PartialCorrelationMatrix> truth_pcs;
  for (const auto& t : m.topologies) {
    truths.push_back(generate_pattern(t));
    thetas.push_back(pattern_to_precision(truths.back(), t.v, t.u));
    truth_pcs.push_back(precision_to_partial_correlation(thetas.back()));
  }

  std::vector<Cell> cells;
  for (std::size_t t = 0; t < m.topologies.size(); ++t)
    for (std::size_t d = 0; d < m.distributions.size(); ++d)
      for (std::size_t s = 0; s < m.sample_sizes.size(); ++s)
        for (int r = 0; r < m.runs; ++r) cells.push_back({t, d, s, r});

  std::vector<std::vector<ExperimentRow>> results(cells.size());
  auto work = [&](std::size_t i) {
    const Cell& c = cells[i];
    results[i] = run_cell(m, c, thetas[c.topology], truths[c.topology], truth_pcs[c.topology], grid);
  };
  const int workers = std::clamp(threads, 1, static_cast<int>(cells.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) work(i);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<ExperimentRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "run,topology,distribution,n,estimator,alpha,lambda,f1,frobenius,edges,true_edges,status\n";
  for (const auto& r : rows) {
    out << r.run << ',' << r.topology << ',' << r.distribution << ',' << r.n << ',' << r.estimator << ','
        << io::format_double(r.alpha) << ',';
    if (r.failed) {
      out << "NA,NA,NA,NA," << r.true_edges << ",failed\n";
    } else {
      out << io::format_double(r.lambda) << ',' << io::format_double(r.f1) << ',' << io::format_double(r.frobenius) << ','
          << r.edges << ',' << r.true_edges << ",ok\n";
    }
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::string summary_json(const ExperimentManifest& m, const std::vector<ExperimentRow>& rows) {
  using Key = std::tuple<std::string, std::string, int, std::string, double>;
  std::map<Key, std::tuple<std::vector<double>, std::vector<double>, int>> groups;
  std::vector<Key> order;
  for (const auto& r : rows) {
    const Key k{r.topology, r.distribution, r.n, r.estimator, r.alpha};
    if (!groups.count(k)) order.push_back(k);
    auto& [f1s, fds, failures] = groups[k];
    if (r.failed) {
      ++failures;
    } else {
      f1s.push_back(r.f1);
      fds.push_back(r.frobenius);
    }
  }
  json cells = json::array();
  for (const auto& k : order) {
    const auto& [f1s, fds, failures] = groups[k];
    cells.push_back({{"topology", std::get<0>(k)},
                     {"distribution", std::get<1>(k)},
                     {"n", std::get<2>(k)},
                     {"estimator", std::get<3>(k)},
                     {"alpha", std::get<4>(k)},
                     {"runs", f1s.size() + static_cast<std::size_t>(failures)},
                     {"failures", failures},
                     {"median_f1", median(f1s)},
                     {"median_frobenius", median(fds)}});
  }
  json j;
  j["manifest"] = json::parse(manifest_to_json(m));
  j["cells"] = cells;
  return j.dump(2);
}

}  // namespace stelnet::cli
