#include "cli.hpp"

#include "experiment.hpp"

#include "stelnet/errors.hpp"
#include "stelnet/io.hpp"
#include "stelnet/stelnet.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

namespace stelnet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct EstimationFlags {
  std::string mode = "gaussian";
  std::optional<double> nu;
  double alpha = 0.5;
  double lambda_lo = std::exp(-6.0);
  double lambda_hi = 2.0;
  int lambda_count = 100;
  std::string rule = "and";
  double delta = 1e-4;
  int max_iterations = 200;
  int threads = 1;
};

void add_estimation_flags(CLI::App* cmd, EstimationFlags& f) {
  cmd->add_option("--mode", f.mode, "Estimator mode: gaussian or t")->capture_default_str();
  cmd->add_option("--nu", f.nu, "Degrees of freedom of the t estimator (t mode only)");
  cmd->add_option("--alpha", f.alpha, "Elastic-net mixing weight in (0, 1]")->capture_default_str();
  cmd->add_option("--lambda-lo", f.lambda_lo, "Smallest lambda of the grid")->capture_default_str();
  cmd->add_option("--lambda-hi", f.lambda_hi, "Largest lambda of the grid")->capture_default_str();
  cmd->add_option("--lambda-count", f.lambda_count, "Number of grid values")->capture_default_str();
  cmd->add_option("--rule", f.rule, "Edge rule: and or or")->capture_default_str();
  cmd->add_option("--delta", f.delta, "EM stopping threshold on max |change|")->capture_default_str();
  cmd->add_option("--max-iterations", f.max_iterations, "EM iteration cap")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads")->capture_default_str();
}

EMConfig to_config(const EstimationFlags& f) {
  EMConfig cfg;
  cfg.mode = parse_estimator_mode(f.mode);
  if (cfg.mode == EstimatorMode::StudentT) {
    if (!f.nu) throw ConfigError("--nu is required in t mode");
    cfg.nu = *f.nu;
  } else if (f.nu) {
    throw ConfigError("--nu applies to t mode only");
  }
  cfg.penalty.alpha = f.alpha;
  cfg.rule = parse_edge_rule(f.rule);
  cfg.delta = f.delta;
  cfg.max_iterations = f.max_iterations;
  cfg.validate();
  if (f.threads < 1) throw ConfigError("--threads must be at least 1");
  return cfg;
}

json config_json(const EstimationFlags& f, const EMConfig& cfg) {
  json j{{"mode", to_string(cfg.mode)},
         {"alpha", cfg.penalty.alpha},
         {"lambda", {{"lo", f.lambda_lo}, {"hi", f.lambda_hi}, {"count", f.lambda_count}}},
         {"rule", to_string(cfg.rule)},
         {"delta", cfg.delta},
         {"max_iterations", cfg.max_iterations}};
  if (cfg.mode == EstimatorMode::StudentT) j["nu"] = cfg.nu;
  return j;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  io::write_file(path.string(), text);
}

template <typename Writer>
void write_stream(const fs::path& path, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  write_text(path, os.str());
}

PartialCorrelationMatrix load_network(const std::string& path, std::vector<std::string>& nodes) {
  io::NetworkDocument doc = io::network_from_json(io::read_file(path));
  nodes = doc.nodes;
  return PartialCorrelationMatrix(doc.partial_correlation);
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string manifest;
  std::string out = "simulation";
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  ExperimentManifest m = parse_manifest(io::read_file(a.manifest));
  if (a.seed) {
    // Re-derive the truth seeds from the override as parse_manifest would.
    m.seed = *a.seed;
    for (auto& t : m.topologies) t.seed = derive_seed(m.seed, {streams::kTopology});
  }
  if (a.threads < 1) throw ConfigError("--threads must be at least 1");
  const auto rows = run_experiment(m, a.threads);
  const fs::path dir(a.out);
  write_stream(dir / "metrics.csv", [&](std::ostream& os) { write_rows_csv(os, rows); });
  write_text(dir / "summary.json", summary_json(m, rows) + "\n");
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const ExperimentRow& r) { return r.failed; });
  out << "simulate: " << rows.size() << " rows (" << failed << " failed) -> " << (dir / "metrics.csv").string() << '\n';
  return kExitOk;
}

struct GenerateArgs {
  std::string topology = "scale-free";
  int p = 20;
  double v = 0.3;
  double u = 0.1;
  std::uint64_t seed = 1;
  std::string out = "truth";
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  TopologySpec spec;
  spec.kind = parse_topology(a.topology);
  spec.p = a.p;
  spec.v = a.v;
  spec.u = a.u;
  spec.seed = a.seed;
  spec.validate();
  const EdgeSet edges = generate_pattern(spec);
  const PrecisionMatrix theta = pattern_to_precision(edges, spec.v, spec.u);
  const fs::path dir(a.out);
  io::NetworkDocument doc;
  for (int k = 0; k < a.p; ++k) doc.nodes.push_back("V" + std::to_string(k + 1));
  write_stream(dir / "precision.csv", [&](std::ostream& os) { io::write_table_csv(os, doc.nodes, theta.matrix()); });
  write_stream(dir / "edges.csv", [&](std::ostream& os) { io::write_edges_csv(os, edges); });
  doc.partial_correlation = precision_to_partial_correlation(theta).matrix();
  doc.extra_json = json{{"topology", to_string(spec.kind)}, {"seed", spec.seed}, {"v", spec.v}, {"u", spec.u}}.dump();
  write_text(dir / "network.json", io::network_to_json(doc) + "\n");
  out << "generate: " << to_string(spec.kind) << " p=" << a.p << " edges=" << edges.size() << '\n';
  return kExitOk;
}

struct SampleArgs {
  std::string precision;
  int n = 100;
  std::string distribution = "normal";
  std::uint64_t seed = 1;
  std::string out = "data.csv";
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  auto in = open_input(a.precision);
  const io::NamedDataset table = io::read_table_csv(in);
  const PrecisionMatrix theta(table.values);
  DistributionSpec spec = parse_distribution(a.distribution);
  spec.seed = a.seed;
  const Dataset data = sample(theta, a.n, spec);
  write_stream(a.out, [&](std::ostream& os) { io::write_table_csv(os, table.names, data.values()); });
  out << "sample: " << a.n << " rows of " << spec.label() << " -> " << a.out << '\n';
  return kExitOk;
}

struct EstimateArgs {
  std::string data;
  std::string out = "network.json";
  std::string bic_csv;
  EstimationFlags flags;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const EMConfig cfg = to_config(a.flags);
  const LambdaGrid grid = build_grid(a.flags.lambda_lo, a.flags.lambda_hi, a.flags.lambda_count);
  auto in = open_input(a.data);
  io::NamedDataset table = io::read_table_csv(in);
  const Dataset data(table.values);
  const SelectionReport report = select(data, grid, cfg, a.flags.threads);
  const EMState& st = *report.chosen;

  io::NetworkDocument doc;
  doc.nodes = table.names;
  doc.partial_correlation = precision_to_partial_correlation(st.psi).matrix();
  doc.lambda = report.chosen_lambda;
  doc.bic = report.records[report.chosen_index].bic;
  json extra{{"config", config_json(a.flags, cfg)},
             {"n", data.rows()},
             {"iterations", st.iteration},
             {"converged", st.converged},
             {"selection", json::parse(io::selection_report_to_json(report))}};
  doc.extra_json = extra.dump();
  write_text(a.out, io::network_to_json(doc) + "\n");
  if (!a.bic_csv.empty()) write_stream(a.bic_csv, [&](std::ostream& os) { io::write_selection_csv(os, report); });
  out << "estimate: lambda=" << io::format_double(report.chosen_lambda) << " edges=" << st.edges.size() << " -> "
      << a.out << '\n';
  return kExitOk;
}

struct AnalyzeArgs {
  std::string network;
  std::string out = "analysis";
  bool absolute = false;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  std::vector<std::string> nodes;
  const PartialCorrelationMatrix pc = load_network(a.network, nodes);
  const StrengthOptions opt{a.absolute};
  const NetworkMeasures m = measures(pc, opt);
  const NodeStatistics stats = node_statistics(pc, opt);
  const Centralities c = centralities(pc, opt);
  const std::vector<int> hist = degree_histogram(pc);
  const fs::path dir(a.out);
  write_stream(dir / "measures.csv", [&](std::ostream& os) { io::write_measures_csv(os, {"network"}, {m}); });
  write_stream(dir / "centralities.csv", [&](std::ostream& os) { io::write_centralities_csv(os, nodes, c, stats); });
  write_stream(dir / "degree_histogram.csv", [&](std::ostream& os) {
    os << "degree,count\n";
    for (std::size_t d = 0; d < hist.size(); ++d) os << d << ',' << hist[d] << '\n';
  });
  out << "analyze: p=" << pc.dim() << " edges=" << m.edge_count << " -> " << dir.string() << '\n';
  return kExitOk;
}

struct ShockArgs {
  std::string network;
  std::string node;
  std::string out = "shock.json";
};

int resolve_node(const std::string& text, const std::vector<std::string>& nodes) {
  auto it = std::find(nodes.begin(), nodes.end(), text);
  if (it != nodes.end()) return static_cast<int>(it - nodes.begin());
  int index = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), index);
  if (ec != std::errc() || ptr != text.data() + text.size() || index < 1 || index > static_cast<int>(nodes.size()))
    throw ConfigError("unknown node '" + text + "'");
  return index - 1;
}

int cmd_shock(const ShockArgs& a, std::ostream& out) {
  std::vector<std::string> nodes;
  const PartialCorrelationMatrix pc = load_network(a.network, nodes);
  const ShockResult r = shock(pc, resolve_node(a.node, nodes));
  write_text(a.out, io::shock_to_json(r, nodes) + "\n");
  out << "shock: node " << nodes[static_cast<std::size_t>(r.node)] << " total=" << io::format_double(r.total_impact)
      << " -> " << a.out << '\n';
  return kExitOk;
}

struct PipelineArgs {
  std::string prices;
  std::string out = "pipeline";
  int window = 0;
  int step = 0;
  int window_months = 12;
  int step_months = 1;
  bool absolute = false;
  EstimationFlags flags;
};

std::vector<GarchFit> fit_all(const ReturnTable& returns, int threads) {
  const auto k = static_cast<std::size_t>(returns.values.cols());
  std::vector<std::optional<GarchFit>> fits(k);
  std::vector<std::string> errors(k);
  auto work = [&](std::size_t s) {
    try {
      fits[s] = fit_ar_garch(returns.values.col(static_cast<Eigen::Index>(s)));
    } catch (const Error& e) {
      errors[s] = e.what();
    }
  };
  const int workers = std::clamp(threads, 1, static_cast<int>(k));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t s = next++; s < k; s = next++) work(s);
    });
  for (std::size_t s = next++; s < k; s = next++) work(s);
  for (auto& t : pool) t.join();

  std::vector<GarchFit> out;
  for (std::size_t s = 0; s < k; ++s) {
    if (!fits[s]) throw FitError("GARCH stage, series " + returns.names[s] + ": " + errors[s]);
    out.push_back(std::move(*fits[s]));
  }
  return out;
}

int cmd_pipeline(const PipelineArgs& a, std::ostream& out) {
  const EMConfig cfg = to_config(a.flags);
  const LambdaGrid grid = build_grid(a.flags.lambda_lo, a.flags.lambda_hi, a.flags.lambda_count);
  auto in = open_input(a.prices);
  PriceTable prices = io::read_price_csv(in);
  prices.validate();

  const ReturnTable returns = complete_rows(log_returns(prices));
  if (returns.values.rows() < 2) throw DataError("returns stage: fewer than 2 complete rows");
  const std::vector<GarchFit> fits = fit_all(returns, a.flags.threads);

  const Eigen::Index t_res = returns.values.rows() - 1;
  Matrix residuals(t_res, returns.values.cols());
  for (std::size_t s = 0; s < fits.size(); ++s) residuals.col(static_cast<Eigen::Index>(s)) = fits[s].residuals;
  std::vector<std::string> res_dates;
  if (!returns.dates.empty()) res_dates.assign(returns.dates.begin() + 1, returns.dates.end());

  std::vector<Window> windows;
  std::string window_kind;
  const bool iso_dates = !res_dates.empty() && res_dates.front().size() >= 7 && res_dates.front()[4] == '-';
  if (a.window > 0 || !iso_dates) {
    const int w = a.window > 0 ? a.window : 252;
    const int st = a.step > 0 ? a.step : (a.window > 0 ? w : 21);
    if (t_res < w) throw DataError("window stage: " + std::to_string(t_res) + " residual rows < window " + std::to_string(w));
    windows = windows_by_rows(static_cast<std::size_t>(t_res), static_cast<std::size_t>(w), static_cast<std::size_t>(st));
    window_kind = "rows";
  } else {
    windows = windows_by_months(res_dates, a.window_months, a.step_months);
    window_kind = "months";
  }
  if (windows.empty()) throw DataError("window stage: no complete window fits the data");

  const auto estimates = rolling_estimate(residuals, windows, grid, cfg, a.flags.threads);

  const fs::path dir(a.out);
  write_stream(dir / "returns.csv",
               [&](std::ostream& os) { io::write_dated_csv(os, returns.dates, returns.names, returns.values); });
  write_stream(dir / "residuals.csv",
               [&](std::ostream& os) { io::write_dated_csv(os, res_dates, returns.names, residuals); });
  write_stream(dir / "garch.csv", [&](std::ostream& os) {
    os << "series,c,phi,omega,a,b,log_likelihood,ks_normal,ks_normal_reject,nu_hat,ks_t,ks_t_reject,critical\n";
    for (std::size_t s = 0; s < fits.size(); ++s) {
      const GarchFit& f = fits[s];
      const KsResult kn = ks_statistic(f.residuals, {KsReferenceKind::Normal, 0.0});
      const double nu_hat = fit_t_dof(f.residuals);
      const KsResult kt = ks_statistic(f.residuals, {KsReferenceKind::StudentT, nu_hat});
      os << returns.names[s] << ',' << io::format_double(f.params.c) << ',' << io::format_double(f.params.phi) << ','
         << io::format_double(f.params.omega) << ',' << io::format_double(f.params.a) << ','
         << io::format_double(f.params.b) << ',' << io::format_double(f.log_likelihood) << ','
         << io::format_double(kn.statistic) << ',' << (kn.reject ? 1 : 0) << ',' << io::format_double(nu_hat) << ','
         << io::format_double(kt.statistic) << ',' << (kt.reject ? 1 : 0) << ',' << io::format_double(kn.critical)
         << '\n';
    }
  });

  std::vector<std::string> labels;
  std::vector<NetworkMeasures> rows;
  std::size_t failures = 0;
  std::ostringstream strength;
  strength << "window,label,begin,end,mean_strength,edges,lambda,status\n";
  for (std::size_t w = 0; w < estimates.size(); ++w) {
    const WindowEstimate& e = estimates[w];
    char name[32];
    std::snprintf(name, sizeof name, "window_%03zu.json", w + 1);
    strength << w + 1 << ',' << e.window.label << ',' << e.window.begin + 1 << ',' << e.window.end << ',';
    if (!e.error.empty()) {
      ++failures;
      strength << "NA,NA,NA,failed\n";
      write_text(dir / "windows" / name, json{{"window", w + 1}, {"label", e.window.label}, {"error", e.error}}.dump(2) + "\n");
      continue;
    }
    const NetworkMeasures m = measures(*e.partial_correlation, StrengthOptions{a.absolute});
    labels.push_back(e.window.label);
    rows.push_back(m);
    strength << io::format_double(m.mean_strength) << ',' << m.edge_count << ','
             << io::format_double(e.report->chosen_lambda) << ",ok\n";
    io::NetworkDocument doc;
    doc.nodes = returns.names;
    doc.partial_correlation = e.partial_correlation->matrix();
    doc.lambda = e.report->chosen_lambda;
    doc.bic = e.report->records[e.report->chosen_index].bic;
    doc.extra_json = json{{"window", w + 1},
                          {"label", e.window.label},
                          {"begin", e.window.begin + 1},
                          {"end", e.window.end},
                          {"config", config_json(a.flags, cfg)}}
                         .dump();
    write_text(dir / "windows" / name, io::network_to_json(doc) + "\n");
  }
  write_text(dir / "strength.csv", strength.str());
  write_stream(dir / "measures.csv", [&](std::ostream& os) { io::write_measures_csv(os, labels, rows); });
  out << "pipeline: " << fits.size() << " series, " << estimates.size() << " " << window_kind << " windows ("
      << failures << " failed) -> " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse partial-correlation networks for heavy-tailed data", "stelnet"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment from a JSON manifest");
  simulate->add_option("--manifest", sim.manifest, "Manifest JSON file")->required();
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Override the manifest seed");
  simulate->add_option("--threads", sim.threads, "Worker threads")->capture_default_str();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a true precision matrix");
  generate->add_option("--topology", gen.topology, "Topology name")->capture_default_str();
  generate->add_option("--p", gen.p, "Dimension")->capture_default_str();
  generate->add_option("--v", gen.v, "Off-diagonal magnitude")->capture_default_str();
  generate->add_option("--u", gen.u, "Diagonal boost")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  generate->add_option("--out", gen.out, "Output directory")->capture_default_str();

  SampleArgs smp;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a dataset from a precision matrix");
  sample_cmd->add_option("--precision", smp.precision, "Precision matrix CSV with a header row")->required();
  sample_cmd->add_option("--n", smp.n, "Rows")->capture_default_str();
  sample_cmd->add_option("--distribution", smp.distribution, "normal, t<nu> or contaminated[:pd]")
      ->capture_default_str();
  sample_cmd->add_option("--seed", smp.seed, "Seed")->capture_default_str();
  sample_cmd->add_option("--out", smp.out, "Output CSV")->capture_default_str();

  EstimateArgs est;
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate a network from a data CSV");
  estimate_cmd->add_option("--data", est.data, "Data CSV with a header row")->required();
  estimate_cmd->add_option("--out", est.out, "Network JSON")->capture_default_str();
  estimate_cmd->add_option("--bic-csv", est.bic_csv, "Also write the BIC table as CSV");
  add_estimation_flags(estimate_cmd, est.flags);
  std::uint64_t unused_seed = 0;
  estimate_cmd->add_option("--seed", unused_seed, "Accepted for uniformity; estimation is deterministic");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Network measures and centralities");
  analyze->add_option("--network", an.network, "Network JSON")->required();
  analyze->add_option("--out", an.out, "Output directory")->capture_default_str();
  analyze->add_flag("--absolute-strength", an.absolute, "Sum |weights| for strength");

  ShockArgs sh;
  auto* shock_cmd = app.add_subcommand("shock", "Steady state of a unit shock");
  shock_cmd->add_option("--network", sh.network, "Network JSON")->required();
  shock_cmd->add_option("--node", sh.node, "Node name or 1-based index")->required();
  shock_cmd->add_option("--out", sh.out, "Output JSON")->capture_default_str();

  PipelineArgs pl;
  pl.flags.lambda_hi = 1.5;
  auto* pipeline = app.add_subcommand("pipeline", "Prices to rolling-window networks");
  pipeline->add_option("--prices", pl.prices, "Price CSV (first column ISO dates)")->required();
  pipeline->add_option("--out", pl.out, "Output directory")->capture_default_str();
  pipeline->add_option("--window", pl.window, "Window length in rows (default 252 without dates)");
  pipeline->add_option("--step", pl.step, "Window step in rows (default 21 without dates)");
  pipeline->add_option("--window-months", pl.window_months, "Window length in months")->capture_default_str();
  pipeline->add_option("--step-months", pl.step_months, "Window step in months")->capture_default_str();
  pipeline->add_flag("--absolute-strength", pl.absolute, "Sum |weights| for strength");
  add_estimation_flags(pipeline, pl.flags);
  std::uint64_t pipeline_seed = 0;
  pipeline->add_option("--seed", pipeline_seed, "Accepted for uniformity; the pipeline is deterministic");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out);
    if (*generate) return cmd_generate(gen, out);
    if (*sample_cmd) return cmd_sample(smp, out);
    if (*estimate_cmd) return cmd_estimate(est, out);
    if (*analyze) return cmd_analyze(an, out);
    if (*shock_cmd) return cmd_shock(sh, out);
    if (*pipeline) return cmd_pipeline(pl, out);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << " (spectral radius " << io::format_double(e.radius()) << ")\n";
    return kExitEstimation;
  } catch (const EstimationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace stelnet::cli
