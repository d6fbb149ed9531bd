#pragma once

// Monte Carlo experiment harness: truth generation, sampling, BIC selection
// and scoring for every (topology, distribution, n, run, estimator) cell.

#include "stelnet/em_estimator.hpp"
#include "stelnet/netgen.hpp"
#include "stelnet/samplers.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stelnet::cli {

struct EstimatorSpec {
  EstimatorMode mode = EstimatorMode::StudentT;
  double alpha = 0.5;
  std::string label() const;
};

struct ExperimentManifest {
  int p = 20;
  std::vector<TopologySpec> topologies;
  std::vector<DistributionSpec> distributions;
  std::vector<int> sample_sizes{100, 250, 500};
  int runs = 1;
  std::vector<EstimatorSpec> estimators;
  double nu = 3.0;  ///< fixed degrees of freedom of the t estimator
  double lambda_lo = 0.0024787521766663585;  // e^-6
  double lambda_hi = 2.0;
  int lambda_count = 100;
  EdgeRule rule = EdgeRule::And;
  double delta = 1e-4;
  int max_iterations = 200;
  std::uint64_t seed = 1;

  /// Throws ConfigError on invalid content.
  void validate() const;
};

/// Parses the JSON manifest, filling defaults. Throws ConfigError/DataError.
ExperimentManifest parse_manifest(const std::string& json_text);
/// Fully resolved manifest (every default spelled out).
std::string manifest_to_json(const ExperimentManifest& m);

struct ExperimentRow {
  int run = 0;
  std::string topology;
  std::string distribution;
  int n = 0;
  std::string estimator;
  double alpha = 0.0;
  double lambda = 0.0;
  double f1 = 0.0;
  double frobenius = 0.0;
  std::size_t edges = 0;
  std::size_t true_edges = 0;
  bool failed = false;
  std::string message;
};

/// Runs every cell. Rows come back in cell order whatever the thread count.
std::vector<ExperimentRow> run_experiment(const ExperimentManifest& manifest, int threads);

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::string summary_json(const ExperimentManifest& manifest, const std::vector<ExperimentRow>& rows);

double median(std::vector<double> values);

}  // namespace stelnet::cli
