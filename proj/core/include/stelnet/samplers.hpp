#pragma once

// Draws datasets from a ground-truth precision matrix under the normal,
// t (scale mixture) and contaminated-normal laws.

#include "stelnet/model_core.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace stelnet {

enum class DistributionKind { Normal, StudentT, ContaminatedNormal };

struct DistributionSpec {
  DistributionKind kind = DistributionKind::Normal;
  double nu = 3.0;                 ///< t only; must exceed 2
  double keep_probability = 0.85;  ///< contaminated only: P(row uses the full covariance)
  std::uint64_t seed = 0;

  void validate() const;
  /// "normal", "t3", "t20", "contaminated" style label.
  std::string label() const;
};

/// Parses "normal", "t<nu>" (e.g. "t3"), "t:<nu>", "contaminated" or
/// "contaminated:<pd>". Throws ConfigError otherwise.
DistributionSpec parse_distribution(std::string_view text);

/// n rows of:
///  - Normal: N(0, theta^-1);
///  - StudentT: Y / sqrt(tau), Y ~ N(0, (nu-2)/nu theta^-1), tau ~ Gamma(nu/2, rate nu/2),
///    so Cov = theta^-1;
///  - ContaminatedNormal: per-row Bernoulli(keep_probability) gate between
///    N(0, theta^-1) and N(0, diag(theta^-1)).
/// The Gaussian draws use the same stream in every mode, so a contaminated
/// sample with keep_probability = 1 equals the normal sample.
Dataset sample(const PrecisionMatrix& theta, int n, const DistributionSpec& spec);

/// n i.i.d. Gamma(shape nu/2, rate nu/2) draws (mean 1).
Vector sample_gamma_tau(double nu, int n, std::uint64_t seed);

}  // namespace stelnet
