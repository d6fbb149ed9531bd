#include "stelnet/samplers.hpp"

#include "stelnet/errors.hpp"
#include "stelnet/rng.hpp"

#include <charconv>
#include <cmath>
#include <random>

namespace stelnet {

void DistributionSpec::validate() const {
  if (kind == DistributionKind::StudentT && !(nu > 2.0)) throw ConfigError("distribution: t requires nu > 2");
  if (kind == DistributionKind::ContaminatedNormal && !(keep_probability >= 0.0 && keep_probability <= 1.0)) {
    throw ConfigError("distribution: keep probability must lie in [0, 1]");
  }
}

namespace {

std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_number(std::string_view s, std::string_view whole) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("bad distribution '" + std::string(whole) + "'");
  return v;
}

}  // namespace

std::string DistributionSpec::label() const {
  switch (kind) {
    case DistributionKind::Normal: return "normal";
    case DistributionKind::StudentT: return "t" + format_number(nu);
    case DistributionKind::ContaminatedNormal:
      return keep_probability == 0.85 ? "contaminated" : "contaminated:" + format_number(keep_probability);
  }
  return "unknown";
}

DistributionSpec parse_distribution(std::string_view text) {
  DistributionSpec spec;
  if (text == "normal" || text == "gaussian") {
    spec.kind = DistributionKind::Normal;
  } else if (text.starts_with("contaminated")) {
    spec.kind = DistributionKind::ContaminatedNormal;
    auto rest = text.substr(std::string_view("contaminated").size());
    if (!rest.empty()) {
      if (rest.front() != ':') throw ConfigError("bad distribution '" + std::string(text) + "'");
      spec.keep_probability = parse_number(rest.substr(1), text);
    }
  } else if (text.starts_with("t") && text.size() > 1) {
    spec.kind = DistributionKind::StudentT;
    auto rest = text.substr(1);
    if (rest.front() == ':') rest = rest.substr(1);
    spec.nu = parse_number(rest, text);
  } else {
    throw ConfigError("unknown distribution '" + std::string(text) + "'");
  }
  spec.validate();
  return spec;
}

Vector sample_gamma_tau(double nu, int n, std::uint64_t seed) {
  if (!(nu > 0.0)) throw DomainError("sample_gamma_tau: nu must be positive");
  if (n < 0) throw ConfigError("sample_gamma_tau: n must be non-negative");
  auto rng = make_stream(seed, {streams::kGamma});
  // std::gamma_distribution takes (shape, scale); rate nu/2 means scale 2/nu.
  std::gamma_distribution<double> gamma(0.5 * nu, 2.0 / nu);
  Vector tau(n);
  for (int i = 0; i < n; ++i) {
    double t = gamma(rng);
    while (!(t > 0.0)) t = gamma(rng);
    tau(i) = t;
  }
  return tau;
}

Dataset sample(const PrecisionMatrix& theta, int n, const DistributionSpec& spec) {
  spec.validate();
  if (n < 1) throw ConfigError("sample: n must be at least 1");
  const auto p = static_cast<Eigen::Index>(theta.dim());

  Eigen::LLT<Matrix> theta_llt(theta.matrix());
  if (theta_llt.info() != Eigen::Success) throw DomainError("sample: theta is not positive definite");
  Matrix cov = theta_llt.solve(Matrix::Identity(p, p));
  cov = (0.5 * (cov + cov.transpose())).eval();

  Matrix scale_cov = cov;
  if (spec.kind == DistributionKind::StudentT) scale_cov *= (spec.nu - 2.0) / spec.nu;
  Eigen::LLT<Matrix> llt(scale_cov);
  if (llt.info() != Eigen::Success) throw DomainError("sample: covariance factorization failed");
  const Matrix lower = llt.matrixL();
  const Vector diag_sd = cov.diagonal().array().sqrt();

  auto normal_rng = make_stream(spec.seed, {streams::kNormal});
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Matrix z(n, p);
  for (int i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) z(i, j) = std_normal(normal_rng);

  Matrix x = z * lower.transpose();
  switch (spec.kind) {
    case DistributionKind::Normal: break;
    case DistributionKind::StudentT: {
      const Vector tau = sample_gamma_tau(spec.nu, n, spec.seed);
      for (int i = 0; i < n; ++i) x.row(i) /= std::sqrt(tau(i));
      break;
    }
    case DistributionKind::ContaminatedNormal: {
      auto gate_rng = make_stream(spec.seed, {streams::kGate});
      std::bernoulli_distribution gate(spec.keep_probability);
      for (int i = 0; i < n; ++i)
        if (!gate(gate_rng)) x.row(i) = z.row(i).cwiseProduct(diag_sd.transpose());
      break;
    }
  }
  if (n < 2) throw DataError("sample: a dataset needs at least 2 rows");
  return Dataset(std::move(x));
}

}  // namespace stelnet
