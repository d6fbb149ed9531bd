#include "stelnet/errors.hpp"
#include "stelnet/model_selection.hpp"
#include "stelnet/netgen.hpp"
#include "stelnet/samplers.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace stelnet;
using stelnet::testing::random_matrix;

TEST(LambdaGridTest, DefaultGrid) {
  const double lo = std::exp(-6.0);
  const auto g = build_grid(lo, 2.0, 100);
  ASSERT_EQ(g.size(), 100u);
  EXPECT_EQ(g.front(), lo);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_NEAR(g.front(), 0.00247875, 1e-8);
  const double ratio = std::pow(2.0 / lo, 1.0 / 99.0);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g.values()[i] / g.values()[i - 1], ratio, 1e-12);
}

TEST(LambdaGridTest, TwoValuesAndErrors) {
  const auto g = build_grid(0.1, 0.7, 2);
  EXPECT_EQ(g.values(), (std::vector<double>{0.1, 0.7}));
  EXPECT_THROW(build_grid(0.0, 1.0, 10), ConfigError);
  EXPECT_THROW(build_grid(1.0, 0.5, 10), ConfigError);
  EXPECT_THROW(build_grid(0.1, 1.0, 1), ConfigError);
}

TEST(Bic, HandComputedGaussian) {
  Matrix x(4, 2);
  x << 1.0, 0.5, -0.5, 1.0, 0.2, -1.0, -0.7, -0.5;
  Matrix psi(2, 2);
  psi << 2.0, -0.5, -0.5, 1.0;
  EMState st;
  st.mu = Vector::Zero(2);
  st.psi = PrecisionMatrix(psi);
  st.edges = EdgeSet(2, {{0, 1}});
  EMConfig cfg;
  cfg.mode = EstimatorMode::Gaussian;
  const double logdet = std::log(2.0 * 1.0 - 0.25);
  double quad = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double a = x(i, 0), b = x(i, 1);
    quad += 2.0 * a * a - 2 * 0.5 * a * b + b * b;
  }
  const double ll = -4.0 * std::log(2.0 * std::numbers::pi) + 2.0 * logdet - 0.5 * quad;
  EXPECT_NEAR(log_likelihood(st, Dataset(x), cfg), ll, 1e-12);
  EXPECT_NEAR(bic(st, Dataset(x), cfg), -2.0 * ll + std::log(4.0) * 3.0, 1e-12);
}

TEST(Bic, StudentTMatchesDensity) {
  std::mt19937_64 rng(51);
  const Matrix x = random_matrix(5, 3, rng);
  EMState st;
  st.mu = Vector::Zero(3);
  st.psi = PrecisionMatrix(stelnet::testing::random_spd(3, rng));
  st.edges = EdgeSet::complete(3);
  EMConfig cfg;
  cfg.nu = 4.0;
  const double nu = 4.0, p = 3.0;
  double ll = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Vector c = x.row(i).transpose();
    const double q = c.dot(st.psi.matrix() * c);
    ll += std::lgamma((nu + p) / 2) - std::lgamma(nu / 2) - p / 2 * std::log(nu * std::numbers::pi) +
          0.5 * std::log(st.psi.matrix().determinant()) - (nu + p) / 2 * std::log(1 + q / nu);
  }
  EXPECT_NEAR(log_likelihood(st, Dataset(x), cfg), ll, 1e-10);
}

TEST(Bic, FewerEdgesPreferredAtEqualLikelihood) {
  std::mt19937_64 rng(52);
  const Matrix x = random_matrix(20, 3, rng);
  EMState a;
  a.mu = Vector::Zero(3);
  a.psi = PrecisionMatrix(Matrix::Identity(3, 3));
  a.edges = EdgeSet(3);
  EMState b = a;
  b.edges = EdgeSet(3, {{0, 1}});
  EMConfig cfg;
  EXPECT_LT(bic(a, Dataset(x), cfg), bic(b, Dataset(x), cfg));
}

TEST(Select, SingleLambda) {
  std::mt19937_64 rng(53);
  const Dataset d(random_matrix(100, 4, rng));
  EMConfig cfg;
  cfg.mode = EstimatorMode::Gaussian;
  const auto r = select(d, LambdaGrid::single(0.2), cfg);
  EXPECT_EQ(r.chosen_index, 0u);
  EXPECT_EQ(r.chosen_lambda, 0.2);
  ASSERT_TRUE(r.chosen.has_value());
}

TEST(Select, ChosenIsMinimumAndDeterministic) {
  TopologySpec spec;
  spec.p = 8;
  spec.seed = 5;
  DistributionSpec dist;
  dist.kind = DistributionKind::StudentT;
  dist.seed = 6;
  const Dataset d = sample(generate_precision(spec), 300, dist);
  EMConfig cfg;
  const auto grid = build_grid(0.01, 1.0, 12);
  const auto a = select(d, grid, cfg);
  const auto b = select(d, grid, cfg, 3);
  for (const auto& rec : a.records)
    if (!rec.failed) EXPECT_LE(a.records[a.chosen_index].bic, rec.bic);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].bic, b.records[i].bic);
  EXPECT_EQ(a.chosen_index, b.chosen_index);
  EXPECT_EQ(a.chosen->psi.matrix(), b.chosen->psi.matrix());
}

TEST(Select, TiesGoToLargerLambda) {
  // Every lambda above lambda_max gives the same null model and the same BIC.
  std::mt19937_64 rng(54);
  const Dataset d(random_matrix(50, 3, rng));
  EMConfig cfg;
  cfg.mode = EstimatorMode::Gaussian;
  const auto r = select(d, build_grid(50.0, 100.0, 5), cfg);
  EXPECT_EQ(r.chosen_index, 4u);
  EXPECT_EQ(r.chosen_lambda, 100.0);
}

TEST(Bic, DiagonalBeatsDenseOnIndependentNoise) {
  int diagonal = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::mt19937_64 rng(700 + rep);
    Matrix x = random_matrix(500, 5, rng);
    x = x.rowwise() - x.colwise().mean();
    x = x.array().rowwise() / x.array().square().colwise().mean().sqrt();
    const Dataset d(x);
    EMConfig cfg;
    cfg.mode = EstimatorMode::Gaussian;
    cfg.penalty.lambda = 100.0;
    const EMState null_model = estimate(d, cfg);
    cfg.penalty.lambda = 0.0;
    const EMState dense = estimate(d, cfg);
    ASSERT_TRUE(null_model.edges.empty());
    ASSERT_EQ(dense.edges.size(), 10u);
    diagonal += bic(null_model, d, cfg) < bic(dense, d, cfg);
  }
  EXPECT_GE(diagonal, 95);
}

TEST(Select, NullModelOnIndependentNoise) {
  // Each of the 10 pairs clears the log(500) penalty with probability about
  // P(chi2_1 > log 500) = 0.013, so the null model wins roughly 88% of the time.
  int diagonal = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::mt19937_64 rng(700 + rep);
    const Dataset d(random_matrix(500, 5, rng));
    EMConfig cfg;
    cfg.mode = EstimatorMode::Gaussian;
    const auto r = select(d, build_grid(std::exp(-6.0), 2.0, 30), cfg);
    diagonal += r.chosen->edges.empty();
  }
  EXPECT_GE(diagonal, 78);
}

TEST(Select, AllFailThrows) {
  // Duplicate columns make every neighbor covariance singular once an edge appears.
  std::mt19937_64 rng(55);
  Matrix x = random_matrix(40, 3, rng);
  x.col(1) = x.col(0);
  x.col(2) = x.col(0);
  EMConfig cfg;
  cfg.mode = EstimatorMode::Gaussian;
  EXPECT_THROW(select(Dataset(x), build_grid(1e-4, 1e-3, 3), cfg), SelectionError);
}
