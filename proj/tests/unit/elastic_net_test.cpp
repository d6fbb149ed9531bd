#include "stelnet/elastic_net.hpp"
#include "stelnet/errors.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace stelnet;
using stelnet::testing::random_matrix;

namespace {

// Columns with mean 0 and X'X/n = I.
Matrix orthonormal_design(Eigen::Index n, Eigen::Index k, std::mt19937_64& rng) {
  Matrix x = random_matrix(n, k, rng);
  x = x.rowwise() - x.colwise().mean();
  Eigen::HouseholderQR<Matrix> qr(x);
  Matrix q = qr.householderQ() * Matrix::Identity(n, k);
  return q * std::sqrt(static_cast<double>(n));
}

}  // namespace

TEST(SoftThreshold, ClosedForm) {
  EXPECT_EQ(soft_threshold(3.0, 1.0), 2.0);
  EXPECT_EQ(soft_threshold(-3.0, 1.0), -2.0);
  EXPECT_EQ(soft_threshold(0.5, 1.0), 0.0);
}

TEST(ElasticNet, OrthonormalDesignMatchesSoftThreshold) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix x = orthonormal_design(60, 5, rng);
    const Vector y = random_matrix(60, 1, rng).col(0);
    const double lambda = 0.05 + 0.02 * rep;
    const auto fit = solve(x, y, {1.0, lambda});
    const Vector c = x.transpose() * (y.array() - y.mean()).matrix() / 60.0;
    for (Eigen::Index j = 0; j < 5; ++j) EXPECT_NEAR(fit.coefficients(j), soft_threshold(c(j), lambda), 1e-8);
    // elastic net on the same design: soft(c, la)/(1 + l(1-a))
    const auto enet = solve(x, y, {0.5, lambda});
    for (Eigen::Index j = 0; j < 5; ++j)
      EXPECT_NEAR(enet.coefficients(j), soft_threshold(c(j), 0.5 * lambda) / (1.0 + 0.5 * lambda), 1e-8);
  }
}

TEST(ElasticNet, ZeroLambdaIsLeastSquares) {
  std::mt19937_64 rng(2);
  const Matrix x = random_matrix(80, 6, rng);
  const Vector y = random_matrix(80, 1, rng).col(0) + 2.0 * Vector::Ones(80);
  const auto fit = solve(x, y, {0.5, 0.0});
  Matrix design(80, 7);
  design << Vector::Ones(80), x;
  const Vector beta = (design.transpose() * design).ldlt().solve(design.transpose() * y);
  EXPECT_NEAR(fit.intercept, beta(0), 1e-8);
  for (Eigen::Index j = 0; j < 6; ++j) EXPECT_NEAR(fit.coefficients(j), beta(j + 1), 1e-8);
}

TEST(ElasticNet, LambdaMaxGivesZeros) {
  std::mt19937_64 rng(4);
  const Matrix x = random_matrix(50, 4, rng);
  const Vector y = random_matrix(50, 1, rng).col(0);
  for (double alpha : {0.3, 0.5, 1.0}) {
    const double lmax = lambda_max(x, y, alpha);
    const auto at = solve(x, y, {alpha, lmax});
    EXPECT_TRUE(at.coefficients.isZero(0.0));
    EXPECT_DOUBLE_EQ(at.intercept, y.mean());
    const auto above = solve(x, y, {alpha, 1.01 * lmax});
    EXPECT_TRUE(above.coefficients.isZero(0.0));
    const auto below = solve(x, y, {alpha, 0.99 * lmax});
    EXPECT_FALSE(below.coefficients.isZero(0.0));
  }
}

TEST(ElasticNet, LambdaMaxCases) {
  Matrix x(4, 1);
  x << 1, -1, 1, -1;
  Vector y(4);
  y << 1, 1, -1, -1;
  EXPECT_EQ(lambda_max(x, y, 1.0), 0.0);
  Vector y2(4);
  y2 << 2, -1, 0.5, 0.5;
  const double expected = std::abs(x.col(0).dot(y2.array().matrix() - y2.mean() * Vector::Ones(4))) / 4.0;
  EXPECT_NEAR(lambda_max(x, y2, 1.0), expected, 1e-15);
  EXPECT_THROW(lambda_max(x, y2, 0.0), DomainError);
}

TEST(ElasticNet, ObjectiveNonIncreasing) {
  std::mt19937_64 rng(5);
  const Matrix x = random_matrix(40, 8, rng);
  const Vector y = x.col(0) - 0.5 * x.col(3) + random_matrix(40, 1, rng).col(0);
  SolverOptions opt;
  opt.record_objective = true;
  const auto fit = solve(x, y, {0.5, 0.05}, opt);
  ASSERT_GE(fit.objective_trace.size(), 2u);
  for (std::size_t k = 1; k < fit.objective_trace.size(); ++k)
    EXPECT_LE(fit.objective_trace[k], fit.objective_trace[k - 1] + 1e-12);
  EXPECT_TRUE(fit.converged);
}

TEST(ElasticNet, ObjectiveAudit) {
  std::mt19937_64 rng(6);
  const Matrix x = random_matrix(30, 3, rng);
  const Vector y = random_matrix(30, 1, rng).col(0);
  const PenaltyConfig pen{0.4, 0.1};
  const auto fit = solve(x, y, pen);
  const Vector r = y - fit.intercept * Vector::Ones(30) - x * fit.coefficients;
  const double pen_value =
      pen.lambda * (pen.alpha * fit.coefficients.lpNorm<1>() + 0.5 * (1 - pen.alpha) * fit.coefficients.squaredNorm());
  EXPECT_NEAR(penalty_value(fit.coefficients, pen), pen_value, 1e-15);
  EXPECT_NEAR(fit.objective, r.squaredNorm() / 60.0 + pen_value, 1e-12);
}

TEST(ElasticNet, PermutationEquivariance) {
  std::mt19937_64 rng(7);
  const Matrix x = random_matrix(50, 5, rng);
  const Vector y = x.col(1) + random_matrix(50, 1, rng).col(0);
  std::vector<int> perm{3, 0, 4, 1, 2};
  Matrix xp(50, 5);
  for (int j = 0; j < 5; ++j) xp.col(j) = x.col(perm[j]);
  const auto a = solve(x, y, {0.5, 0.05});
  const auto b = solve(xp, y, {0.5, 0.05});
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(b.coefficients(j), a.coefficients(perm[j]), 1e-8);
}

TEST(ElasticNet, InputValidation) {
  Matrix x = Matrix::Ones(5, 2);
  Vector y = Vector::Ones(5);
  y(2) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(solve(x, y, {0.5, 0.1}), DataError);
  EXPECT_THROW(solve(x, Vector::Ones(4), {0.5, 0.1}), ShapeError);
  EXPECT_THROW((PenaltyConfig{1.5, 0.1}.validate()), ConfigError);
  EXPECT_THROW((PenaltyConfig{0.5, -1.0}.validate()), ConfigError);
}

TEST(ElasticNet, SweepCapFlagsUnconverged) {
  std::mt19937_64 rng(8);
  const Matrix x = random_matrix(30, 10, rng);
  const Vector y = random_matrix(30, 1, rng).col(0);
  SolverOptions opt;
  opt.max_sweeps = 1;
  const auto fit = solve(x, y, {0.5, 0.001}, opt);
  EXPECT_FALSE(fit.converged);
  EXPECT_EQ(fit.iterations, 1);
}
