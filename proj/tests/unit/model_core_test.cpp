#include "stelnet/errors.hpp"
#include "stelnet/model_core.hpp"
#include "stelnet/netgen.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace stelnet;
using stelnet::testing::random_spd;

TEST(PartialCorrelation, IdentityGivesZero) {
  const auto pc = precision_to_partial_correlation(PrecisionMatrix(Matrix::Identity(3, 3)));
  EXPECT_EQ(pc.matrix(), Matrix::Zero(3, 3));
}

TEST(PartialCorrelation, TwoByTwo) {
  Matrix t(2, 2);
  t << 1, -0.5, -0.5, 1;
  const auto pc = precision_to_partial_correlation(PrecisionMatrix(t));
  EXPECT_DOUBLE_EQ(pc(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(pc(1, 0), 0.5);
  EXPECT_EQ(pc(0, 0), 0.0);
}

TEST(PartialCorrelation, ScalingInvariance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix theta = random_spd(10, rng);
    Vector d(10);
    for (auto& x : d) x = u(rng);
    const Matrix scaled = d.asDiagonal() * theta * d.asDiagonal();
    const auto a = precision_to_partial_correlation(PrecisionMatrix(theta));
    const auto b = precision_to_partial_correlation(PrecisionMatrix(scaled));
    const auto c = precision_to_partial_correlation(PrecisionMatrix(3.7 * theta));
    EXPECT_LE(stelnet::testing::max_abs_diff(a.matrix(), b.matrix()), 1e-12);
    EXPECT_LE(stelnet::testing::max_abs_diff(a.matrix(), c.matrix()), 1e-12);
    EXPECT_LE(a.matrix().cwiseAbs().maxCoeff(), 1.0);
    EXPECT_EQ(a.matrix(), a.matrix().transpose());
  }
}

TEST(PartialCorrelation, NonPositiveDiagonalNamesIndex) {
  Matrix t = Matrix::Identity(3, 3);
  t(2, 2) = -1.0;
  try {
    precision_to_partial_correlation(t);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
}

TEST(ScatterToPrecision, Arithmetic) {
  const auto t = scatter_to_precision(PrecisionMatrix(Matrix::Identity(2, 2)), 3.0);
  EXPECT_NEAR(t(0, 0), 1.0 / 3.0, 1e-15);
  Matrix psi = Matrix::Identity(2, 2);
  psi(0, 1) = psi(1, 0) = 0.3;
  const auto t20 = scatter_to_precision(PrecisionMatrix(psi), 20.0);
  EXPECT_NEAR(t20(0, 1), 0.27, 1e-15);
  EXPECT_LE(stelnet::testing::max_abs_diff(precision_to_partial_correlation(t20).matrix(),
                                           precision_to_partial_correlation(PrecisionMatrix(psi)).matrix()),
            1e-15);
  EXPECT_THROW(scatter_to_precision(PrecisionMatrix(psi), 2.0), DomainError);
}

TEST(PositiveDefinite, Basics) {
  EXPECT_TRUE(is_positive_definite(Matrix::Identity(4, 4)));
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_FALSE(is_positive_definite(m));
  EXPECT_THROW(is_positive_definite(Matrix::Zero(2, 3)), ShapeError);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 0.1;
  EXPECT_THROW(is_positive_definite(asym), ShapeError);
}

TEST(PositiveDefinite, GeneratorOutputs) {
  int count = 0;
  for (Topology kind : kAllTopologies) {
    for (std::uint64_t seed = 0; seed < 15; ++seed, ++count) {
      TopologySpec spec;
      spec.kind = kind;
      spec.p = 30;
      spec.seed = seed;
      EXPECT_TRUE(is_positive_definite(generate_precision(spec).matrix()));
    }
  }
  EXPECT_GE(count, 100);
}

TEST(PrecisionMatrixType, RejectsNonPD) {
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_THROW(PrecisionMatrix{m}, DomainError);
}

TEST(PrecisionMatrixType, SymmetrizesWithinTolerance) {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = 0.1;
  m(1, 0) = 0.1 + 1e-10;
  const PrecisionMatrix p(m);
  EXPECT_EQ(p(0, 1), p(1, 0));
}

TEST(EdgeSetType, CanonicalForm) {
  const EdgeSet a(4, {{1, 0}, {2, 3}});
  const EdgeSet b(4, {{0, 1}, {3, 2}, {1, 0}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 2u);
  EXPECT_TRUE(a.contains(1, 0));
  EXPECT_FALSE(a.contains(0, 2));
  EXPECT_THROW(EdgeSet(3, {{1, 1}}), ShapeError);
  EXPECT_THROW(EdgeSet(3, {{0, 3}}), ShapeError);
  EXPECT_EQ(EdgeSet::complete(5).size(), 10u);
  EXPECT_TRUE(a.is_subset_of(EdgeSet::complete(4)));
  EXPECT_EQ(a.neighbors(0), std::vector<int>{1});
}

TEST(DatasetType, Validation) {
  EXPECT_THROW(Dataset(Matrix::Zero(1, 3)), DataError);
  Matrix x = Matrix::Zero(3, 2);
  x(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Dataset{x}, DataError);
}

TEST(LogDeterminant, MatchesProductOfEigenvalues) {
  std::mt19937_64 rng(3);
  const Matrix s = random_spd(6, rng);
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  EXPECT_NEAR(log_determinant(s), es.eigenvalues().array().log().sum(), 1e-10);
}
