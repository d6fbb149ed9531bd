#include "stelnet/analytics.hpp"
#include "stelnet/errors.hpp"
#include "stelnet/metrics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace stelnet;

namespace {

PartialCorrelationMatrix from_edges(int p, const std::vector<std::pair<int, int>>& edges, double w = 0.2) {
  Matrix m = Matrix::Zero(p, p);
  for (auto [a, b] : edges) m(a, b) = m(b, a) = w;
  return PartialCorrelationMatrix(m);
}

EdgeSet random_set(int p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.4);
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b)
      if (coin(rng)) e.emplace_back(a, b);
  return EdgeSet(p, e);
}

PartialCorrelationMatrix random_pc(int p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Matrix m = Matrix::Zero(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b) m(a, b) = m(b, a) = u(rng);
  return PartialCorrelationMatrix(m);
}

}  // namespace

TEST(Confusion, Basics) {
  const EdgeSet t(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto same = confusion(t, t);
  EXPECT_EQ(same.fp, 0);
  EXPECT_EQ(same.fn, 0);
  const auto none = confusion(EdgeSet(4), t);
  EXPECT_EQ(none.fn, 3);
  EXPECT_EQ(none.tp, 0);
  EXPECT_THROW(confusion(EdgeSet(3), t), ShapeError);
}

TEST(Confusion, BruteForceAndRelabeling) {
  std::mt19937_64 rng(61);
  for (int rep = 0; rep < 50; ++rep) {
    const EdgeSet a = random_set(6, rng), b = random_set(6, rng);
    ConfusionCounts expected;
    for (int j = 0; j < 6; ++j)
      for (int k = j + 1; k < 6; ++k) {
        const bool e = a.contains(j, k), t = b.contains(j, k);
        expected.tp += e && t;
        expected.fp += e && !t;
        expected.fn += !e && t;
        expected.tn += !e && !t;
      }
    const auto got = confusion(a, b);
    EXPECT_EQ(got, expected);
    EXPECT_EQ(got.total(), 15);

    std::vector<int> perm{3, 5, 1, 0, 2, 4};
    auto relabel = [&](const EdgeSet& s) {
      std::vector<std::pair<int, int>> out;
      for (const auto& e : s.edges()) out.emplace_back(perm[e.first], perm[e.second]);
      return EdgeSet(6, out);
    };
    EXPECT_EQ(confusion(relabel(a), relabel(b)), got);
    const double f = f1(got);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    if (!b.empty()) EXPECT_EQ(f == 1.0, a == b);
  }
}

TEST(F1Score, Arithmetic) {
  const ConfusionCounts c{2, 1, 1, 0};
  EXPECT_DOUBLE_EQ(precision(c), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(recall(c), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(f1(c), 2.0 / 3.0);
  EXPECT_EQ(f1({5, 0, 0, 3}), 1.0);
  EXPECT_EQ(f1({0, 3, 0, 0}), 0.0);
}

TEST(Frobenius, Cases) {
  std::mt19937_64 rng(62);
  const auto p = random_pc(5, rng);
  EXPECT_EQ(frobenius_partial_corr(p, p), 0.0);
  Matrix q = p.matrix();
  q(1, 3) += 0.3;
  q(3, 1) += 0.3;
  EXPECT_NEAR(frobenius_partial_corr(p, PartialCorrelationMatrix(q)), std::sqrt(0.18), 1e-12);
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = random_pc(5, rng), b = random_pc(5, rng), c = random_pc(5, rng);
    double acc = 0.0;
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) acc += std::pow(a(j, k) - b(j, k), 2);
    EXPECT_NEAR(frobenius_partial_corr(a, b), std::sqrt(acc), 1e-12);
    EXPECT_EQ(frobenius_partial_corr(a, b), frobenius_partial_corr(b, a));
    EXPECT_LE(frobenius_partial_corr(a, c), frobenius_partial_corr(a, b) + frobenius_partial_corr(b, c) + 1e-15);
  }
  EXPECT_THROW(frobenius_partial_corr(random_pc(3, rng), random_pc(4, rng)), ShapeError);
}

TEST(Measures, Star) {
  const auto star = from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const auto stats = node_statistics(star);
  EXPECT_EQ(stats.degree[0], 4);
  EXPECT_EQ(stats.degree[3], 1);
  EXPECT_DOUBLE_EQ(measures(star).mean_degree, 1.6);
  const auto c = centralities(star);
  for (int j = 1; j < 5; ++j) {
    EXPECT_GT(c.degree[0], c.degree[j]);
    EXPECT_GT(c.strength[0], c.strength[j]);
    EXPECT_GT(c.eigenvector[0], c.eigenvector[j]);
  }
}

TEST(Measures, Path) {
  const auto path = from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto stats = node_statistics(path);
  EXPECT_EQ(stats.eccentricity[0], 3);
  EXPECT_EQ(stats.eccentricity[1], 2);
  EXPECT_NEAR(measures(path).mean_distance, 10.0 / 6.0, 1e-15);
}

TEST(Measures, TriangleWithPendantClustering) {
  const auto g = from_edges(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  const auto stats = node_statistics(g);
  // brute-force neighbor pair counting
  const Eigen::MatrixXi adj = EdgeSet::from_support(g.matrix()).adjacency();
  for (int j = 0; j < 4; ++j) {
    std::vector<int> nb;
    for (int k = 0; k < 4; ++k)
      if (adj(j, k)) nb.push_back(k);
    double c = 0.0;
    if (nb.size() >= 2) {
      int links = 0;
      for (std::size_t a = 0; a < nb.size(); ++a)
        for (std::size_t b = a + 1; b < nb.size(); ++b) links += adj(nb[a], nb[b]);
      c = 2.0 * links / (nb.size() * (nb.size() - 1.0));
    }
    EXPECT_NEAR(stats.clustering[j], c, 1e-15);
  }
  EXPECT_NEAR(stats.clustering[2], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(stats.clustering[3], 0.0);
}

TEST(Measures, EmptyAndRelabeling) {
  const auto empty = PartialCorrelationMatrix(Matrix::Zero(4, 4));
  const auto m = measures(empty);
  EXPECT_EQ(m.mean_degree, 0.0);
  EXPECT_EQ(m.mean_eccentricity, 0.0);
  EXPECT_EQ(m.edge_count, 0u);

  std::mt19937_64 rng(63);
  const auto a = random_pc(7, rng);
  const std::vector<int> perm{6, 2, 4, 0, 1, 5, 3};
  Matrix b(7, 7);
  for (int j = 0; j < 7; ++j)
    for (int k = 0; k < 7; ++k) b(perm[j], perm[k]) = a(j, k);
  const auto ma = measures(a), mb = measures(PartialCorrelationMatrix(b));
  EXPECT_NEAR(ma.mean_degree, mb.mean_degree, 1e-12);
  EXPECT_NEAR(ma.mean_clustering, mb.mean_clustering, 1e-12);
  EXPECT_NEAR(ma.mean_strength, mb.mean_strength, 1e-12);
  EXPECT_NEAR(ma.mean_distance, mb.mean_distance, 1e-12);
}

TEST(Strength, RowSums) {
  std::mt19937_64 rng(64);
  const auto a = random_pc(6, rng);
  const auto signed_stats = node_statistics(a);
  const auto abs_stats = node_statistics(a, {true});
  for (int j = 0; j < 6; ++j) {
    EXPECT_EQ(signed_stats.strength[j], a.matrix().row(j).sum());
    EXPECT_NEAR(abs_stats.strength[j], a.matrix().row(j).cwiseAbs().sum(), 1e-15);
  }
}

TEST(Eigenvector, CompleteGraphUniform) {
  Matrix m = Matrix::Constant(5, 5, 0.1);
  m.diagonal().setZero();
  const auto c = centralities(PartialCorrelationMatrix(m));
  for (double v : c.eigenvector) EXPECT_NEAR(v, 1.0, 1e-10);
}

TEST(Eigenvector, TwoEqualCliquesDegeneracy) {
  // From the all-ones start, power iteration keeps both cliques at equal
  // weight; mass only concentrates on one when the start favors it.
  const auto g = from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  const auto c = centralities(g);
  Matrix a = g.matrix().cwiseAbs() + Matrix::Identity(6, 6);
  Vector v = Vector::Ones(6);
  for (int it = 0; it < 200; ++it) v = (a * v).normalized();
  v /= v.maxCoeff();
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(c.eigenvector[j], v(j), 1e-10);
  Vector skew = Vector::Ones(6);
  skew.head(3) *= 2.0;
  for (int it = 0; it < 200; ++it) skew = (a * skew).normalized();
  EXPECT_GT(skew.head(3).sum(), skew.tail(3).sum());
}

TEST(Shock, ClosedForms) {
  const auto zero = PartialCorrelationMatrix(Matrix::Zero(3, 3));
  const auto r0 = shock(zero, 1);
  EXPECT_EQ(r0.total_impact, 1.0);
  EXPECT_EQ(r0.steady_state, r0.initial);

  const auto two = from_edges(2, {{0, 1}}, 0.5);
  const auto r = shock(two, 0);
  EXPECT_NEAR(r.steady_state(0), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.steady_state(1), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.total_impact, 2.0, 1e-12);
  EXPECT_THROW(shock(two, 2), ShapeError);
}

TEST(Shock, NeumannSeriesAndDivergence) {
  std::mt19937_64 rng(65);
  for (int rep = 0; rep < 20; ++rep) {
    const auto base = random_pc(6, rng);
    const double rho = spectral_radius(base);
    const Matrix p = base.matrix() * (0.7 / rho);
    const PartialCorrelationMatrix pc(p);
    const auto r = shock(pc, rep % 6);
    Vector term = r.initial, sum = r.initial;
    for (int t = 1; t <= 200; ++t) {
      term = p * term;
      sum += term;
    }
    EXPECT_LE((sum - r.steady_state).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_GE(absolute_spectral_radius(pc), spectral_radius(pc) - 1e-12);
  }
  Matrix big = Matrix::Constant(3, 3, 0.6);
  big.diagonal().setZero();
  try {
    shock(PartialCorrelationMatrix(big), 0);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_NEAR(e.radius(), 1.2, 1e-12);
  }
}

TEST(Shock, NonNegativeTotalAtLeastOne) {
  const auto g = from_edges(5, {{0, 1}, {1, 2}, {3, 4}}, 0.3);
  for (int j = 0; j < 5; ++j) EXPECT_GE(shock(g, j).total_impact, 1.0);
  EXPECT_NE(shock(g, 0).total_impact, shock(g, 1).total_impact);
}

TEST(DegreeHistogram, Star) {
  const auto star = from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  EXPECT_EQ(degree_histogram(star), (std::vector<int>{0, 4, 0, 0, 1}));
}
