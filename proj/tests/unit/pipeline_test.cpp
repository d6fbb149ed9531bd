#include "stelnet/errors.hpp"
#include "stelnet/pipeline.hpp"

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include <random>

using namespace stelnet;

TEST(LogReturns, Basics) {
  PriceTable t;
  t.names = {"A", "B"};
  t.prices.resize(2, 2);
  t.prices << 1.0, 5.0, std::exp(1.0), 5.0;
  const auto r = log_returns(t);
  EXPECT_NEAR(r.values(0, 0), 1.0, 1e-15);
  EXPECT_EQ(r.values(0, 1), 0.0);
  t.prices.resize(1, 2);
  t.prices << 1.0, 2.0;
  EXPECT_THROW(log_returns(t), DataError);
}

TEST(LogReturns, TelescopingAndMissing) {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> z(0.0, 0.01);
  PriceTable t;
  t.names = {"A"};
  t.prices.resize(300, 1);
  t.prices(0, 0) = 100.0;
  for (int i = 1; i < 300; ++i) t.prices(i, 0) = t.prices(i - 1, 0) * std::exp(z(rng));
  const auto r = log_returns(t);
  EXPECT_NEAR(r.values.sum(), std::log(t.prices(299, 0) / t.prices(0, 0)), 1e-12);

  t.prices(5, 0) = std::numeric_limits<double>::quiet_NaN();
  const auto with_gap = log_returns(t);
  EXPECT_TRUE(std::isnan(with_gap.values(4, 0)));
  EXPECT_TRUE(std::isnan(with_gap.values(5, 0)));
  EXPECT_EQ(complete_rows(with_gap).values.rows(), 297);
}

TEST(PriceTableValidation, Rejects) {
  PriceTable t;
  t.names = {"A"};
  t.dates = {"2020-01-02", "2020-01-01"};
  t.prices = Matrix::Ones(2, 1);
  EXPECT_THROW(t.validate(), DataError);
  t.dates = {"2020-01-01", "2020-01-02"};
  t.prices(1, 0) = -1.0;
  EXPECT_THROW(t.validate(), DataError);
}

TEST(Garch, RecoversParametersOnLongSeries) {
  const GarchParameters truth{0.0, 0.1, 0.05, 0.1, 0.85};
  const Vector r = simulate_ar_garch(truth, 5000, 3);
  const GarchFit fit = fit_ar_garch(r);
  EXPECT_NEAR(fit.params.phi, 0.1, 0.05);
  EXPECT_NEAR(fit.params.omega, 0.05, 0.05);
  EXPECT_NEAR(fit.params.a, 0.1, 0.05);
  EXPECT_NEAR(fit.params.b, 0.85, 0.05);
  EXPECT_NEAR(fit.params.c, 0.0, 0.05);
  EXPECT_EQ(fit.residuals.size(), r.size() - 1);
  EXPECT_TRUE((fit.variance.array() > 0.0).all());
  const double var = (fit.residuals.array() - fit.residuals.mean()).square().mean();
  EXPECT_GE(var, 0.8);
  EXPECT_LE(var, 1.2);
  EXPECT_GT(fit.params.omega, 0.0);
  EXPECT_LT(fit.params.a + fit.params.b, 1.0);
  EXPECT_LT(std::abs(fit.params.phi), 1.0);
}

TEST(Garch, IidNormalInput) {
  std::mt19937_64 rng(72);
  std::normal_distribution<double> z(0.3, 2.0);
  Vector x(2000);
  for (auto& v : x) v = z(rng);
  const GarchFit fit = fit_ar_garch(x);
  // With no volatility clustering a is small; b is weakly identified.
  EXPECT_LT(fit.params.a, 0.05);
  const Vector s = ((x.array() - x.mean()) / std::sqrt((x.array() - x.mean()).square().mean())).matrix().tail(1999);
  const Eigen::ArrayXd zc = fit.residuals.array() - fit.residuals.mean();
  const Eigen::ArrayXd sc = s.array() - s.mean();
  const double corr = (zc * sc).sum() / std::sqrt(zc.square().sum() * sc.square().sum());
  EXPECT_GT(corr, 0.99);
}

TEST(Garch, Errors) {
  EXPECT_THROW(fit_ar_garch(Vector::Constant(500, 0.01)), FitError);
  EXPECT_THROW(fit_ar_garch(Vector::Ones(100)), FitError);
}

TEST(KolmogorovSmirnov, QuantileSample) {
  const int n = 400;
  boost::math::normal_distribution<double> unit;
  Vector q(n);
  for (int i = 0; i < n; ++i) q(i) = boost::math::quantile(unit, (i + 0.5) / n);
  const auto r = ks_statistic(q, {KsReferenceKind::Normal, 0.0});
  EXPECT_LE(r.statistic, 0.5 / n + 1e-12);
  EXPECT_FALSE(r.reject);
  EXPECT_NEAR(r.critical, 1.358 / 20.0, 1e-15);
  EXPECT_THROW(ks_statistic(Vector::Zero(10), {}), DataError);
}

TEST(KolmogorovSmirnov, CalibrationAndPower) {
  std::mt19937_64 rng(73);
  std::normal_distribution<double> z;
  int rejections = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    Vector x(10000);
    for (auto& v : x) v = z(rng);
    rejections += ks_statistic(x, {KsReferenceKind::Normal, 0.0}).reject;
  }
  EXPECT_GT(rejections, 25);
  EXPECT_LT(rejections, 80);

  std::student_t_distribution<double> t3(3.0);
  int power = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Vector x(500);
    for (auto& v : x) v = t3(rng) / std::sqrt(3.0);
    power += ks_statistic(x, {KsReferenceKind::Normal, 0.0}).reject;
  }
  EXPECT_GE(power, 90);
}

TEST(KolmogorovSmirnov, TDegreesOfFreedom) {
  std::mt19937_64 rng(74);
  std::student_t_distribution<double> t4(4.0);
  Vector x(20000);
  for (auto& v : x) v = t4(rng) / std::sqrt(2.0);
  const double nu = fit_t_dof(x);
  EXPECT_NEAR(nu, 4.0, 0.6);
  EXPECT_FALSE(ks_statistic(x, {KsReferenceKind::StudentT, nu}).reject);
}

TEST(Windows, RowCounts) {
  const auto w = windows_by_rows(36, 12, 1);
  EXPECT_EQ(w.size(), 25u);
  const auto disjoint = windows_by_rows(36, 12, 12);
  ASSERT_EQ(disjoint.size(), 3u);
  for (std::size_t i = 1; i < disjoint.size(); ++i) EXPECT_EQ(disjoint[i].begin, disjoint[i - 1].end);
  for (std::size_t rows : {40u, 100u, 257u})
    for (std::size_t win : {5u, 12u, 40u})
      for (std::size_t step : {1u, 3u, 7u}) {
        const auto ws = windows_by_rows(rows, win, step);
        EXPECT_EQ(ws.size(), (rows - win) / step + 1);
        for (std::size_t i = 0; i < ws.size(); ++i) {
          EXPECT_EQ(ws[i].begin, i * step);
          EXPECT_EQ(ws[i].end - ws[i].begin, win);
          EXPECT_LE(ws[i].end, rows);
        }
      }
  EXPECT_THROW(windows_by_rows(5, 10, 1), DataError);
}

TEST(Windows, ThirtySixMonths) {
  std::vector<std::string> dates;
  for (int y = 2018; y <= 2020; ++y)
    for (int m = 1; m <= 12; ++m)
      for (int d : {3, 12, 24}) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
        dates.emplace_back(buf);
      }
  const auto w = windows_by_months(dates, 12, 1);
  ASSERT_EQ(w.size(), 25u);
  EXPECT_EQ(w.front().begin, 0u);
  EXPECT_EQ(w.front().end, 36u);
  EXPECT_EQ(w.back().end, dates.size());
  EXPECT_EQ(w.front().label, "2018-01..2018-12");
}

TEST(RollingEstimate, ConstantTableFailsEveryWindow) {
  const Matrix x = Matrix::Constant(60, 3, 0.5);
  EMConfig cfg;
  cfg.mode = EstimatorMode::Gaussian;
  const auto est = rolling_estimate(x, windows_by_rows(60, 20, 10), build_grid(0.01, 1.0, 5), cfg);
  ASSERT_EQ(est.size(), 5u);
  for (const auto& e : est) {
    EXPECT_FALSE(e.error.empty());
    EXPECT_EQ(e.error, est.front().error);
  }
}
