#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ckspline/loss.hpp"

using namespace ckspline;

namespace {

CoefficientMatrix rows(std::initializer_list<std::vector<double>> r) {
  CoefficientMatrix c(static_cast<Eigen::Index>(r.size()),
                      static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    for (std::size_t t = 0; t < row.size(); ++t) c(i, static_cast<Eigen::Index>(t)) = row[t];
    ++i;
  }
  return c;
}

/// Shifted coefficients of a global polynomial (powers of x) on every segment.
SplineModel from_global(const std::vector<double>& global, std::vector<double> xi) {
  SplineModel m(std::move(xi), static_cast<int>(global.size()) - 1);
  CoefficientMatrix c(static_cast<Eigen::Index>(m.segments()), static_cast<Eigen::Index>(global.size()));
  for (std::size_t i = 0; i < m.segments(); ++i) {
    const auto b = rebase(global, 0.0, m.centers()[i]);
    for (std::size_t t = 0; t < b.size(); ++t) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = b[t];
  }
  m.set_coefficients(c);
  return m;
}

SplineModel random_model(std::mt19937_64& rng, std::size_t m, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> xi(m + 1);
  for (std::size_t i = 0; i <= m; ++i) xi[i] = static_cast<double>(i);
  CoefficientMatrix c(static_cast<Eigen::Index>(m), d + 1);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = u(rng);
  return SplineModel(xi, c);
}

SampleSet random_samples(std::mt19937_64& rng, double lo, double hi, std::size_t n) {
  std::uniform_real_distribution<double> x(lo, hi), y(-1.0, 1.0);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x(rng);
    ys[i] = y(rng);
  }
  xs[0] = lo;
  xs[1] = hi;
  return SampleSet::from_unsorted(xs, ys);
}

/// Composite Simpson rule for integral of f''^2, an oracle independent of the closed form.
double strain_by_quadrature(const SplineModel& m, int panels = 2000) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.segments(); ++i) {
    const double a = m.breakpoints()[i], b = m.breakpoints()[i + 1];
    const double h = (b - a) / panels;
    auto f = [&](double x) {
      const double v = m.eval_segment(i, x, 2);
      return v * v;
    };
    double s = f(a) + f(b);
    for (int q = 1; q < panels; ++q) s += (q % 2 ? 4.0 : 2.0) * f(a + q * h);
    total += s * h / 3.0;
  }
  return total;
}

double max_rel_diff(const CoefficientMatrix& a, const CoefficientMatrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]) /
                                std::max(1.0, std::abs(b.data()[i])));
  return worst;
}

}  // namespace

TEST(L2Loss, SingleSegmentZeroSpline) {
  SplineModel m({0.0, 1.0}, 0);
  EXPECT_DOUBLE_EQ(l2_loss(m, SampleSet({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0})), 1.0 / 3.0);
}

TEST(L2Loss, TwoSegmentsScaleByM) {
  SplineModel m({0.0, 1.0, 2.0}, 0);
  EXPECT_DOUBLE_EQ(l2_loss(m, SampleSet({0.5, 1.5}, {1.0, 1.0})), 2.0);
}

TEST(L2Loss, ZeroOnInterpolatedSamples) {
  const SplineModel m = from_global({0.2, -1.0, 0.5}, {0.0, 1.0, 2.0, 3.0});
  std::vector<double> xs, ys;
  for (int i = 0; i <= 12; ++i) {
    const double x = i * 0.25;
    xs.push_back(x);
    ys.push_back(0.2 - x + 0.5 * x * x);
  }
  EXPECT_NEAR(l2_loss(m, SampleSet(xs, ys)), 0.0, 1e-28);
}

TEST(L2Loss, SampleOutsideDomainNamesIndex) {
  SplineModel m({0.0, 1.0}, 1);
  try {
    l2_loss(m, SampleSet({0.0, 2.0}, {0.0, 0.0}));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("sample 1"), std::string::npos);
  }
}

TEST(CkLoss, JumpInValueAndSlope) {
  // p1 = x on [0,1], p2 = 2x on [1,2], shifted to centers 0.5 and 1.5.
  SplineModel m({0.0, 1.0, 2.0}, rows({{0.5, 1.0}, {3.0, 2.0}}));
  LossConfig c{0.0, 1, BoundaryMode::open, 0.0};
  EXPECT_DOUBLE_EQ(ck_loss(m, c), 2.0);
}

TEST(CkLoss, ZeroForContinuousSpline) {
  const SplineModel m = from_global({1.0, 2.0, -1.0, 0.5}, {0.0, 1.0, 2.5, 4.0});
  EXPECT_NEAR(ck_loss(m, LossConfig{0.5, 3, BoundaryMode::open, 0.0}), 0.0, 1e-24);
}

TEST(CkLoss, PeriodicSingleSegmentWrap) {
  SplineModel m({0.0, 1.0}, rows({{0.5, 1.0}}));  // p(x) = x
  EXPECT_DOUBLE_EQ(ck_loss(m, LossConfig{0.0, 0, BoundaryMode::periodic, 0.0}), 1.0);
  // cyclic drops the value term at the wrap
  EXPECT_DOUBLE_EQ(ck_loss(m, LossConfig{0.0, 0, BoundaryMode::cyclic, 0.0}), 0.0);
  // slope matches at both ends: only the value jump remains
  EXPECT_DOUBLE_EQ(ck_loss(m, LossConfig{0.0, 1, BoundaryMode::periodic, 0.0}), 1.0);
}

TEST(CkLoss, OpenSingleSegmentIsZero) {
  SplineModel m({0.0, 1.0}, rows({{3.0, 1.0}}));
  EXPECT_EQ(ck_loss(m, LossConfig{0.0, 1, BoundaryMode::open, 0.0}), 0.0);
}

TEST(CkLoss, KAboveDegreeRejected) {
  SplineModel m({0.0, 1.0, 2.0}, 1);
  EXPECT_THROW(ck_loss(m, LossConfig{0.5, 2, BoundaryMode::open, 0.0}), ConfigError);
}

TEST(CkLoss, CyclicCountsWrapDerivatives) {
  // two segments of the same parabola x^2 on [0,2]: interior continuous, wrap slope 0 vs 4.
  const SplineModel m = from_global({0.0, 0.0, 1.0}, {0.0, 1.0, 2.0});
  const double cyc = ck_loss(m, LossConfig{0.0, 1, BoundaryMode::cyclic, 0.0});
  EXPECT_NEAR(cyc, 16.0 / 2.0, 1e-12);  // delta_1 = p'(0) - p'(2) = -4, divisor m = 2
  const double per = ck_loss(m, LossConfig{0.0, 1, BoundaryMode::periodic, 0.0});
  EXPECT_NEAR(per, (16.0 + 16.0) / 2.0, 1e-12);  // plus delta_0 = 0 - 4
}

TEST(CkLoss, InvariantUnderCommonGlobalPolynomial) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    SplineModel m = random_model(rng, 4, 5);
    const LossConfig c{0.3, 2, BoundaryMode::open, 0.0};
    const double before = ck_loss(m, c);
    const SplineModel shift = from_global({0.7, -1.3, 0.4, 2.0, -0.2, 0.05}, {0, 1, 2, 3, 4});
    m.set_coefficients(m.coefficients() + shift.coefficients());
    EXPECT_NEAR(ck_loss(m, c), before, 1e-10);
  }
}

TEST(StrainLoss, ClosedFormValues) {
  EXPECT_NEAR(strain_loss(from_global({0.0, 0.0, 1.0}, {0.0, 1.0})), 4.0, 1e-12);
  EXPECT_NEAR(strain_loss(from_global({0.0, 0.0, 0.0, 1.0}, {0.0, 1.0})), 12.0, 1e-12);
  EXPECT_EQ(strain_loss(SplineModel({0.0, 1.0, 2.0}, rows({{1.0, 2.0}, {3.0, -1.0}}))), 0.0);
}

TEST(StrainLoss, MatchesSimpsonQuadrature) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const SplineModel m = random_model(rng, 3, 2 + trial % 6);
    const double oracle = strain_by_quadrature(m);
    EXPECT_NEAR(strain_loss(m), oracle, 1e-9 * std::max(1.0, oracle));
  }
}

TEST(TotalLoss, BlendsTerms) {
  SplineModel m({0.0, 1.0, 2.0}, rows({{0.5, 1.0}, {3.0, 2.0}}));
  const SampleSet s({0.0, 0.5, 1.0, 1.5, 2.0}, {0.0, 1.0, 0.0, 1.0, 0.0});
  const double l2 = l2_loss(m, s);
  const double ck = ck_loss(m, LossConfig{0.5, 1, BoundaryMode::open, 0.0});

  auto r = total_loss(m, s, LossConfig{1.0, 1, BoundaryMode::open, 0.0});
  EXPECT_EQ(r.total, r.l2);
  r = total_loss(m, s, LossConfig{0.0, 1, BoundaryMode::open, 0.0});
  EXPECT_EQ(r.total, r.ck);
  r = total_loss(m, s, LossConfig{0.5, 1, BoundaryMode::open, 0.0});
  EXPECT_NEAR(r.total, 0.5 * l2 + 0.5 * ck, 1e-12 * r.total);

  m = from_global({0.0, 0.0, 0.0, 1.0}, {0.0, 1.0, 2.0});
  r = total_loss(m, s, LossConfig{0.25, 1, BoundaryMode::open, 0.5});
  EXPECT_NEAR(r.total, 0.25 * r.l2 + 0.75 * r.ck + 0.5 * r.strain, 1e-12 * r.total);
  EXPECT_GT(r.strain, 0.0);
}

TEST(TotalLoss, RejectsLambdaOutOfRange) {
  SplineModel m({0.0, 1.0}, 1);
  const SampleSet s({0.0, 1.0}, {0.0, 1.0});
  EXPECT_THROW(total_loss(m, s, LossConfig{1.5, 0, BoundaryMode::open, 0.0}), ConfigError);
  EXPECT_THROW(total_loss(m, s, LossConfig{0.5, 0, BoundaryMode::open, -1.0}), ConfigError);
}

TEST(Losses, AreNonnegative) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const SplineModel m = random_model(rng, 1 + trial % 4, trial % 7);
    const SampleSet s = random_samples(rng, 0.0, static_cast<double>(m.segments()), 20);
    const LossConfig c{0.5, std::min(2, m.degree()),
                       static_cast<BoundaryMode>(trial % 3), 0.1};
    const auto r = total_loss(m, s, c);
    EXPECT_GE(r.l2, 0.0);
    EXPECT_GE(r.ck, 0.0);
    EXPECT_GE(strain_loss(m), 0.0);
  }
}

TEST(L2Loss, EquilibrationUnderSplitAndDuplicate) {
  // Split each segment into two halves carrying the same polynomial and
  // duplicate every sample: l2 = (2m / 2n) * 2 * sum r^2 = 2 * original.
  std::mt19937_64 rng(19);
  const SplineModel coarse = random_model(rng, 2, 3);
  const SampleSet s = random_samples(rng, 0.0, 2.0, 15);

  SplineModel fine({0.0, 0.5, 1.0, 1.5, 2.0}, 3);
  CoefficientMatrix c(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto row = coarse.segment_coefficients(i / 2);
    const auto b = rebase(row, coarse.centers()[i / 2], fine.centers()[i]);
    for (std::size_t t = 0; t < 4; ++t) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = b[t];
  }
  fine.set_coefficients(c);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (int rep = 0; rep < 2; ++rep) {
      xs.push_back(s.xs()[i]);
      ys.push_back(s.ys()[i]);
    }
  const double base = l2_loss(coarse, s);
  EXPECT_NEAR(l2_loss(fine, SampleSet(xs, ys)), 2.0 * base, 1e-12 * base);
}

TEST(Gradient, WorkedSingleSampleL2) {
  // Segment [0, 0.5] has center 0.25; the sample (0.5, 1) sits on the closed
  // right end. It is listed twice so n = 2; (m/n) * 2r^2 equals the n = 1 value.
  SplineModel m({0.0, 0.5}, 1);
  const SampleSet s({0.5, 0.5}, {1.0, 1.0});
  const auto g = gradient(m, s, LossConfig{1.0, 0, BoundaryMode::open, 0.0});
  EXPECT_DOUBLE_EQ(g(0, 0), -2.0);
  EXPECT_DOUBLE_EQ(g(0, 1), -0.5);
}

TEST(Gradient, ZeroAtGlobalMinimum) {
  const SplineModel m = from_global({0.3, 0.1, -0.4, 0.2}, {0.0, 1.0, 2.0, 3.0});
  std::vector<double> xs, ys;
  for (int i = 0; i <= 30; ++i) {
    const double x = 0.1 * i;
    xs.push_back(x);
    ys.push_back(0.3 + 0.1 * x - 0.4 * x * x + 0.2 * x * x * x);
  }
  const SampleSet s(xs, ys);
  const LossConfig c{0.5, 2, BoundaryMode::open, 0.0};
  EXPECT_LT(gradient(m, s, c).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT(fd_gradient(m, s, c, 1e-6).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Gradient, SampleOnInteriorBreakpointFeedsRightSegmentOnly) {
  SplineModel m({0.0, 1.0, 2.0}, 0);
  const SampleSet s({1.0, 1.0}, {1.0, 1.0});
  const auto g = gradient(m, s, LossConfig{1.0, 0, BoundaryMode::open, 0.0});
  EXPECT_EQ(g(0, 0), 0.0);
  EXPECT_LT(g(1, 0), 0.0);
}

TEST(Gradient, MatchesFiniteDifferencesOnRandomFixtures) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(trial % 4);
    const int d = trial % 8;
    const SplineModel model = random_model(rng, m, d);
    const SampleSet s = random_samples(rng, 0.0, static_cast<double>(m), 25);
    const LossConfig c{0.1 + 0.8 * (trial % 5) / 4.0, std::min(d, trial % 4),
                       static_cast<BoundaryMode>(trial % 3), trial % 2 ? 0.3 : 0.0};
    EXPECT_LT(max_rel_diff(fd_gradient(model, s, c, 1e-6), gradient(model, s, c)), 1e-5)
        << "trial " << trial;
  }
}

TEST(Gradient, LinearInLambda) {
  std::mt19937_64 rng(29);
  const SplineModel m = random_model(rng, 3, 5);
  const SampleSet s = random_samples(rng, 0.0, 3.0, 40);
  const LossConfig c{0.37, 2, BoundaryMode::periodic, 0.0};
  const CoefficientMatrix blended = gradient(m, s, c);
  const CoefficientMatrix g_l2 = gradient(m, s, LossConfig{1.0, 2, BoundaryMode::periodic, 0.0});
  const CoefficientMatrix g_ck = gradient(m, s, LossConfig{0.0, 2, BoundaryMode::periodic, 0.0});
  const CoefficientMatrix expected = 0.37 * g_l2 + 0.63 * g_ck;
  EXPECT_LT((blended - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FdGradient, ExactForQuadraticLossAtAnyStep) {
  // total_loss is quadratic in the coefficients, so central differences carry
  // no truncation error; only rounding remains, even for large steps.
  std::mt19937_64 rng(31);
  const SplineModel m = random_model(rng, 3, 4);
  const SampleSet s = random_samples(rng, 0.0, 3.0, 30);
  const LossConfig c{0.6, 2, BoundaryMode::open, 0.2};
  const CoefficientMatrix exact = gradient(m, s, c);
  for (double h : {0.5, 1e-1, 1e-2, 1e-3})
    EXPECT_LT(max_rel_diff(fd_gradient(m, s, c, h), exact), 1e-9) << "h = " << h;
  EXPECT_THROW(fd_gradient(m, s, c, 0.0), ConfigError);
}
