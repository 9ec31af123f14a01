#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bernoulli/curve_geometry.hpp"
#include "oracles.hpp"

using namespace bernoulli;

namespace {

FourierCoefficients series(double a0, std::vector<double> c, std::vector<double> s) {
  c.resize(std::max(c.size(), s.size()), 0.0);
  s.resize(c.size(), 0.0);
  return {a0, c, s};
}

BoundaryCurve oval() { return curve_from_fourier(Point::Zero(), series(0.5, {0.0, 0.05}, {})); }

oracle::Curve as_function(const BoundaryCurve& c) {
  return [c](double th) { return c.point(th); };
}

oracle::PolarSeries as_series(const BoundaryCurve& c) {
  oracle::PolarSeries p;
  p.cx = c.center().x();
  p.cy = c.center().y();
  p.a0 = c.coefficients().a0;
  for (double v : c.coefficients().cos) p.cos.push_back(v);
  for (double v : c.coefficients().sin) p.sin.push_back(v);
  return p;
}

BoundaryCurve random_curve(std::mt19937& rng, int degree, double amp) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierCoefficients k{0.5, std::vector<double>(degree), std::vector<double>(degree)};
  for (int i = 0; i < degree; ++i) {
    const double scale = amp / ((i + 1) * (i + 1));
    k.cos[i] = scale * u(rng);
    k.sin[i] = scale * u(rng);
  }
  return BoundaryCurve(Point(0.1 * u(rng), 0.1 * u(rng)), k);
}

}  // namespace

TEST(CurveFromFourier, ConstantSeriesIsCircle) {
  const auto c = curve_from_fourier(Point::Zero(), series(0.5, {}, {}));
  for (double th : {0.0, 1.0, 2.5, 4.0}) EXPECT_DOUBLE_EQ(c.radius(th), 0.5);
  EXPECT_EQ(c.degree(), 0);
}

TEST(CurveFromFourier, EvaluatesSeries) {
  const auto c = oval();
  EXPECT_NEAR(c.radius(0.0), 0.55, 1e-15);
  EXPECT_NEAR(c.radius(M_PI / 2), 0.45, 1e-15);
}

TEST(CurveFromFourier, RejectsNonStarShaped) {
  try {
    curve_from_fourier(Point::Zero(), series(0.1, {0.2}, {}));
    FAIL() << "expected NonStarShaped";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonStarShaped);
  }
  EXPECT_THROW(curve_from_fourier(Point::Zero(), series(-0.5, {}, {})), Error);
  EXPECT_THROW(curve_from_fourier(Point::Zero(), series(0.0, {}, {})), Error);
}

TEST(CurveFromFourier, ResolutionGuardOnLastMode) {
  try {
    curve_from_fourier(Point::Zero(), series(1.0, {0.0, 0.2}, {}));
    FAIL() << "expected ResolutionTooLow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ResolutionTooLow);
  }
  EXPECT_NO_THROW(curve_from_fourier(Point::Zero(), series(1.0, {0.2, 0.05}, {})));
}

TEST(CurveFromFourier, RejectsNonFiniteInput) {
  EXPECT_THROW(curve_from_fourier(Point::Zero(), series(1.0, {NAN}, {})), Error);
  EXPECT_THROW(curve_from_fourier(Point(INFINITY, 0), series(1.0, {}, {})), Error);
}

TEST(SampleGeometry, UnitCircleHasCurvatureMinusOne) {
  const auto s = sample_geometry(BoundaryCurve::circle(Point::Zero(), 1.0), 16);
  for (int i = 0; i < s.n; ++i) EXPECT_NEAR(s.curvature[i], -1.0, 1e-12);
}

TEST(SampleGeometry, CircleClosedForms) {
  for (int n : {16, 32, 64}) {
    const double r = 0.4;
    const auto s = sample_geometry(BoundaryCurve::circle(Point(0.1, -0.2), r, 2), n);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(s.curvature[i], -2.5, 1e-12);
      EXPECT_NEAR(s.metric[i], 1.0, 1e-12);
      EXPECT_NEAR(s.speed[i], r, 1e-12);
      EXPECT_NEAR(s.normals(i, 0), -std::cos(s.theta[i]), 1e-12);
      EXPECT_NEAR(s.normals(i, 1), -std::sin(s.theta[i]), 1e-12);
    }
    EXPECT_NEAR(s.length(), 2 * M_PI * r, 1e-12);
  }
}

TEST(SampleGeometry, CurvatureMatchesThreePointOracle) {
  const auto c = oval();
  const auto s = sample_geometry(c, 64);
  const auto f = as_series(c);
  double worst = 0.0;
  for (int i = 0; i < s.n; ++i) worst = std::max(worst, std::abs(s.curvature[i] + oracle::polygon_curvature(f, s.theta[i])));
  EXPECT_LT(worst, 1e-8);
}

TEST(SampleGeometry, CurvatureOfRandomCurvesAtEveryResolution) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    const auto c = random_curve(rng, 8, 0.04);
    const auto f = as_series(c);
    for (int n : {32, 64, 128}) {
      const auto s = sample_geometry(c, n);
      double worst = 0.0;
      for (int i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(s.curvature[i] + oracle::polygon_curvature(f, s.theta[i])));
      EXPECT_LT(worst, 1e-8) << "n = " << n;
    }
  }
}

TEST(SampleGeometry, RejectsCoarseOrOddGrids) {
  const auto c = curve_from_fourier(Point::Zero(), series(1.0, std::vector<double>(8, 0.001), {}));
  EXPECT_THROW(sample_geometry(c, 16), Error);
  EXPECT_NO_THROW(sample_geometry(c, 32));
  EXPECT_THROW(sample_geometry(BoundaryCurve::circle(Point::Zero(), 1.0), 15), Error);
  EXPECT_EQ(default_node_count(4), 64);
  EXPECT_EQ(default_node_count(16), 128);
}

TEST(SampleGeometry, NormalsPointInward) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = random_curve(rng, 6, 0.1);
    const auto s = sample_geometry(c, 64);
    for (int i = 0; i < s.n; ++i) {
      const Point x(s.points(i, 0), s.points(i, 1));
      const Point nu(s.normals(i, 0), s.normals(i, 1));
      EXPECT_LT(nu.dot(x - c.center()), 0.0);
      EXPECT_NEAR(nu.norm(), 1.0, 1e-14);
    }
  }
}

TEST(MetricFactor, CircleIsOne) {
  const auto s = sample_geometry(BoundaryCurve::circle(Point::Zero(), 0.3), 32);
  EXPECT_LT((metric_factor(s).array() - 1.0).abs().maxCoeff(), 1e-14);
}

TEST(MetricFactor, OvalAtQuarterPi) {
  const auto s = sample_geometry(oval(), 64);
  EXPECT_NEAR(s.theta[8], M_PI / 4, 1e-15);
  EXPECT_NEAR(metric_factor(s)[8], oracle::metric_quarter_pi, 1e-12);
}

TEST(MetricFactor, NeverExceedsOne) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = sample_geometry(random_curve(rng, 5, 0.15), 64);
    EXPECT_LE(metric_factor(s).maxCoeff(), 1.0 + 1e-15);
    EXPECT_GT(metric_factor(s).minCoeff(), 0.0);
  }
}

TEST(IntegrateBoundary, ConstantGivesLength) {
  const auto s = sample_geometry(BoundaryCurve::circle(Point::Zero(), 0.7), 32);
  EXPECT_NEAR(integrate_boundary(s, BoundaryField::Ones(32)), 2 * M_PI * 0.7, 1e-13);
}

TEST(IntegrateBoundary, OddModeVanishes) {
  const auto s = sample_geometry(BoundaryCurve::circle(Point::Zero(), 0.7), 32);
  EXPECT_NEAR(integrate_boundary(s, s.theta.array().cos().matrix()), 0.0, 1e-15);
}

TEST(IntegrateBoundary, OvalLengthMatchesPolygon) {
  const auto c = oval();
  const auto s = sample_geometry(c, 64);
  EXPECT_NEAR(integrate_boundary(s, BoundaryField::Ones(64)), oracle::polygon_length(as_function(c), 1000000), 1e-10);
}

TEST(IntegrateBoundary, GridMismatch) {
  const auto s = sample_geometry(BoundaryCurve::circle(Point::Zero(), 0.7), 32);
  try {
    integrate_boundary(s, BoundaryField::Ones(31));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridMismatch);
  }
}

TEST(BoundaryCurve, AreaMatchesShoelace) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    const auto c = random_curve(rng, 6, 0.1);
    EXPECT_NEAR(c.area(), oracle::polygon_area(as_function(c), 200000), 1e-9);
    EXPECT_NEAR(c.equivalent_radius(), std::sqrt(c.area() / M_PI), 1e-15);
  }
}

TEST(BoundaryCurve, ContainsAndRigidMotions) {
  const auto c = oval().translated(Point(0.2, 0.1));
  EXPECT_TRUE(c.contains(Point(0.2, 0.1)));
  EXPECT_TRUE(c.contains(Point(0.7, 0.1)));
  EXPECT_FALSE(c.contains(Point(0.76, 0.1)));
  const double alpha = 0.7;
  const auto rc = c.rotated(alpha);
  for (double th : {0.0, 1.0, 2.0, 5.0}) {
    const Point p = c.point(th);
    const Point q(std::cos(alpha) * p.x() - std::sin(alpha) * p.y(), std::sin(alpha) * p.x() + std::cos(alpha) * p.y());
    EXPECT_NEAR((rc.point(th + alpha) - q).norm(), 0.0, 1e-14);
  }
  EXPECT_NEAR(rc.area(), c.area(), 1e-15);
}

TEST(BoundaryCurve, PerturbedAddsScaledCoefficients) {
  const auto c = oval();
  const FourierCoefficients d = series(0.01, {0.0, -0.02}, {0.003, 0.0});
  const auto p = c.perturbed(d, 0.5);
  EXPECT_NEAR(p.coefficients().a0, 0.505, 1e-15);
  EXPECT_NEAR(p.coefficients().cos[1], 0.04, 1e-15);
  EXPECT_NEAR(p.coefficients().sin[0], 0.0015, 1e-15);
}

TEST(FourierCoefficients, RoundTripThroughSamples) {
  std::mt19937 rng(9);
  const auto c = random_curve(rng, 6, 0.1);
  const auto s = sample_geometry(c, 64);
  const auto k = fourier_coefficients(s.radius, 6);
  EXPECT_NEAR(k.a0, c.coefficients().a0, 1e-15);
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(k.cos[i], c.coefficients().cos[i], 1e-15);
    EXPECT_NEAR(k.sin[i], c.coefficients().sin[i], 1e-15);
  }
}
