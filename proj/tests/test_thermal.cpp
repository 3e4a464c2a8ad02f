#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qfock/squeezed.hpp"
#include "qfock/thermal.hpp"

using namespace qfock;

namespace {

ThermalSpec spec(double theta, DeformationScheme scheme = DeformationScheme::undeformed(), double tol = 1e-12) {
  return {theta, std::move(scheme), tol};
}

const double kThetaPoint3 = std::log(10.0 / 3.0);  // e^-theta = 0.3

}  // namespace

TEST(ThermalProbabilities, ZeroTemperature) {
  const auto t = thermal_probabilities(spec(50.0));
  EXPECT_NEAR(t.p[0], 1.0, 1e-15);
  EXPECT_LE(t.p.size(), 2u);
}

TEST(ThermalProbabilities, HalfGeometricAtLn2) {
  const auto t = thermal_probabilities(spec(std::log(2.0)));
  for (std::size_t n = 0; n < 20; ++n) EXPECT_NEAR(t.p[n], std::pow(0.5, n + 1.0), 1e-15);
}

TEST(ThermalProbabilities, Normalized) {
  for (double theta : {0.2, 1.0, 3.0}) EXPECT_NEAR(total(thermal_probabilities(spec(theta)).p), 1.0, 1e-12);
}

TEST(ThermalProbabilities, RejectsNonPositiveTheta) {
  EXPECT_THROW(thermal_probabilities(spec(0.0)), std::invalid_argument);
  EXPECT_THROW(thermal_probabilities(spec(-1.0)), std::invalid_argument);
  EXPECT_THROW(thermal_entropy_bits(0.0), std::invalid_argument);
}

TEST(ThermalNbar, SeriesUndeformedIsBoseEinstein) {
  for (double theta : {0.2, 0.5, 1.0, 3.0}) EXPECT_NEAR(thermal_nbar_series(spec(theta)), 1.0 / std::expm1(theta), 1e-10);
}

TEST(ThermalNbar, SeriesDeformed) {
  EXPECT_NEAR(thermal_nbar_series(spec(kThetaPoint3, DeformationScheme::biedenharn_macfarlane(2.0))), 0.61764705882352941, 1e-12);
  EXPECT_THROW(thermal_nbar_series(spec(0.5, DeformationScheme::biedenharn_macfarlane(2.0))), DivergenceError);
}

TEST(ThermalNbar, SplitWeights) {
  for (double q : {0.2, 0.5, 0.9, 1.1, 2.0, 5.0}) {
    const auto w = thermal_weights(q);
    EXPECT_NEAR(w.c1 + w.c2, 1.0, 1e-15);
    EXPECT_GT(w.c1, 0.0);
    EXPECT_GT(w.c2, 0.0);
    // the printed ratio forms
    EXPECT_NEAR(w.c1, (q - 1) / (q - 1 / q), 1e-12);
    EXPECT_NEAR(w.c2, (1 - 1 / q) / (q - 1 / q), 1e-12);
  }
}

TEST(ThermalNbar, SplitBranches) {
  const auto split = thermal_split(2.0, kThetaPoint3);
  EXPECT_NEAR(split.c1, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(split.c1 / std::expm1(split.exponent_plus), 0.11764705882352941, 1e-14);
  EXPECT_NEAR(split.c2 / std::expm1(split.exponent_minus), 0.5, 1e-14);
  EXPECT_NEAR(split.nbar, 0.61764705882352941, 1e-14);
  EXPECT_NEAR(split.exponent_plus - split.exponent_minus, 2 * std::log(2.0), 1e-15);
}

TEST(ThermalNbar, ClosedMatchesSeriesOnGrid) {
  for (double q : {0.5, 0.9, 1.1, 2.0})
    for (double theta : {1.0, 2.0, 3.0}) {
      const double closed = thermal_nbar_closed_bm(q, theta);
      const double series = thermal_nbar_series(spec(theta, DeformationScheme::biedenharn_macfarlane(q)));
      EXPECT_NEAR(closed, series, 1e-10) << q << " " << theta;
      const auto ref = oracle::geometric_bm_moments(q, std::exp(-static_cast<long double>(theta)));
      EXPECT_NEAR(closed, static_cast<double>(ref.adag_a), 1e-12) << q << " " << theta;
    }
}

TEST(ThermalNbar, ClosedLimits) {
  EXPECT_EQ(thermal_nbar_closed_bm(1.0, 1.0), 1.0 / std::expm1(1.0));
  EXPECT_NEAR(thermal_nbar_closed_bm(1.0 + 1e-6, 1.0), 1.0 / std::expm1(1.0), 1e-4);
  EXPECT_THROW(thermal_nbar_closed_bm(2.0, 0.5), DivergenceError);
  EXPECT_THROW(thermal_nbar_closed_bm(0.5, 0.5), DivergenceError);
}

TEST(ThermalMoments, BosonIdentityAtUnitQ) {
  const double theta = std::log(2.0);
  const double nbar = thermal_nbar_closed_bm(1.0, theta);
  EXPECT_NEAR(nbar, 1.0, 1e-14);
  const auto m = thermal_moments_closed(theta, nbar);
  EXPECT_NEAR(m.a_adag, 2.0, 1e-14);
  EXPECT_NEAR(m.a_adag, m.adag_a + 1.0, 1e-14);
}

TEST(ThermalMoments, PositiveExponentsMatchSums) {
  const DeformationScheme schemes[] = {DeformationScheme::undeformed(), DeformationScheme::biedenharn_macfarlane(0.5),
                                       DeformationScheme::biedenharn_macfarlane(2.0), DeformationScheme::custom("n^2", 1.0)};
  for (const auto& s : schemes)
    for (double theta : {1.0, 2.0, 3.0}) {
      const auto series = thermal_series(spec(theta, s));
      const auto closed = thermal_moments_closed(theta, series.nbar());
      EXPECT_NEAR(closed.a_adag, series.moments.a_adag, 1e-10);
      EXPECT_NEAR(closed.a_atilde, series.moments.a_atilde, 1e-10);
      EXPECT_NEAR(closed.adag_atildedag, series.moments.adag_atildedag, 1e-10);
      EXPECT_NEAR(series.moments.a_adag * std::exp(-theta), series.nbar(), 1e-10);
      // the negative-exponent reading is far off
      EXPECT_GT(std::abs(series.moments.a_adag - std::exp(-theta) * series.nbar()), 0.1);
    }
}

TEST(ThermalMoments, ZeroTemperatureIsVacuum) {
  const double theta = 50.0;
  const auto m = thermal_moments_closed(theta, thermal_nbar_closed_bm(2.0, theta));
  EXPECT_NEAR(m.adag_a, 0.0, 1e-20);
  EXPECT_NEAR(m.a_adag, 1.0, 1e-12);
  EXPECT_NEAR(m.a_atilde, 0.0, 1e-10);
  const auto degenerate = thermal_moments_closed(1000.0, 0.0);
  EXPECT_EQ(degenerate.adag_a, 0.0);
  EXPECT_EQ(degenerate.a_adag, 1.0);
  const auto v = thermal_variances_closed(1000.0, 0.0);
  EXPECT_EQ(v.var1, 0.25);
  EXPECT_EQ(v.product, 1.0 / 16);
}

TEST(ThermalVariances, UnitQLimit) {
  for (double theta : {0.5, 1.0, 3.0}) {
    const double nbar = 1.0 / std::expm1(theta);
    const auto v = thermal_variances_closed(theta, nbar);
    const double h = std::exp(0.5 * theta);
    EXPECT_NEAR(v.var1, 0.25 * (h + 1) / (h - 1), 1e-12);
    EXPECT_NEAR(v.var2, 0.25 * (h - 1) / (h + 1), 1e-12);
    EXPECT_NEAR(v.product, 1.0 / 16, 1e-12);
    EXPECT_NEAR(v.var1 * v.var2, v.product, 1e-12);
  }
}

TEST(ThermalVariances, MatchMomentRoute) {
  for (double q : {0.5, 0.9, 1.1, 2.0})
    for (double theta : {1.0, 2.0, 3.0}) {
      const auto series = thermal_series(spec(theta, DeformationScheme::biedenharn_macfarlane(q)));
      const auto closed = thermal_variances_closed(theta, thermal_nbar_closed_bm(q, theta));
      const auto v = quadrature_variances(series.moments);
      EXPECT_NEAR(closed.var1, v.var1, 1e-10);
      EXPECT_NEAR(closed.var2, v.var2, 1e-10);
      EXPECT_NEAR(closed.product, v.product(), 1e-10);
      EXPECT_NEAR(closed.var1 * closed.var2, closed.product, 1e-12);
    }
}

TEST(ThermalEntropy, Values) {
  EXPECT_NEAR(thermal_entropy_bits(std::log(2.0)), 2.0, 1e-14);
  EXPECT_NEAR(thermal_entropy_bits(60.0), 0.0, 1e-20);
  for (double theta : {0.2, 1.0, 3.0}) {
    const auto t = thermal_probabilities(spec(theta));
    EXPECT_NEAR(shannon_entropy_bits(t.p), thermal_entropy_bits(theta), 1e-8);
    EXPECT_NEAR(static_cast<double>(oracle::geometric_entropy_bits(std::exp(-theta))), thermal_entropy_bits(theta), 1e-12);
  }
}

TEST(Correspondence, SqueezedEqualsThermalUnderSubstitution) {
  for (double theta : {0.8, 1.0, 2.0, 3.0}) {
    const double xi = std::atanh(std::exp(-0.5 * theta));
    EXPECT_NEAR(entanglement_entropy_closed(xi), thermal_entropy_bits(theta), 1e-12);
    for (double q : {0.5, 1.0, 2.0}) {
      if (theta <= std::abs(std::log(q))) continue;
      const auto scheme = DeformationScheme::biedenharn_macfarlane(q);
      const auto s = squeezed_series({xi, scheme, 1e-12}).moments;
      const auto t = thermal_series(spec(theta, scheme)).moments;
      EXPECT_NEAR(s.adag_a, t.adag_a, 1e-12);
      EXPECT_NEAR(s.a_adag, t.a_adag, 1e-12);
      EXPECT_NEAR(s.a_atilde, t.a_atilde, 1e-12);
      EXPECT_NEAR(nbar_closed_bm(q, xi), thermal_nbar_closed_bm(q, theta), 1e-12);
    }
  }
}
