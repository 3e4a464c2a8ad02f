#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "qfock/deformation.hpp"

using qfock::d_factorial;
using qfock::DeformationScheme;
using qfock::eval_d;

namespace {

constexpr const char* kBmText = "(q^n - q^(-n))/(q - q^(-1))";

// Scale-relative closeness: D_q(n) reaches ~1e19 at n = 64 for q = 2.
::testing::AssertionResult RelNear(double a, double b, double tol) {
  const double err = std::abs(a - b) / std::max(1.0, std::abs(b));
  if (err <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a << " vs " << b << " (rel err " << err << ")";
}

}  // namespace

TEST(EvalD, BiedenharnMacfarlaneValues) {
  const auto bm2 = DeformationScheme::biedenharn_macfarlane(2.0);
  EXPECT_NEAR(eval_d(bm2, 2), 2.5, 1e-15);
  EXPECT_NEAR(eval_d(bm2, 3), 5.25, 1e-14);
  EXPECT_EQ(eval_d(DeformationScheme::biedenharn_macfarlane(1.0), 5), 5.0);
  EXPECT_EQ(eval_d(DeformationScheme::biedenharn_macfarlane(1.0 + 1e-9), 5), 5.0);
  EXPECT_EQ(eval_d(DeformationScheme::undeformed(), 17), 17.0);
}

TEST(EvalD, ZeroAndOneForAllSchemes) {
  for (double q : {0.5, 0.9, 1.0, 1.1, 2.0}) {
    for (const auto& s : {DeformationScheme::biedenharn_macfarlane(q), DeformationScheme::undeformed()}) {
      EXPECT_EQ(eval_d(s, 0), 0.0);
      EXPECT_NEAR(eval_d(s, 1), 1.0, 1e-12);
    }
  }
  const auto custom = DeformationScheme::custom("n^2", 3.0);
  EXPECT_EQ(eval_d(custom, 0), 0.0);
  EXPECT_EQ(eval_d(custom, 1), 1.0);
}

TEST(EvalD, FiniteOnGrid) {
  for (double q : {0.5, 0.9, 1.1, 2.0}) {
    const auto s = DeformationScheme::biedenharn_macfarlane(q);
    for (unsigned n = 0; n <= 64; ++n) EXPECT_TRUE(std::isfinite(eval_d(s, n)));
  }
}

TEST(EvalD, SymmetricUnderInverseQ) {
  for (double q : {0.5, 0.9, 1.1, 2.0}) {
    const auto s = DeformationScheme::biedenharn_macfarlane(q);
    const auto inv = DeformationScheme::biedenharn_macfarlane(1.0 / q);
    for (unsigned n = 0; n <= 64; ++n) EXPECT_TRUE(RelNear(eval_d(s, n), eval_d(inv, n), 1e-12)) << "q=" << q << " n=" << n;
  }
}

TEST(EvalD, MatchesLongDoubleOracle) {
  for (double q : {0.5, 0.9, 1.1, 2.0}) {
    const auto s = DeformationScheme::biedenharn_macfarlane(q);
    for (unsigned n = 0; n <= 64; ++n)
      EXPECT_TRUE(RelNear(eval_d(s, n), static_cast<double>(oracle::bm(q, n)), 1e-13)) << "q=" << q << " n=" << n;
  }
}

TEST(EvalD, CustomTextMatchesBuiltIn) {
  for (double q : {0.5, 0.9, 1.1, 2.0}) {
    const auto builtin = DeformationScheme::biedenharn_macfarlane(q);
    const auto custom = DeformationScheme::custom(kBmText, q);
    for (unsigned n = 0; n <= 64; ++n) EXPECT_TRUE(RelNear(eval_d(custom, n), eval_d(builtin, n), 1e-12)) << "q=" << q << " n=" << n;
  }
}

TEST(Scheme, RejectsNonPositiveQ) {
  EXPECT_THROW(DeformationScheme::biedenharn_macfarlane(0.0), std::invalid_argument);
  EXPECT_THROW(DeformationScheme::biedenharn_macfarlane(-2.0), std::invalid_argument);
  EXPECT_THROW(DeformationScheme::biedenharn_macfarlane(std::nan("")), std::invalid_argument);
  EXPECT_THROW(DeformationScheme::custom("n", 0.0), std::invalid_argument);
}

TEST(Scheme, CustomProbeRules) {
  EXPECT_THROW(DeformationScheme::custom("n + 1", 2.0), std::invalid_argument);   // D(0) = 1
  EXPECT_THROW(DeformationScheme::custom("2*n", 2.0), std::invalid_argument);     // D(1) = 2
  EXPECT_THROW(DeformationScheme::custom(kBmText, 1.0), std::invalid_argument);   // 0/0 at q = 1
  EXPECT_THROW(DeformationScheme::custom("q + ", 2.0), qfock::ParseError);
  EXPECT_NO_THROW(DeformationScheme::custom("n^2", 2.0));
  EXPECT_NO_THROW(DeformationScheme::custom("n*q^(n-1)", 2.0));
}

TEST(Scheme, CustomEvaluationErrors) {
  const auto s = DeformationScheme::custom("2*n/(3-n)", 2.0);  // passes the probes, singular at n = 3
  EXPECT_NEAR(eval_d(s, 2), 4.0, 1e-15);
  EXPECT_THROW(eval_d(s, 3), qfock::EvalError);
}

TEST(Scheme, Descriptor) {
  EXPECT_EQ(DeformationScheme::undeformed().descriptor(), "undeformed");
  EXPECT_EQ(DeformationScheme::biedenharn_macfarlane(2).descriptor(), "bm");
  EXPECT_EQ(DeformationScheme::custom("n", 2).descriptor(), "expr:n");
  EXPECT_EQ(qfock::make_scheme("bm", 2.0).kind(), qfock::SchemeKind::biedenharn_macfarlane);
  EXPECT_THROW(qfock::make_scheme("sqrt", 2.0), std::invalid_argument);
}

TEST(Factorial, Values) {
  EXPECT_EQ(d_factorial(DeformationScheme::biedenharn_macfarlane(2.0), 0), 1.0);
  EXPECT_EQ(d_factorial(DeformationScheme::undeformed(), 4), 24.0);
  EXPECT_NEAR(d_factorial(DeformationScheme::biedenharn_macfarlane(2.0), 3), 13.125, 1e-13);
}

TEST(Factorial, RatioReproducesD) {
  for (double q : {0.5, 0.9, 1.0, 1.1, 2.0}) {
    const auto s = DeformationScheme::biedenharn_macfarlane(q);
    for (unsigned n = 1; n <= 30; ++n)
      EXPECT_TRUE(RelNear(d_factorial(s, n) / d_factorial(s, n - 1), eval_d(s, n), 1e-12)) << "q=" << q << " n=" << n;
  }
}

TEST(Factorial, OverflowNamesN) {
  try {
    d_factorial(DeformationScheme::undeformed(), 200);
    FAIL();
  } catch (const std::range_error& e) {
    EXPECT_NE(std::string(e.what()).find("n=171"), std::string::npos) << e.what();
  }
}
