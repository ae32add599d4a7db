#include <gtest/gtest.h>

#include <algorithm>

#include "test_common.hpp"
#include "ufb/errors.hpp"
#include "ufb/rational.hpp"

using namespace ufb;
using namespace ufb::test;

namespace {
void expect_taps(const std::vector<cd>& got, std::initializer_list<double> want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  std::size_t k = 0;
  for (double w : want) {
    EXPECT_NEAR(got[k].real(), w, tol) << "tap " << k;
    EXPECT_NEAR(got[k].imag(), 0.0, tol);
    ++k;
  }
}
}  // namespace

TEST(RationalTF, ImpulseResponses) {
  expect_taps(rtf_impulse_response({taps({2}), taps({50, -17})}, 3), {4.000e-2, 1.360e-2, 4.624e-3}, 1e-15);
  expect_taps(rtf_impulse_response({taps({1}), taps({1})}, 3), {1, 0, 0}, 0.0);
  expect_taps(rtf_impulse_response({taps({14}), taps({50, -17})}, 2), {2.800e-1, 9.520e-2}, 1e-15);
}

TEST(RationalTF, NonCausalImpulseResponseRejected) {
  EXPECT_THROW(rtf_impulse_response({poly(0, {0, 1}), taps({1})}, 3), NonCausalError);
}

TEST(RationalTF, DenominatorNormalization) {
  // Same ratio with both parts scaled by -2 z^-1.
  const RationalTF a(taps({2}), taps({50, -17}));
  const RationalTF b(poly(-1, {-4}), poly(-2, {34, -100}));
  EXPECT_EQ(a.den().lowest_power() + static_cast<int>(a.den().coeffs().size()) - 1, 0);
  EXPECT_GT(a.den().coeff(0).real(), 0.0);
  EXPECT_DOUBLE_EQ(a.den().coeff(0).imag(), 0.0);
  EXPECT_TRUE(equivalent(a, b));
  EXPECT_LT(cross_residual(a, b), 1e-15);
  EXPECT_FALSE(equivalent(a, RationalTF(taps({2.001}), taps({50, -17}))));
  EXPECT_THROW(RationalTF(taps({1}), LaurentPoly()), std::invalid_argument);
}

TEST(RationalTF, PolesStableFirstOrder) {
  const PoleReport r = rtf_poles({taps({2}), taps({50, -17})});
  ASSERT_EQ(r.poles.size(), 1u);
  EXPECT_NEAR(r.poles[0].real(), 0.34, 1e-14);
  EXPECT_TRUE(r.stable);
}

TEST(RationalTF, PolesUnstable) {
  const PoleReport r = rtf_poles({taps({1}), taps({1, -2})});
  ASSERT_EQ(r.poles.size(), 1u);
  EXPECT_NEAR(r.poles[0].real(), 2.0, 1e-14);
  EXPECT_FALSE(r.stable);
}

TEST(RationalTF, PolesSecondOrder) {
  const PoleReport r = rtf_poles({taps({1}), taps({2594, -642, -147})});
  ASSERT_EQ(r.poles.size(), 2u);
  const double disc = std::sqrt(642.0 * 642.0 + 4.0 * 2594.0 * 147.0);
  const double p1 = (642.0 + disc) / (2.0 * 2594.0), p2 = (642.0 - disc) / (2.0 * 2594.0);
  EXPECT_NEAR(r.poles[0].real(), p1, 1e-13);
  EXPECT_NEAR(r.poles[1].real(), p2, 1e-13);
  EXPECT_NEAR(p1, 0.392, 1e-3);
  EXPECT_NEAR(p2, -0.145, 1e-3);
  EXPECT_TRUE(r.stable);
}

TEST(RationalTF, ConstantDenominatorHasNoPoles) {
  const PoleReport r = rtf_poles({taps({1, 2}), taps({3})});
  EXPECT_TRUE(r.poles.empty());
  EXPECT_TRUE(r.stable);
}

TEST(RationalTF, GuardBandMarksUnitCirclePoleUnstable) {
  EXPECT_FALSE(rtf_poles({taps({1}), taps({1, -1})}, 1e-9).stable);
}

TEST(RationalTF, ReduceForDisplayCancelsCommonFactor) {
  const LaurentPoly f = taps({1, -0.5});
  const RationalTF r(lp_mul(taps({2}), f), lp_mul(taps({50, -17}), f));
  const RationalTF d = reduce_for_display(r);
  EXPECT_EQ(d.den().coeffs().size(), 2u);
  EXPECT_TRUE(equivalent(d, RationalTF(taps({2}), taps({50, -17}))));
}

TEST(RationalMatrix, CommonAndPerEntryFormsAgree) {
  const RationalMatrix a = expected_exp1();
  ASSERT_TRUE(a.shared_denominator().has_value());
  const auto [num, den] = a.to_common();
  const RationalMatrix b = RationalMatrix::from_common(num, den);
  EXPECT_TRUE(equivalent(a, b));
  const cd z = unit(0.3);
  EXPECT_LE((a.evaluate(z) - b.evaluate(z)).norm(), 1e-14);
}

TEST(RationalTFProperty, ImpulseResponseGeometricBound) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> rad(0.05, 0.9), ang(0.0, 3.14159);
  for (int trial = 0; trial < 50; ++trial) {
    const int order = 1 + trial % 3;
    std::vector<cd> roots;
    for (int k = 0; k < order; ++k) roots.push_back(std::polar(rad(rng), ang(rng)));
    const LaurentPoly den = polynomial_from_roots(roots, 1.0, -order);
    const RationalTF r(random_poly(rng, -2, 3), den);
    double rho = 0.0;
    for (const cd& p : roots) rho = std::max(rho, std::abs(p));
    const auto h = rtf_impulse_response(r, 80);
    // Fit C on the first 40 taps, then check the rest stay under C rho^k.
    double c = 0.0;
    for (std::size_t k = 0; k < 40; ++k) c = std::max(c, std::abs(h[k]) / std::pow(rho, k));
    for (std::size_t k = 40; k < h.size(); ++k) EXPECT_LE(std::abs(h[k]), 4.0 * c * std::pow(rho, k)) << "k=" << k;
  }
}

TEST(RationalTFProperty, RootsRoundTrip) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const LaurentPoly p = random_poly(rng, -(1 + trial % 6), 2 + trial % 6);
    const auto roots = polynomial_roots(p);
    for (const cd& r : roots) EXPECT_LE(std::abs(p(r)), 1e-8 * p.norm() * std::pow(std::max(1.0, std::abs(r)), 8));
  }
}
