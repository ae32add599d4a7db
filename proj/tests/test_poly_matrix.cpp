#include <gtest/gtest.h>

#include "test_common.hpp"
#include "ufb/errors.hpp"
#include "ufb/poly_matrix.hpp"
#include "ufb/spectra.hpp"
#include "ufb/harness.hpp"

using namespace ufb;
using namespace ufb::test;

TEST(PolyMatrix, OneByOne) {
  PolyMatrix m(1, 1);
  m(0, 0) = taps({3, -1});
  const auto [det, adj] = pm_det_adjugate(m);
  EXPECT_EQ(det, taps({3, -1}));
  EXPECT_EQ(adj(0, 0), LaurentPoly::constant(1.0));
}

TEST(PolyMatrix, IdentityDetAndAdjugate) {
  const auto [det, adj] = pm_det_adjugate(PolyMatrix::identity(2));
  EXPECT_EQ(det, LaurentPoly::constant(1.0));
  EXPECT_EQ(adj, PolyMatrix::identity(2));
}

TEST(PolyMatrix, RejectsNonSquare) { EXPECT_THROW(pm_det_adjugate(PolyMatrix(2, 3)), DimensionError); }

TEST(PolyMatrix, ExampleBankAdjugateIdentity) {
  const PolyMatrix svv = analysis_psd(experiment1_bank(), InputPSD::white());
  const auto [det, adj] = pm_det_adjugate(svv);
  const PolyMatrix lhs = svv * adj;
  const PolyMatrix rhs = PolyMatrix::identity(2) * det;
  EXPECT_LE(relative_difference(lhs, rhs), 1e-12);
  // det S_vv is paraconjugate symmetric and contains the factor 50 - 17z^-1.
  EXPECT_LE(relative_difference(lp_paraconjugate(det), det), 1e-12);
  EXPECT_LE(std::abs(det(cd(17.0 / 50.0))), 1e-9 * det.norm());
}

TEST(PolyMatrix, ProductDimensionMismatch) {
  EXPECT_THROW(PolyMatrix(2, 3) * PolyMatrix(2, 3), DimensionError);
}

TEST(PolyMatrix, EvaluateMatchesEntries) {
  PolyMatrix m(2, 2);
  m(0, 1) = taps({1, 2});
  m(1, 0) = poly(1, {3});
  const auto e = m.evaluate(cd(2.0));
  EXPECT_EQ(e(0, 1), cd(2.0));
  EXPECT_EQ(e(1, 0), cd(6.0));
  EXPECT_EQ(e(0, 0), cd(0.0));
}

TEST(PolyMatrixProperty, AdjugateIdentityRandom) {
  std::mt19937_64 rng(21);
  for (std::size_t n = 2; n <= 4; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      PolyMatrix m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = random_poly(rng, -trial % 3, 1 + (i + j + trial) % 4);
      const auto [det, adj] = pm_det_adjugate(m);
      const PolyMatrix diff = m * adj - PolyMatrix::identity(n) * det;
      EXPECT_LE(diff.norm(), 1e-9 * std::max(1.0, det.norm())) << "n=" << n;
      // det agrees with the numeric determinant at a random point.
      const cd z = random_unit(rng);
      const cd numeric = m.evaluate(z).determinant();
      EXPECT_LE(std::abs(det(z) - numeric), 1e-9 * std::max(1.0, std::abs(numeric)));
    }
}

TEST(PolyMatrixProperty, ParaconjugateInvolution) {
  std::mt19937_64 rng(22);
  PolyMatrix m(2, 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = random_poly(rng, -1, 3);
  EXPECT_EQ(pm_paraconjugate(pm_paraconjugate(m)), m);
  EXPECT_EQ(pm_paraconjugate(m).rows(), 3u);
}
