#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "ufb/kernels.hpp"

using namespace ufb::kernels;

namespace {

std::vector<cd> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cd> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

double max_abs(const std::vector<cd>& v) {
  double m = 0.0;
  for (const cd& x : v) m = std::max(m, std::abs(x));
  return m;
}

// Restores the startup backend after each test.
class KernelTest : public ::testing::Test {
 protected:
  void SetUp() override { saved_ = active_backend(); }
  void TearDown() override { set_backend(saved_); }
  Backend saved_ = Backend::Scalar;
};

}  // namespace

TEST_F(KernelTest, ScalarReferenceValues) {
  const std::vector<cd> a{{1, 2}, {3, -1}}, b{{0, 1}, {2, 2}};
  EXPECT_EQ(scalar::dot(a.data(), b.data(), 2), cd(1, 2) * cd(0, 1) + cd(3, -1) * cd(2, 2));
  std::vector<cd> y{{1, 0}, {0, 1}};
  scalar::axpy_conj(y.data(), cd(0, 1), a.data(), 2);
  EXPECT_EQ(y[0], cd(1, 0) + cd(0, 1) * cd(1, -2));
  EXPECT_DOUBLE_EQ(scalar::norm2(a.data(), 2), 15.0);
  EXPECT_EQ(scalar::dot(a.data(), b.data(), 0), cd(0));
}

TEST_F(KernelTest, ScalarBackendAlwaysAvailable) {
  EXPECT_TRUE(backend_supported(Backend::Scalar));
  set_backend(Backend::Scalar);
  EXPECT_EQ(active_backend(), Backend::Scalar);
  EXPECT_EQ(backend_name(Backend::Scalar), "scalar");
}

TEST_F(KernelTest, UnsupportedBackendRejected) {
  if (backend_supported(Backend::Avx2)) GTEST_SKIP() << "CPU supports AVX2";
  EXPECT_THROW(set_backend(Backend::Avx2), std::invalid_argument);
}

#ifdef UFB_HAVE_AVX2_KERNELS
TEST_F(KernelTest, Avx2MatchesScalar) {
  if (!backend_supported(Backend::Avx2)) GTEST_SKIP() << "CPU lacks AVX2/FMA";
  std::mt19937_64 rng(41);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto a = random_vec(rng, n), b = random_vec(rng, n);
    const cd s{0.7, -1.3};
    const double scale = 1.0 + static_cast<double>(n);

    EXPECT_LE(std::abs(avx2::dot(a.data(), b.data(), n) - scalar::dot(a.data(), b.data(), n)), 1e-13 * scale) << n;
    EXPECT_NEAR(avx2::norm2(a.data(), n), scalar::norm2(a.data(), n), 1e-13 * scale) << n;

    auto y1 = random_vec(rng, n), y2 = y1;
    avx2::axpy(y1.data(), s, a.data(), n);
    scalar::axpy(y2.data(), s, a.data(), n);
    for (std::size_t i = 0; i < n; ++i) y1[i] -= y2[i];
    EXPECT_LE(max_abs(y1), 1e-14 * scale) << n;

    auto z1 = random_vec(rng, n), z2 = z1;
    avx2::axpy_conj(z1.data(), s, a.data(), n);
    scalar::axpy_conj(z2.data(), s, a.data(), n);
    for (std::size_t i = 0; i < n; ++i) z1[i] -= z2[i];
    EXPECT_LE(max_abs(z1), 1e-14 * scale) << n;
  }
}

TEST_F(KernelTest, DispatchFollowsSelectedBackend) {
  if (!backend_supported(Backend::Avx2)) GTEST_SKIP() << "CPU lacks AVX2/FMA";
  std::mt19937_64 rng(42);
  const auto a = random_vec(rng, 37), b = random_vec(rng, 37);
  set_backend(Backend::Avx2);
  EXPECT_EQ(active_backend(), Backend::Avx2);
  EXPECT_EQ(dot(a, b), avx2::dot(a.data(), b.data(), a.size()));
  set_backend(Backend::Scalar);
  EXPECT_EQ(dot(a, b), scalar::dot(a.data(), b.data(), a.size()));
}
#endif

TEST_F(KernelTest, DispatchedSpanChecks) {
  const std::vector<cd> a(3), b(4);
  EXPECT_THROW(dot(a, b), std::invalid_argument);
  std::vector<cd> y(2);
  EXPECT_THROW(axpy(y, 1.0, a), std::invalid_argument);
}
