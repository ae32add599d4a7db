// Compiled with -mavx2 -mfma. Only reached after a CPUID check.

#include <immintrin.h>

#include "ufb/kernels.hpp"

namespace ufb::kernels::avx2 {

namespace {

// Two complex doubles per register: [re0, im0, re1, im1].
inline __m256d load2(const cd* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cd* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

cd dot(const cd* a, const cd* b, std::size_t n) noexcept {
  // acc_re_parts lanes: [ar*br, ar*bi], acc_im_parts lanes: [ai*bi, ai*br]
  __m256d acc_r = _mm256_setzero_pd();
  __m256d acc_i = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i);
    const __m256d vb = load2(b + i);
    const __m256d a_re = _mm256_movedup_pd(va);
    const __m256d a_im = _mm256_permute_pd(va, 0xF);
    const __m256d b_sw = _mm256_permute_pd(vb, 0x5);
    acc_r = _mm256_fmadd_pd(a_re, vb, acc_r);
    acc_i = _mm256_fmadd_pd(a_im, b_sw, acc_i);
  }
  const __m256d combined = _mm256_addsub_pd(acc_r, acc_i);
  const __m128d lo = _mm256_castpd256_pd128(combined);
  const __m128d hi = _mm256_extractf128_pd(combined, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  double re = _mm_cvtsd_f64(s);
  double im = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

void axpy(cd* y, cd s, const cd* x, std::size_t n) noexcept {
  const __m256d s_re = _mm256_set1_pd(s.real());
  const __m256d s_im = _mm256_set1_pd(s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = load2(x + i);
    const __m256d x_sw = _mm256_permute_pd(vx, 0x5);
    const __m256d prod = _mm256_fmaddsub_pd(s_re, vx, _mm256_mul_pd(s_im, x_sw));
    store2(y + i, _mm256_add_pd(load2(y + i), prod));
  }
  scalar::axpy(y + i, s, x + i, n - i);
}

void axpy_conj(cd* y, cd s, const cd* x, std::size_t n) noexcept {
  const __m256d s_re = _mm256_set1_pd(s.real());
  const __m256d s_im = _mm256_set1_pd(s.imag());
  const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_xor_pd(load2(x + i), conj_mask);
    const __m256d x_sw = _mm256_permute_pd(vx, 0x5);
    const __m256d prod = _mm256_fmaddsub_pd(s_re, vx, _mm256_mul_pd(s_im, x_sw));
    store2(y + i, _mm256_add_pd(load2(y + i), prod));
  }
  scalar::axpy_conj(y + i, s, x + i, n - i);
}

double norm2(const cd* x, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  return hsum(acc) + scalar::norm2(x + i, n - i);
}

}  // namespace ufb::kernels::avx2
