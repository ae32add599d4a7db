#include "ufb/kernels.hpp"

namespace ufb::kernels::scalar {

// Written on real/imag parts so the compiler never calls __muldc3.

cd dot(const cd* a, const cd* b, std::size_t n) noexcept {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

void axpy(cd* y, cd s, const cd* x, std::size_t n) noexcept {
  const double sr = s.real(), si = s.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + sr * xr - si * xi, y[i].imag() + sr * xi + si * xr};
  }
}

void axpy_conj(cd* y, cd s, const cd* x, std::size_t n) noexcept {
  const double sr = s.real(), si = s.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + sr * xr + si * xi, y[i].imag() - sr * xi + si * xr};
  }
}

double norm2(const cd* x, std::size_t n) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

}  // namespace ufb::kernels::scalar
