#pragma once

// Complex double inner-loop kernels with a scalar reference path and an
// AVX2/FMA path chosen once at startup from CPUID. The environment variable
// UFB_KERNELS=scalar|avx2 overrides the choice; set_backend() does the same
// for tests.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace ufb::kernels {

using cd = std::complex<double>;

enum class Backend { Scalar, Avx2 };

bool backend_supported(Backend b) noexcept;
Backend active_backend() noexcept;
/// Throws std::invalid_argument if the CPU cannot run `b`.
void set_backend(Backend b);
std::string_view backend_name(Backend b) noexcept;

/// sum_i a[i] * b[i]
cd dot(std::span<const cd> a, std::span<const cd> b);
/// y[i] += s * x[i]
void axpy(std::span<cd> y, cd s, std::span<const cd> x);
/// y[i] += s * conj(x[i])
void axpy_conj(std::span<cd> y, cd s, std::span<const cd> x);
/// sum_i |x[i]|^2
double norm2(std::span<const cd> x);

// Backend entry points; the dispatched functions above forward here.
namespace scalar {
cd dot(const cd* a, const cd* b, std::size_t n) noexcept;
void axpy(cd* y, cd s, const cd* x, std::size_t n) noexcept;
void axpy_conj(cd* y, cd s, const cd* x, std::size_t n) noexcept;
double norm2(const cd* x, std::size_t n) noexcept;
}  // namespace scalar

namespace avx2 {
cd dot(const cd* a, const cd* b, std::size_t n) noexcept;
void axpy(cd* y, cd s, const cd* x, std::size_t n) noexcept;
void axpy_conj(cd* y, cd s, const cd* x, std::size_t n) noexcept;
double norm2(const cd* x, std::size_t n) noexcept;
}  // namespace avx2

}  // namespace ufb::kernels
