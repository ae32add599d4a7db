#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ufb/kernels.hpp"

namespace ufb::kernels {

namespace {

struct Table {
  cd (*dot)(const cd*, const cd*, std::size_t) noexcept;
  void (*axpy)(cd*, cd, const cd*, std::size_t) noexcept;
  void (*axpy_conj)(cd*, cd, const cd*, std::size_t) noexcept;
  double (*norm2)(const cd*, std::size_t) noexcept;
};

constexpr Table kScalar{scalar::dot, scalar::axpy, scalar::axpy_conj, scalar::norm2};
#if defined(UFB_HAVE_AVX2_KERNELS)
constexpr Table kAvx2{avx2::dot, avx2::axpy, avx2::axpy_conj, avx2::norm2};
#endif

const Table* table_for(Backend b) {
#if defined(UFB_HAVE_AVX2_KERNELS)
  if (b == Backend::Avx2) return &kAvx2;
#endif
  (void)b;
  return &kScalar;
}

Backend initial_backend() {
  if (const char* env = std::getenv("UFB_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && backend_supported(Backend::Avx2)) return Backend::Avx2;
  }
  return backend_supported(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{table_for(initial_backend())};
  return t;
}

}  // namespace

bool backend_supported(Backend b) noexcept {
  if (b == Backend::Scalar) return true;
#if defined(UFB_HAVE_AVX2_KERNELS)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() noexcept {
  return current().load(std::memory_order_relaxed) == &kScalar ? Backend::Scalar : Backend::Avx2;
}

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw std::invalid_argument("kernel backend not supported on this CPU: " +
                                std::string(backend_name(b)));
  current().store(table_for(b), std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::Scalar ? "scalar" : "avx2";
}

cd dot(std::span<const cd> a, std::span<const cd> b) {
  if (a.size() != b.size()) throw std::invalid_argument("kernels::dot: length mismatch");
  return current().load(std::memory_order_relaxed)->dot(a.data(), b.data(), a.size());
}

void axpy(std::span<cd> y, cd s, std::span<const cd> x) {
  if (y.size() != x.size()) throw std::invalid_argument("kernels::axpy: length mismatch");
  current().load(std::memory_order_relaxed)->axpy(y.data(), s, x.data(), x.size());
}

void axpy_conj(std::span<cd> y, cd s, std::span<const cd> x) {
  if (y.size() != x.size()) throw std::invalid_argument("kernels::axpy_conj: length mismatch");
  current().load(std::memory_order_relaxed)->axpy_conj(y.data(), s, x.data(), x.size());
}

double norm2(std::span<const cd> x) {
  return current().load(std::memory_order_relaxed)->norm2(x.data(), x.size());
}

}  // namespace ufb::kernels
