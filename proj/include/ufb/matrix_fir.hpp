#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ufb/laurent.hpp"

namespace ufb {

/// Taps a_{p,q,m}: M outputs x L inputs x tap_len, stored contiguously per (p, q).
class TapTable {
 public:
  TapTable() = default;
  TapTable(std::size_t outputs, std::size_t inputs, std::size_t tap_len)
      : M_(outputs), L_(inputs), T_(tap_len), data_(outputs * inputs * tap_len) {}

  std::size_t outputs() const noexcept { return M_; }
  std::size_t inputs() const noexcept { return L_; }
  std::size_t tap_len() const noexcept { return T_; }

  std::span<cd> tap(std::size_t p, std::size_t q) { return {data_.data() + (p * L_ + q) * T_, T_}; }
  std::span<const cd> tap(std::size_t p, std::size_t q) const { return {data_.data() + (p * L_ + q) * T_, T_}; }
  cd& at(std::size_t p, std::size_t q, std::size_t m) { return data_[(p * L_ + q) * T_ + m]; }
  cd at(std::size_t p, std::size_t q, std::size_t m) const { return data_[(p * L_ + q) * T_ + m]; }

  double norm() const noexcept;
  const std::vector<cd>& raw() const noexcept { return data_; }
  friend bool operator==(const TapTable&, const TapTable&) = default;

 private:
  std::size_t M_ = 0, L_ = 0, T_ = 0;
  std::vector<cd> data_;
};

/// ||a - b|| over all taps.
double tap_distance(const TapTable& a, const TapTable& b);

/// Fixed M x L matrix of FIR filters running at block rate.
class MatrixFir {
 public:
  explicit MatrixFir(TapTable taps);

  std::size_t outputs() const noexcept { return taps_.outputs(); }
  std::size_t inputs() const noexcept { return taps_.inputs(); }
  std::size_t tap_len() const noexcept { return taps_.tap_len(); }

  /// Shifts `v` into the delay lines, then y_p = sum_q sum_m a_{p,q,m} v_q(n-m).
  std::vector<cd> filter_block(std::span<const cd> v);
  /// Same, writing into `y`.
  void filter_block(std::span<const cd> v, std::span<cd> y);

  /// Channel q history, newest first: [v_q(n), v_q(n-1), ...].
  std::span<const cd> history(std::size_t q) const { return {lines_.data() + q * tap_len(), tap_len()}; }

  const TapTable& taps() const noexcept { return taps_; }
  TapTable& taps() noexcept { return taps_; }
  void reset();

 private:
  TapTable taps_;
  std::vector<cd> lines_;
};

}  // namespace ufb
