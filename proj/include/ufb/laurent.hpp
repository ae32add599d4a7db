#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ufb {

using cd = std::complex<double>;

/// Finite two-sided power series sum_k c[k] z^(lowest_power + k).
///
/// Every constructor and operation trims end coefficients whose magnitude is
/// below 1e-12 of the largest coefficient (absolute floor 1e-300), so equal
/// polynomials share one representation. The zero polynomial has no
/// coefficients and lowest power 0.
class LaurentPoly {
 public:
  static constexpr double kRelativeTrim = 1e-12;
  static constexpr double kAbsoluteTrim = 1e-300;

  LaurentPoly() = default;
  LaurentPoly(int lowest_power, std::vector<cd> coeffs);

  static LaurentPoly constant(cd c);
  static LaurentPoly monomial(int power, cd c = 1.0);
  /// Coefficients of z^0, z^-1, z^-2, ... (the usual FIR tap order).
  static LaurentPoly from_taps(std::span<const double> taps);
  static LaurentPoly from_taps(std::span<const cd> taps);

  int lowest_power() const noexcept { return lowest_; }
  /// For the zero polynomial this is lowest_power() - 1.
  int highest_power() const noexcept { return lowest_ + static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cd>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_real() const noexcept;

  /// Coefficient of z^power, zero outside the support.
  cd coeff(int power) const noexcept;
  cd operator()(cd z) const;

  double norm() const noexcept;
  double max_abs() const noexcept;

  /// Multiplies by z^k.
  LaurentPoly shifted(int k) const;
  /// Taps for z^0, z^-1, ..., z^-(n-1); requires no positive powers.
  std::vector<cd> taps(std::size_t n) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& rhs);
  LaurentPoly& operator-=(const LaurentPoly& rhs);
  LaurentPoly& operator*=(cd s);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, cd s) { return a *= s; }
  friend LaurentPoly operator*(cd s, LaurentPoly a) { return a *= s; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

  /// Representation equality (exact).
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  /// `lowest_power;c0_re,c0_im;c1_re,c1_im;...`
  std::string to_text() const;
  static LaurentPoly from_text(std::string_view text);
  /// Human-readable form in z^-1, e.g. `4 + 7z^-1 + 2z^-2`.
  std::string pretty(int precision = 6) const;

 private:
  void normalize();

  int lowest_ = 0;
  std::vector<cd> coeffs_;
};

LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b);
/// Conjugates coefficients and maps z -> 1/z.
LaurentPoly lp_paraconjugate(const LaurentPoly& a);
/// Keeps coefficients of z^(Mk), relabelled as z^k.
LaurentPoly lp_downsample(const LaurentPoly& a, int M);

/// ||a - b|| / max(||a||, ||b||); zero when both are zero.
double relative_difference(const LaurentPoly& a, const LaurentPoly& b);

}  // namespace ufb
