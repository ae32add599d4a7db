#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ufb/laurent.hpp"

namespace ufb {

/// Dense row-major matrix of Laurent polynomials.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols);

  static PolyMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  LaurentPoly& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const LaurentPoly& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  Eigen::MatrixXcd evaluate(cd z) const;
  /// Copy with row `r` and column `c` removed.
  PolyMatrix minor(std::size_t r, std::size_t c) const;
  /// Rows and columns picked by index (any order, repeats allowed).
  PolyMatrix submatrix(const std::vector<std::size_t>& row_idx,
                       const std::vector<std::size_t>& col_idx) const;

  bool is_zero() const noexcept;
  /// sqrt of the sum of squared coefficient norms of all entries.
  double norm() const noexcept;

  PolyMatrix& operator+=(const PolyMatrix& rhs);
  PolyMatrix& operator-=(const PolyMatrix& rhs);
  PolyMatrix& operator*=(const LaurentPoly& s);

  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
  friend PolyMatrix operator*(PolyMatrix a, const LaurentPoly& s) { return a *= s; }
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<LaurentPoly> entries_;
};

/// Conjugate transpose with z -> 1/z.
PolyMatrix pm_paraconjugate(const PolyMatrix& m);

struct DetAdjugate {
  LaurentPoly det;
  PolyMatrix adj;
};

/// Fraction-free cofactor expansion; m * adj == det * I as polynomials.
/// Cost grows factorially, intended for the small banks used here (n <= 6).
DetAdjugate pm_det_adjugate(const PolyMatrix& m);
LaurentPoly pm_determinant(const PolyMatrix& m);

/// ||a - b|| / max(||a||, ||b||) over all entries.
double relative_difference(const PolyMatrix& a, const PolyMatrix& b);

}  // namespace ufb
