#include "ufb/poly_matrix.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ufb/errors.hpp"

namespace ufb {

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

PolyMatrix PolyMatrix::identity(std::size_t n) {
  PolyMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = LaurentPoly::constant(1.0);
  return m;
}

Eigen::MatrixXcd PolyMatrix::evaluate(cd z) const {
  Eigen::MatrixXcd out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j)(z);
  return out;
}

PolyMatrix PolyMatrix::minor(std::size_t r, std::size_t c) const {
  PolyMatrix out(rows_ - 1, cols_ - 1);
  for (std::size_t i = 0, oi = 0; i < rows_; ++i) {
    if (i == r) continue;
    for (std::size_t j = 0, oj = 0; j < cols_; ++j) {
      if (j == c) continue;
      out(oi, oj++) = (*this)(i, j);
    }
    ++oi;
  }
  return out;
}

PolyMatrix PolyMatrix::submatrix(const std::vector<std::size_t>& row_idx,
                                 const std::vector<std::size_t>& col_idx) const {
  PolyMatrix out(row_idx.size(), col_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i)
    for (std::size_t j = 0; j < col_idx.size(); ++j) {
      if (row_idx[i] >= rows_ || col_idx[j] >= cols_)
        throw DimensionError("PolyMatrix::submatrix: index out of range");
      out(i, j) = (*this)(row_idx[i], col_idx[j]);
    }
  return out;
}

bool PolyMatrix::is_zero() const noexcept {
  for (const auto& e : entries_)
    if (!e.is_zero()) return false;
  return true;
}

double PolyMatrix::norm() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) {
    const double n = e.norm();
    s += n * n;
  }
  return std::sqrt(s);
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("PolyMatrix +: shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
  return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("PolyMatrix -: shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
  return *this;
}

PolyMatrix& PolyMatrix::operator*=(const LaurentPoly& s) {
  for (auto& e : entries_) e = e * s;
  return *this;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError(fmt::format("PolyMatrix *: {}x{} times {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
  PolyMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      LaurentPoly acc;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = std::move(acc);
    }
  return out;
}

PolyMatrix pm_paraconjugate(const PolyMatrix& m) {
  PolyMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = lp_paraconjugate(m(i, j));
  return out;
}

LaurentPoly pm_determinant(const PolyMatrix& m) {
  if (!m.is_square())
    throw DimensionError(fmt::format("determinant of non-square {}x{} matrix", m.rows(), m.cols()));
  const std::size_t n = m.rows();
  if (n == 0) return LaurentPoly::constant(1.0);
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  // Laplace expansion along the first row.
  LaurentPoly det;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    const LaurentPoly term = m(0, j) * pm_determinant(m.minor(0, j));
    if (j % 2 == 0)
      det += term;
    else
      det -= term;
  }
  return det;
}

DetAdjugate pm_det_adjugate(const PolyMatrix& m) {
  if (!m.is_square())
    throw DimensionError(fmt::format("adjugate of non-square {}x{} matrix", m.rows(), m.cols()));
  const std::size_t n = m.rows();
  DetAdjugate out{pm_determinant(m), PolyMatrix(n, n)};
  if (n == 1) {
    out.adj(0, 0) = LaurentPoly::constant(1.0);
    return out;
  }
  // adj(i, j) is the (j, i) cofactor.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      LaurentPoly c = pm_determinant(m.minor(j, i));
      out.adj(i, j) = (i + j) % 2 == 0 ? std::move(c) : -c;
    }
  return out;
}

double relative_difference(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("relative_difference: shape mismatch");
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto& x = a(i, j);
      const auto& y = b(i, j);
      const int lo = std::min(x.lowest_power(), y.lowest_power());
      const int hi = std::max(x.highest_power(), y.highest_power());
      for (int p = lo; p <= hi; ++p) s += std::norm(x.coeff(p) - y.coeff(p));
    }
  return std::sqrt(s) / scale;
}

}  // namespace ufb
