#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ufb/laurent.hpp"
#include "ufb/poly_matrix.hpp"

namespace ufb {

/// num(z) / den(z).
///
/// The denominator is stored as a polynomial in z^-1 with a real positive
/// z^0 coefficient (highest power of z is 0); the rescaling is absorbed into
/// the numerator. Equality is by cross-multiplication, never by comparing
/// representations, because no common factors are cancelled.
class RationalTF {
 public:
  static constexpr double kEqualityTolerance = 1e-9;

  RationalTF() : den_(LaurentPoly::constant(1.0)) {}
  RationalTF(LaurentPoly num, LaurentPoly den);

  const LaurentPoly& num() const noexcept { return num_; }
  const LaurentPoly& den() const noexcept { return den_; }

  cd operator()(cd z) const { return num_(z) / den_(z); }

 private:
  LaurentPoly num_;
  LaurentPoly den_;
};

/// ||a.num * b.den - b.num * a.den|| relative to the larger product norm.
double cross_residual(const RationalTF& a, const RationalTF& b);
bool equivalent(const RationalTF& a, const RationalTF& b,
                double tol = RationalTF::kEqualityTolerance);

/// First n_terms of the causal expansion of num/den in powers of z^-1.
/// Throws NonCausalError when the numerator has positive powers of z.
std::vector<cd> rtf_impulse_response(const RationalTF& r, std::size_t n_terms);

struct PoleReport {
  std::vector<cd> poles;
  bool stable = true;
  double max_radius = 0.0;
};

/// Non-zero roots of p(z), by companion-matrix eigenvalues plus one Newton
/// step per root. Throws RootFindingError if a polished residual stays large.
std::vector<cd> polynomial_roots(const LaurentPoly& p);

/// z^lowest * lead * prod_k (z - roots[k]).
LaurentPoly polynomial_from_roots(const std::vector<cd>& roots, cd lead, int lowest);

/// Poles in z; stable iff every |pole| < 1 - guard.
PoleReport rtf_poles(const RationalTF& r, double guard = 0.0);

/// Cancels numerator/denominator root pairs closer than tol (relative).
/// For printing only; numerically cancelling factors is ill-conditioned.
RationalTF reduce_for_display(const RationalTF& r, double tol = 1e-8);

/// Grid of rational transfer functions.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

  /// Every entry num(i, j) / den.
  static RationalMatrix from_common(const PolyMatrix& num, const LaurentPoly& den);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  RationalTF& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const RationalTF& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  Eigen::MatrixXcd evaluate(cd z) const;

  /// The denominator if every entry stores the same one.
  std::optional<LaurentPoly> shared_denominator() const;
  /// Numerator matrix over one denominator (product of the distinct ones).
  std::pair<PolyMatrix, LaurentPoly> to_common() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RationalTF> entries_;
};

/// Largest cross_residual over entries.
double max_cross_residual(const RationalMatrix& a, const RationalMatrix& b);
bool equivalent(const RationalMatrix& a, const RationalMatrix& b,
                double tol = RationalTF::kEqualityTolerance);

}  // namespace ufb
