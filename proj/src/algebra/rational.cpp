#include "ufb/rational.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "ufb/errors.hpp"

namespace ufb {

RationalTF::RationalTF(LaurentPoly num, LaurentPoly den) {
  if (den.is_zero()) throw std::invalid_argument("RationalTF: zero denominator");
  const int shift = -den.highest_power();
  const cd lead = den.coeff(den.highest_power());
  const cd phase = std::conj(lead) / std::abs(lead);
  den_ = den.shifted(shift) * phase;
  num_ = num.shifted(shift) * phase;
}

double cross_residual(const RationalTF& a, const RationalTF& b) {
  const LaurentPoly lhs = a.num() * b.den();
  const LaurentPoly rhs = b.num() * a.den();
  return relative_difference(lhs, rhs);
}

bool equivalent(const RationalTF& a, const RationalTF& b, double tol) {
  return cross_residual(a, b) < tol;
}

std::vector<cd> rtf_impulse_response(const RationalTF& r, std::size_t n_terms) {
  const LaurentPoly& num = r.num();
  const LaurentPoly& den = r.den();
  if (!num.is_zero() && num.highest_power() > 0)
    throw NonCausalError(fmt::format("impulse response of non-causal transfer function (numerator reaches z^{})",
                                     num.highest_power()));
  // den = d0 + d1 z^-1 + ...; h[k] = (n_k - sum_{i>=1} d_i h[k-i]) / d0
  const std::size_t den_len = static_cast<std::size_t>(-den.lowest_power()) + 1;
  const cd d0 = den.coeff(0);
  std::vector<cd> h(n_terms);
  for (std::size_t k = 0; k < n_terms; ++k) {
    cd acc = num.coeff(-static_cast<int>(k));
    for (std::size_t i = 1; i < den_len && i <= k; ++i) acc -= den.coeff(-static_cast<int>(i)) * h[k - i];
    h[k] = acc / d0;
  }
  return h;
}

std::vector<cd> polynomial_roots(const LaurentPoly& p) {
  // Roots of c_0 + c_1 z + ... + c_n z^n (the stored block); the z^lowest
  // factor contributes only at 0 or infinity and both end coefficients are
  // non-zero after trimming.
  const auto& c = p.coeffs();
  if (c.size() < 2) return {};
  const std::size_t n = c.size() - 1;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -c[i] / c[n];

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw RootFindingError("companion eigenvalue iteration failed", INFINITY);

  auto eval = [&](cd z, cd& deriv) {
    cd v = c[n];
    deriv = 0.0;
    for (std::size_t k = n; k-- > 0;) {
      deriv = deriv * z + v;
      v = v * z + c[k];
    }
    return v;
  };
  std::vector<cd> roots;
  roots.reserve(n);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    cd z = solver.eigenvalues()(i);
    cd deriv;
    const cd v = eval(z, deriv);
    if (std::abs(deriv) > 0.0) {
      const cd polished = z - v / deriv;
      cd d2;
      if (std::abs(eval(polished, d2)) <= std::abs(v)) z = polished;
    }
    double scale = 0.0;
    for (std::size_t k = 0; k <= n; ++k) scale += std::abs(c[k]) * std::pow(std::abs(z), static_cast<double>(k));
    cd d3;
    const double residual = std::abs(eval(z, d3)) / scale;
    if (!(residual < 1e-8))
      throw RootFindingError(fmt::format("root {} did not converge (relative residual {:.3g})", i, residual), residual);
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](cd a, cd b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    return std::arg(a) < std::arg(b);
  });
  return roots;
}

PoleReport rtf_poles(const RationalTF& r, double guard) {
  PoleReport rep;
  rep.poles = polynomial_roots(r.den());
  for (const auto& p : rep.poles) rep.max_radius = std::max(rep.max_radius, std::abs(p));
  rep.stable = rep.max_radius < 1.0 - guard;
  return rep;
}

LaurentPoly polynomial_from_roots(const std::vector<cd>& roots, cd lead, int lowest) {
  std::vector<cd> c{lead};
  for (const auto& r : roots) {
    std::vector<cd> next(c.size() + 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return LaurentPoly(lowest, std::move(c));
}

RationalTF reduce_for_display(const RationalTF& r, double tol) {
  if (r.num().is_zero()) return RationalTF(LaurentPoly(), LaurentPoly::constant(1.0));
  std::vector<cd> nr = polynomial_roots(r.num());
  std::vector<cd> dr = polynomial_roots(r.den());
  std::vector<cd> keep_num;
  for (const auto& z : nr) {
    auto it = std::min_element(dr.begin(), dr.end(),
                               [&](cd a, cd b) { return std::abs(a - z) < std::abs(b - z); });
    if (it != dr.end() && std::abs(*it - z) <= tol * std::max(1.0, std::abs(z))) {
      dr.erase(it);
    } else {
      keep_num.push_back(z);
    }
  }
  const auto& nc = r.num().coeffs();
  const auto& dc = r.den().coeffs();
  LaurentPoly num = polynomial_from_roots(keep_num, nc.back(), r.num().lowest_power());
  LaurentPoly den = polynomial_from_roots(dr, dc.back(), r.den().lowest_power());
  return RationalTF(num, den);
}

RationalMatrix RationalMatrix::from_common(const PolyMatrix& num, const LaurentPoly& den) {
  RationalMatrix out(num.rows(), num.cols());
  for (std::size_t i = 0; i < num.rows(); ++i)
    for (std::size_t j = 0; j < num.cols(); ++j) out(i, j) = RationalTF(num(i, j), den);
  return out;
}

Eigen::MatrixXcd RationalMatrix::evaluate(cd z) const {
  Eigen::MatrixXcd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j)(z);
  return m;
}

std::optional<LaurentPoly> RationalMatrix::shared_denominator() const {
  if (entries_.empty()) return std::nullopt;
  for (const auto& e : entries_)
    if (!(e.den() == entries_.front().den())) return std::nullopt;
  return entries_.front().den();
}

std::pair<PolyMatrix, LaurentPoly> RationalMatrix::to_common() const {
  PolyMatrix num(rows_, cols_);
  if (auto shared = shared_denominator()) {
    for (std::size_t k = 0; k < entries_.size(); ++k) num(k / cols_, k % cols_) = entries_[k].num();
    return {num, *shared};
  }
  std::vector<LaurentPoly> distinct;
  for (const auto& e : entries_) {
    const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const LaurentPoly& d) {
      return equivalent(RationalTF(LaurentPoly::constant(1.0), d), RationalTF(LaurentPoly::constant(1.0), e.den()));
    });
    if (!seen) distinct.push_back(e.den());
  }
  LaurentPoly common = LaurentPoly::constant(1.0);
  for (const auto& d : distinct) common = common * d;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    // common / den_k is exact up to rounding; rebuild it from the other factors.
    LaurentPoly factor = LaurentPoly::constant(1.0);
    bool skipped = false;
    for (const auto& d : distinct) {
      if (!skipped && equivalent(RationalTF(LaurentPoly::constant(1.0), d),
                                 RationalTF(LaurentPoly::constant(1.0), entries_[k].den()))) {
        // d and den_k agree up to a constant; carry the ratio into the numerator.
        factor = factor * LaurentPoly::constant(d.coeff(0) / entries_[k].den().coeff(0));
        skipped = true;
        continue;
      }
      factor = factor * d;
    }
    num(k / cols_, k % cols_) = entries_[k].num() * factor;
  }
  return {num, common};
}

double max_cross_residual(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("RationalMatrix shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) worst = std::max(worst, cross_residual(a(i, j), b(i, j)));
  return worst;
}

bool equivalent(const RationalMatrix& a, const RationalMatrix& b, double tol) {
  return max_cross_residual(a, b) < tol;
}

}  // namespace ufb
