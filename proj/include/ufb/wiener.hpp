#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ufb/laurent.hpp"
#include "ufb/matrix_fir.hpp"
#include "ufb/poly_matrix.hpp"
#include "ufb/rational.hpp"
#include "ufb/spectra.hpp"

namespace ufb {

/// Alias twiddle W_M = exp(-j 2 pi / M). Every identity checked here holds
/// for either sign; this is the one used throughout.
cd twiddle(int M, int power = 1);

/// Principal M-th root of z times W_M^branch.
cd mth_root(cd z, int M, int branch = 0);

/// Matrix Wiener synthesis filter A(z) = S_dv(z) S_vv(z)^-1.
struct WienerSolution {
  /// M x L over the common denominator delta = det S_vv.
  RationalMatrix A;
  LaurentPoly delta;
  /// A with denominator roots shared by every numerator cancelled.
  PolyMatrix reduced_num;
  LaurentPoly reduced_den;
  bool stable = false;
  std::vector<cd> poles;

  std::size_t rows() const noexcept { return A.rows(); }
  std::size_t cols() const noexcept { return A.cols(); }
  /// Entry (p, q) in reduced form.
  RationalTF reduced(std::size_t p, std::size_t q) const { return {reduced_num(p, q), reduced_den}; }
};

/// Stability guard band on pole magnitude.
inline constexpr double kStabilityGuard = 1e-9;
/// Relative root distance under which a denominator root counts as cancelled.
inline constexpr double kPoleCancellationTol = 1e-6;

/// Throws SingularBankError when det S_vv vanishes (always the case for
/// L > M, since S_vv then has rank at most M).
WienerSolution wiener_solve(const FilterBankSpec& fb, const InputPSD& sx);

/// Cancels roots of `den` shared by every non-zero entry of `num`.
std::pair<PolyMatrix, LaurentPoly> cancel_common_roots(const PolyMatrix& num, const LaurentPoly& den,
                                                       double tol = kPoleCancellationTol);

/// ||A S_vv - S_dv|| relative, cross-multiplied over delta.
double wiener_identity_residual(const WienerSolution& ws, const FilterBankSpec& fb, const InputPSD& sx);

/// Rows of a modulation determinant: row a holds row_filters[a] evaluated at
/// z^(1/M) W^alias_indices[b] for each column b.
struct ModulationDetSpec {
  std::vector<LaurentPoly> row_filters;
  std::vector<int> alias_indices;
  int M = 1;
};

cd modulation_det(const ModulationDetSpec& spec, cd z, int branch = 0);

struct Theorem1Options {
  /// Test-only mutation: flips the twiddle sign in the last alias term.
  bool inject_twiddle_fault = false;
};

/// Determinant of the Q x Q submatrix (rows r, cols c) of S_vv(z), evaluated
/// through the alias-sum formula
///   M^-Q sum_{i_1<...<i_Q} prod_k S_xx(w_{i_k}) E_r(i) E~_c(i),
/// w_q = z^(1/M) W^q, where E_r is the modulation determinant of the row
/// filters and E~_c the one of the paraconjugated column filters.
class Theorem1Determinant {
 public:
  Theorem1Determinant(const FilterBankSpec& fb, const InputPSD& sx, std::vector<std::size_t> rows,
                      std::vector<std::size_t> cols, Theorem1Options opts = {});

  cd operator()(cd z) const { return evaluate(z, 0); }
  /// `branch` picks which M-th root of z is used; the value must not depend on it.
  cd evaluate(cd z, int branch) const;

 private:
  int M_;
  LaurentPoly psd_;
  std::vector<LaurentPoly> row_filters_;
  std::vector<LaurentPoly> col_filters_tilde_;
  Theorem1Options opts_;
};

Theorem1Determinant theorem1_det(const FilterBankSpec& fb, const InputPSD& sx, const std::vector<std::size_t>& rows,
                                 const std::vector<std::size_t>& cols, Theorem1Options opts = {});

/// Direct route: det of the polynomial submatrix of S_vv, evaluated at z.
std::function<cd(cd)> submatrix_det_bruteforce(const FilterBankSpec& fb, const InputPSD& sx,
                                               const std::vector<std::size_t>& rows,
                                               const std::vector<std::size_t>& cols);

/// A_{i,j}(z) for a maximally decimated bank as a ratio of two M x M
/// modulation determinants: the bank's, and the bank's with row j replaced by
/// z^-(d+i).
cd closed_form_eval(const FilterBankSpec& fb, std::size_t i, std::size_t j, int d, cd z, int branch = 0);

struct ReconstructionReport {
  std::vector<double> angles;
  /// max |A S_vd - S_dd| / max |S_dd| per angle.
  std::vector<double> residuals;
  /// max |A S_vv A~ - S_dd| / max |S_dd| per angle.
  std::vector<double> psd_residuals;
  double max_residual = 0.0;
  double max_psd_residual = 0.0;
};

/// 64 evenly spaced angles plus `random_points` uniform ones.
std::vector<double> unit_circle_grid(std::size_t random_points = 16, std::uint64_t seed = 0x5eed,
                                     std::size_t structured = 64);

/// Transform-domain perfect-reconstruction residuals on `angles`. Requires L = M.
ReconstructionReport reconstruction_check(const WienerSolution& ws, const FilterBankSpec& fb, const InputPSD& sx,
                                          std::span<const double> angles);
ReconstructionReport reconstruction_check(const WienerSolution& ws, const FilterBankSpec& fb);

/// Taps 0 .. n_terms-1 of every reduced entry. Needs a causal, stable solution.
TapTable truncated_impulse_responses(const WienerSolution& ws, std::size_t n_terms);

/// Number of taps after which the geometric tail bound drops below
/// `rel_tail` of the leading coefficient.
std::size_t suggested_truncation(const WienerSolution& ws, double rel_tail = 1e-10);

/// Runs x through the analysis bank and the truncated Wiener filter; returns
/// sum |y - d|^2 / sum |d|^2 over the last `tail_fraction` of blocks.
double simulate_reconstruction(const WienerSolution& ws, const FilterBankSpec& fb, std::span<const cd> x,
                               std::size_t n_taps, double tail_fraction = 0.2);

}  // namespace ufb
