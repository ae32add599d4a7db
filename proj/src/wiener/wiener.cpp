#include "ufb/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "ufb/errors.hpp"

namespace ufb {

cd twiddle(int M, int power) {
  return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(power) / static_cast<double>(M));
}

cd mth_root(cd z, int M, int branch) {
  if (z == cd(0.0)) return 0.0;
  const cd principal = std::polar(std::pow(std::abs(z), 1.0 / M), std::arg(z) / M);
  return branch == 0 ? principal : principal * twiddle(M, branch);
}

namespace {

/// Calls fn(indices) for every strictly increasing Q-subset of [0, M).
template <typename Fn>
void for_each_combination(int M, int Q, Fn&& fn) {
  if (Q > M || Q <= 0) return;
  std::vector<int> idx(static_cast<std::size_t>(Q));
  for (int k = 0; k < Q; ++k) idx[static_cast<std::size_t>(k)] = k;
  while (true) {
    fn(static_cast<const std::vector<int>&>(idx));
    int k = Q - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == M - Q + k) --k;
    if (k < 0) return;
    ++idx[static_cast<std::size_t>(k)];
    for (int m = k + 1; m < Q; ++m) idx[static_cast<std::size_t>(m)] = idx[static_cast<std::size_t>(m - 1)] + 1;
  }
}

double row_scale(const PolyMatrix& m) {
  double scale = 1.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) row += m(i, j).norm();
    scale *= row;
  }
  return scale;
}

std::string singular_certificate(const FilterBankSpec& fb, const PolyMatrix& svv, std::size_t& rank_defect) {
  const std::size_t L = fb.channels();
  const int M = fb.decimation();
  std::size_t rank = 0;
  const auto angles = unit_circle_grid(0);
  for (double theta : angles) {
    const Eigen::MatrixXcd s = svv.evaluate(std::polar(1.0, theta));
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) > 1e-9 * top && top > 0.0) ++r;
    rank = std::max(rank, r);
  }
  rank_defect = L - rank;

  if (L > static_cast<std::size_t>(M))
    return fmt::format("no {}-element alias subsets exist among {} aliases; every term of the alias-sum "
                       "determinant is empty (rank of S_vv is at most M = {})",
                       L, M, M);

  double hscale = 1.0;
  for (const auto& h : fb.filters()) hscale *= std::max(h.norm(), 1e-300);
  std::size_t total = 0, vanishing = 0;
  for_each_combination(M, static_cast<int>(L), [&](const std::vector<int>& subset) {
    ++total;
    ModulationDetSpec spec{fb.filters(), subset, M};
    bool all_zero = true;
    for (double theta : angles)
      if (std::abs(modulation_det(spec, std::polar(1.0, theta))) > 1e-10 * hscale) {
        all_zero = false;
        break;
      }
    if (all_zero) ++vanishing;
  });
  return fmt::format("{} of {} alias-subset modulation determinants E_(H_0..H_{})(i_1..i_{}) vanish identically", vanishing,
                     total, L - 1, L);
}

}  // namespace

std::pair<PolyMatrix, LaurentPoly> cancel_common_roots(const PolyMatrix& num, const LaurentPoly& den, double tol) {
  const std::vector<cd> den_roots = polynomial_roots(den);
  struct EntryRoots {
    std::size_t i, j;
    std::vector<cd> roots;
    std::vector<bool> used;
  };
  std::vector<EntryRoots> entries;
  for (std::size_t i = 0; i < num.rows(); ++i)
    for (std::size_t j = 0; j < num.cols(); ++j)
      if (!num(i, j).is_zero()) {
        auto r = polynomial_roots(num(i, j));
        entries.push_back({i, j, r, std::vector<bool>(r.size(), false)});
      }
  if (entries.empty()) return {num, LaurentPoly::constant(1.0)};

  std::vector<cd> kept;
  for (const cd& r : den_roots) {
    const double radius = tol * std::max(1.0, std::abs(r));
    std::vector<std::size_t> match(entries.size());
    bool everywhere = true;
    for (std::size_t e = 0; e < entries.size() && everywhere; ++e) {
      double best = INFINITY;
      for (std::size_t k = 0; k < entries[e].roots.size(); ++k) {
        const double dist = std::abs(entries[e].roots[k] - r);
        if (!entries[e].used[k] && dist < best) {
          best = dist;
          match[e] = k;
        }
      }
      everywhere = best <= radius;
    }
    if (!everywhere) {
      kept.push_back(r);
      continue;
    }
    for (std::size_t e = 0; e < entries.size(); ++e) entries[e].used[match[e]] = true;
  }

  PolyMatrix reduced(num.rows(), num.cols());
  for (const auto& e : entries) {
    std::vector<cd> rest;
    for (std::size_t k = 0; k < e.roots.size(); ++k)
      if (!e.used[k]) rest.push_back(e.roots[k]);
    const LaurentPoly& p = num(e.i, e.j);
    reduced(e.i, e.j) = polynomial_from_roots(rest, p.coeffs().back(), p.lowest_power());
  }
  return {reduced, polynomial_from_roots(kept, den.coeffs().back(), den.lowest_power())};
}

WienerSolution wiener_solve(const FilterBankSpec& fb, const InputPSD& sx) {
  const PolyMatrix svv = analysis_psd(fb, sx);
  const PolyMatrix sdv = cross_psd(fb, sx);
  DetAdjugate da = pm_det_adjugate(svv);

  if (da.det.is_zero() || da.det.norm() <= 1e-10 * row_scale(svv)) {
    std::size_t defect = 0;
    std::string cert = singular_certificate(fb, svv, defect);
    throw SingularBankError(fmt::format("S_vv is singular (rank defect {}): reconstruction impossible; {}", defect, cert),
                            defect, cert);
  }

  WienerSolution ws;
  const PolyMatrix num = sdv * da.adj;
  ws.A = RationalMatrix::from_common(num, da.det);
  ws.delta = ws.A(0, 0).den();
  auto [common_num, common_den] = ws.A.to_common();
  std::tie(ws.reduced_num, ws.reduced_den) = cancel_common_roots(common_num, common_den);
  // Same normalization as RationalTF: highest power z^0, real positive lead.
  const int shift = -ws.reduced_den.highest_power();
  const cd lead = ws.reduced_den.coeff(ws.reduced_den.highest_power());
  const cd phase = std::conj(lead) / std::abs(lead);
  ws.reduced_den = ws.reduced_den.shifted(shift) * phase;
  for (std::size_t i = 0; i < ws.reduced_num.rows(); ++i)
    for (std::size_t j = 0; j < ws.reduced_num.cols(); ++j)
      ws.reduced_num(i, j) = ws.reduced_num(i, j).shifted(shift) * phase;

  const PoleReport poles = rtf_poles(RationalTF(LaurentPoly::constant(1.0), ws.reduced_den), kStabilityGuard);
  ws.poles = poles.poles;
  ws.stable = poles.stable;
  return ws;
}

double wiener_identity_residual(const WienerSolution& ws, const FilterBankSpec& fb, const InputPSD& sx) {
  const PolyMatrix svv = analysis_psd(fb, sx);
  const PolyMatrix sdv = cross_psd(fb, sx);
  const auto [num, den] = ws.A.to_common();
  return relative_difference(num * svv, sdv * den);
}

cd modulation_det(const ModulationDetSpec& spec, cd z, int branch) {
  const std::size_t Q = spec.row_filters.size();
  if (spec.alias_indices.size() != Q) throw DimensionError("modulation_det: row/alias count mismatch");
  if (Q == 0) return 1.0;
  const cd w0 = mth_root(z, spec.M, branch);
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(Q), static_cast<Eigen::Index>(Q));
  for (std::size_t b = 0; b < Q; ++b) {
    const cd w = w0 * twiddle(spec.M, spec.alias_indices[b]);
    for (std::size_t a = 0; a < Q; ++a)
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = spec.row_filters[a](w);
  }
  return m.determinant();
}

Theorem1Determinant::Theorem1Determinant(const FilterBankSpec& fb, const InputPSD& sx, std::vector<std::size_t> rows,
                                         std::vector<std::size_t> cols, Theorem1Options opts)
    : M_(fb.decimation()), psd_(sx.poly()), opts_(opts) {
  if (rows.size() != cols.size() || rows.empty())
    throw DimensionError("theorem1_det: row and column index lists must be non-empty and of equal length");
  for (auto r : rows) row_filters_.push_back(fb.filter(r));
  for (auto c : cols) col_filters_tilde_.push_back(lp_paraconjugate(fb.filter(c)));
}

cd Theorem1Determinant::evaluate(cd z, int branch) const {
  const int Q = static_cast<int>(row_filters_.size());
  const cd w0 = mth_root(z, M_, branch);
  std::vector<cd> points(static_cast<std::size_t>(M_));
  for (int q = 0; q < M_; ++q) points[static_cast<std::size_t>(q)] = w0 * twiddle(M_, q);

  Eigen::MatrixXcd e_rows(Q, Q);
  Eigen::MatrixXcd e_cols(Q, Q);
  cd total = 0.0;
  // Q > M leaves the sum empty: the submatrix is then singular.
  for_each_combination(M_, Q, [&](const std::vector<int>& subset) {
    cd spectral = 1.0;
    // The last subset {M-Q, ..., M-1} always has a non-zero alias index.
    const bool faulty = opts_.inject_twiddle_fault && subset.front() == M_ - Q;
    for (int b = 0; b < Q; ++b) {
      const cd w = points[static_cast<std::size_t>(subset[static_cast<std::size_t>(b)])];
      const cd w_rows = faulty
                            ? w0 * twiddle(M_, -subset[static_cast<std::size_t>(b)])
                            : w;
      spectral *= psd_(w);
      for (int a = 0; a < Q; ++a) {
        e_rows(a, b) = row_filters_[static_cast<std::size_t>(a)](w_rows);
        e_cols(a, b) = col_filters_tilde_[static_cast<std::size_t>(a)](w);
      }
    }
    total += spectral * e_rows.determinant() * e_cols.determinant();
  });
  return total / std::pow(static_cast<double>(M_), Q);
}

Theorem1Determinant theorem1_det(const FilterBankSpec& fb, const InputPSD& sx, const std::vector<std::size_t>& rows,
                                 const std::vector<std::size_t>& cols, Theorem1Options opts) {
  return Theorem1Determinant(fb, sx, rows, cols, opts);
}

std::function<cd(cd)> submatrix_det_bruteforce(const FilterBankSpec& fb, const InputPSD& sx,
                                               const std::vector<std::size_t>& rows,
                                               const std::vector<std::size_t>& cols) {
  if (rows.size() != cols.size())
    throw DimensionError("submatrix_det_bruteforce: row and column index lists differ in length");
  const LaurentPoly det = pm_determinant(analysis_psd(fb, sx).submatrix(rows, cols));
  return [det](cd z) { return det(z); };
}

cd closed_form_eval(const FilterBankSpec& fb, std::size_t i, std::size_t j, int d, cd z, int branch) {
  const int M = fb.decimation();
  if (!fb.maximally_decimated())
    throw DimensionError(fmt::format("closed form needs L = M, bank has L = {}, M = {}", fb.channels(), M));
  if (i >= static_cast<std::size_t>(M) || j >= fb.channels())
    throw DimensionError(fmt::format("closed_form_eval: entry ({}, {}) out of range", i, j));
  std::vector<int> aliases(static_cast<std::size_t>(M));
  for (int q = 0; q < M; ++q) aliases[static_cast<std::size_t>(q)] = q;

  ModulationDetSpec bank{fb.filters(), aliases, M};
  ModulationDetSpec substituted = bank;
  substituted.row_filters[j] = LaurentPoly::monomial(-(d + static_cast<int>(i)));

  const cd den = modulation_det(bank, z, branch);
  double scale = 1.0;
  for (const auto& h : fb.filters()) scale *= std::max(h.norm(), 1e-300);
  if (std::abs(den) <= 1e-14 * scale)
    throw EvaluationSingularError(fmt::format("modulation determinant vanishes at z = {}{:+}j", z.real(), z.imag()));
  return modulation_det(substituted, z, branch) / den;
}

std::vector<double> unit_circle_grid(std::size_t random_points, std::uint64_t seed, std::size_t structured) {
  std::vector<double> angles;
  angles.reserve(structured + random_points);
  for (std::size_t k = 0; k < structured; ++k)
    angles.push_back(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(structured));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < random_points; ++k) angles.push_back(u(rng));
  return angles;
}

ReconstructionReport reconstruction_check(const WienerSolution& ws, const FilterBankSpec& fb, const InputPSD& sx,
                                          std::span<const double> angles) {
  if (!fb.maximally_decimated())
    throw DimensionError("reconstruction_check requires a maximally decimated bank (L = M)");
  const PolyMatrix svd = analysis_desired_psd(fb, sx);
  const PolyMatrix sdd = desired_psd(fb, sx);
  const PolyMatrix svv = analysis_psd(fb, sx);

  ReconstructionReport rep;
  for (double theta : angles) {
    const cd z = std::polar(1.0, theta);
    const Eigen::MatrixXcd a = ws.A.evaluate(z);
    const Eigen::MatrixXcd target = sdd.evaluate(z);
    const double scale = std::max(target.cwiseAbs().maxCoeff(), 1e-300);
    const double r1 = (a * svd.evaluate(z) - target).cwiseAbs().maxCoeff() / scale;
    const double r2 = (a * svv.evaluate(z) * a.adjoint() - target).cwiseAbs().maxCoeff() / scale;
    rep.angles.push_back(theta);
    rep.residuals.push_back(r1);
    rep.psd_residuals.push_back(r2);
    rep.max_residual = std::max(rep.max_residual, r1);
    rep.max_psd_residual = std::max(rep.max_psd_residual, r2);
  }
  return rep;
}

ReconstructionReport reconstruction_check(const WienerSolution& ws, const FilterBankSpec& fb) {
  const auto grid = unit_circle_grid();
  return reconstruction_check(ws, fb, InputPSD::white(), grid);
}

TapTable truncated_impulse_responses(const WienerSolution& ws, std::size_t n_terms) {
  if (!ws.stable) throw UnstableSolutionError("Wiener solution is unstable; no causal impulse response", ws.poles);
  TapTable t(ws.rows(), ws.cols(), n_terms);
  for (std::size_t p = 0; p < ws.rows(); ++p)
    for (std::size_t q = 0; q < ws.cols(); ++q) {
      const auto h = rtf_impulse_response(ws.reduced(p, q), n_terms);
      std::copy(h.begin(), h.end(), t.tap(p, q).begin());
    }
  return t;
}

std::size_t suggested_truncation(const WienerSolution& ws, double rel_tail) {
  std::size_t num_len = 1;
  for (std::size_t p = 0; p < ws.rows(); ++p)
    for (std::size_t q = 0; q < ws.cols(); ++q) {
      const auto& n = ws.reduced_num(p, q);
      if (!n.is_zero()) num_len = std::max(num_len, static_cast<std::size_t>(1 - std::min(0, n.lowest_power())));
    }
  double rho = 0.0;
  for (const auto& p : ws.poles) rho = std::max(rho, std::abs(p));
  if (rho == 0.0) return num_len;
  if (rho >= 1.0) throw UnstableSolutionError("suggested_truncation: unstable solution", ws.poles);
  return num_len + static_cast<std::size_t>(std::ceil(std::log(rel_tail) / std::log(rho)));
}

double simulate_reconstruction(const WienerSolution& ws, const FilterBankSpec& fb, std::span<const cd> x,
                               std::size_t n_taps, double tail_fraction) {
  const BlockedSignal v = run_analysis(fb, x);
  const BlockedSignal d = make_desired(x, fb.decimation(), fb.delay());
  MatrixFir synth(truncated_impulse_responses(ws, n_taps));
  const std::size_t n_blocks = v.size();
  const auto start = n_blocks - static_cast<std::size_t>(std::floor(tail_fraction * static_cast<double>(n_blocks)));
  std::vector<cd> y(synth.outputs());
  double err = 0.0, ref = 0.0;
  for (std::size_t n = 0; n < n_blocks; ++n) {
    synth.filter_block(v[n], y);
    if (n < start) continue;
    for (std::size_t i = 0; i < y.size(); ++i) {
      err += std::norm(y[i] - d.at(n, i));
      ref += std::norm(d.at(n, i));
    }
  }
  return ref > 0.0 ? err / ref : err;
}

}  // namespace ufb
