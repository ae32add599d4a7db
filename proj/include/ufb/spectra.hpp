#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ufb/laurent.hpp"
#include "ufb/poly_matrix.hpp"

namespace ufb {

/// L causal FIR analysis filters, each followed by decimation by M, plus the
/// reconstruction delay d of the desired signal.
class FilterBankSpec {
 public:
  FilterBankSpec(int decimation, std::vector<LaurentPoly> filters, int delay = 0);

  int decimation() const noexcept { return M_; }
  std::size_t channels() const noexcept { return filters_.size(); }
  int delay() const noexcept { return d_; }
  const std::vector<LaurentPoly>& filters() const noexcept { return filters_; }
  const LaurentPoly& filter(std::size_t j) const { return filters_.at(j); }
  bool maximally_decimated() const noexcept { return channels() == static_cast<std::size_t>(M_); }
  /// Longest filter, in taps.
  std::size_t max_taps() const noexcept;

  FilterBankSpec with_delay(int delay) const { return {M_, filters_, delay}; }

 private:
  int M_;
  std::vector<LaurentPoly> filters_;
  int d_;
};

/// Input power spectrum S_xx(z). Must be paraconjugate-symmetric and real,
/// non-negative on the unit circle (checked on a 1024-point grid).
class InputPSD {
 public:
  explicit InputPSD(LaurentPoly psd);

  static InputPSD white(double variance = 1.0);
  /// gain * G(z) G~(z)
  static InputPSD shaped(const LaurentPoly& shaping, double gain = 1.0);

  const LaurentPoly& poly() const noexcept { return psd_; }
  cd operator()(cd z) const { return psd_(z); }

 private:
  LaurentPoly psd_;
};

/// Finitely supported autocorrelation R(m) = E[x(n+m) x*(n)], m >= first_lag.
struct AutocorrelationSeq {
  int first_lag = 0;
  std::vector<cd> values;

  cd at(int lag) const noexcept;
  /// S_xx(z) = sum_m R(m) z^-m.
  LaurentPoly to_psd_poly() const;
  static AutocorrelationSeq from_psd(const InputPSD& sx);
};

/// Sequence of fixed-length complex vectors, one per block index.
class BlockedSignal {
 public:
  BlockedSignal() = default;
  BlockedSignal(std::size_t dim, std::size_t blocks) : dim_(dim), data_(dim * blocks) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }

  std::span<const cd> operator[](std::size_t n) const { return {data_.data() + n * dim_, dim_}; }
  std::span<cd> operator[](std::size_t n) { return {data_.data() + n * dim_, dim_}; }
  cd at(std::size_t n, std::size_t i) const { return data_.at(n * dim_ + i); }

  void push_back(std::span<const cd> v);
  bool is_real() const noexcept;

 private:
  std::size_t dim_ = 0;
  std::vector<cd> data_;
};

/// S_vv(z): entry (i, j) = (H_i S_xx H~_j) downsampled by M.
PolyMatrix analysis_psd(const FilterBankSpec& fb, const InputPSD& sx);
/// S_dv(z): entry (i, j) = (z^-(d+i) S_xx H~_j) downsampled by M.
PolyMatrix cross_psd(const FilterBankSpec& fb, const InputPSD& sx);
/// S_vd(z) = S_dv~(z): entry (j, i) = (H_j S_xx z^(d+i)) downsampled by M.
PolyMatrix analysis_desired_psd(const FilterBankSpec& fb, const InputPSD& sx);
/// S_dd(z): entry (i, k) = (z^(k-i) S_xx) downsampled by M.
PolyMatrix desired_psd(const FilterBankSpec& fb, const InputPSD& sx);

/// E[d_i(n) v_j*(n-k)] = sum_l h_j*(l) R(Mk + l - i - d).
cd cross_correlation_dv(const FilterBankSpec& fb, const AutocorrelationSeq& rxx,
                        std::size_t i, std::size_t j, int k);

/// v_j(n) = sum_l h_j(l) x(Mn - l), n = 0 .. ceil(N/M)-1, x(m<0) = 0.
BlockedSignal run_analysis(const FilterBankSpec& fb, std::span<const cd> x);
/// d_i(n) = x(Mn - i - d), i = 0 .. M-1; out-of-range samples read as 0.
BlockedSignal make_desired(std::span<const cd> x, int M, int d);

/// Sample-at-a-time analysis bank; emits v(n) when x(Mn) arrives.
class AnalysisStream {
 public:
  explicit AnalysisStream(FilterBankSpec fb);

  /// Feeds one input sample. Returns true and fills `out` (length L) when a
  /// block completes.
  bool push(cd sample, std::span<cd> out);
  void reset();

 private:
  FilterBankSpec fb_;
  std::vector<std::vector<cd>> reversed_taps_;
  std::vector<cd> history_;  // oldest first, length max_taps
  std::size_t count_ = 0;
};

}  // namespace ufb
