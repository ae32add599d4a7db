#include "ufb/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "ufb/errors.hpp"
#include "ufb/kernels.hpp"

namespace ufb {

FilterBankSpec::FilterBankSpec(int decimation, std::vector<LaurentPoly> filters, int delay)
    : M_(decimation), filters_(std::move(filters)), d_(delay) {
  if (M_ < 1) throw std::invalid_argument(fmt::format("decimation factor must be >= 1, got {}", M_));
  if (filters_.empty()) throw std::invalid_argument("filter bank needs at least one filter");
  if (d_ < 0) throw std::invalid_argument(fmt::format("delay must be >= 0, got {}", d_));
  for (std::size_t j = 0; j < filters_.size(); ++j)
    if (!filters_[j].is_zero() && filters_[j].highest_power() > 0)
      throw std::invalid_argument(fmt::format("filter {} is not causal (has z^{})", j, filters_[j].highest_power()));
}

std::size_t FilterBankSpec::max_taps() const noexcept {
  std::size_t n = 1;
  for (const auto& h : filters_)
    if (!h.is_zero()) n = std::max(n, static_cast<std::size_t>(1 - h.lowest_power()));
  return n;
}

InputPSD::InputPSD(LaurentPoly psd) : psd_(std::move(psd)) {
  const double scale = std::max(psd_.max_abs(), 1e-300);
  if (relative_difference(psd_, lp_paraconjugate(psd_)) > 1e-12)
    throw std::invalid_argument("input PSD is not paraconjugate-symmetric");
  constexpr int kGrid = 1024;
  for (int k = 0; k < kGrid; ++k) {
    const cd z = std::polar(1.0, 2.0 * std::numbers::pi * k / kGrid);
    const cd v = psd_(z);
    if (v.real() < -1e-10 * scale || std::abs(v.imag()) > 1e-10 * scale)
      throw std::invalid_argument(fmt::format("input PSD is negative or complex on the unit circle at k={}", k));
  }
}

InputPSD InputPSD::white(double variance) { return InputPSD(LaurentPoly::constant(variance)); }

InputPSD InputPSD::shaped(const LaurentPoly& shaping, double gain) {
  return InputPSD(shaping * lp_paraconjugate(shaping) * cd(gain));
}

cd AutocorrelationSeq::at(int lag) const noexcept {
  const long idx = static_cast<long>(lag) - first_lag;
  if (idx < 0 || idx >= static_cast<long>(values.size())) return 0.0;
  return values[static_cast<std::size_t>(idx)];
}

LaurentPoly AutocorrelationSeq::to_psd_poly() const {
  if (values.empty()) return {};
  // Coefficient of z^p is R(-p).
  std::vector<cd> c(values.rbegin(), values.rend());
  return LaurentPoly(-(first_lag + static_cast<int>(values.size()) - 1), std::move(c));
}

AutocorrelationSeq AutocorrelationSeq::from_psd(const InputPSD& sx) {
  const auto& p = sx.poly();
  if (p.is_zero()) return {};
  return {-p.highest_power(), std::vector<cd>(p.coeffs().rbegin(), p.coeffs().rend())};
}

void BlockedSignal::push_back(std::span<const cd> v) {
  if (dim_ == 0 && data_.empty()) dim_ = v.size();
  if (v.size() != dim_) throw DimensionError(fmt::format("BlockedSignal: vector of length {} into dim {}", v.size(), dim_));
  data_.insert(data_.end(), v.begin(), v.end());
}

bool BlockedSignal::is_real() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const cd& c) { return c.imag() == 0.0; });
}

PolyMatrix analysis_psd(const FilterBankSpec& fb, const InputPSD& sx) {
  const std::size_t L = fb.channels();
  std::vector<LaurentPoly> hs;
  std::vector<LaurentPoly> ht;
  for (const auto& h : fb.filters()) {
    hs.push_back(h * sx.poly());
    ht.push_back(lp_paraconjugate(h));
  }
  PolyMatrix out(L, L);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) out(i, j) = lp_downsample(hs[i] * ht[j], fb.decimation());
  return out;
}

PolyMatrix cross_psd(const FilterBankSpec& fb, const InputPSD& sx) {
  const auto M = static_cast<std::size_t>(fb.decimation());
  const std::size_t L = fb.channels();
  PolyMatrix out(M, L);
  for (std::size_t j = 0; j < L; ++j) {
    const LaurentPoly base = sx.poly() * lp_paraconjugate(fb.filter(j));
    for (std::size_t i = 0; i < M; ++i)
      out(i, j) = lp_downsample(base.shifted(-(fb.delay() + static_cast<int>(i))), fb.decimation());
  }
  return out;
}

PolyMatrix analysis_desired_psd(const FilterBankSpec& fb, const InputPSD& sx) {
  const auto M = static_cast<std::size_t>(fb.decimation());
  const std::size_t L = fb.channels();
  PolyMatrix out(L, M);
  for (std::size_t j = 0; j < L; ++j) {
    const LaurentPoly base = fb.filter(j) * sx.poly();
    for (std::size_t i = 0; i < M; ++i)
      out(j, i) = lp_downsample(base.shifted(fb.delay() + static_cast<int>(i)), fb.decimation());
  }
  return out;
}

PolyMatrix desired_psd(const FilterBankSpec& fb, const InputPSD& sx) {
  const auto M = static_cast<std::size_t>(fb.decimation());
  PolyMatrix out(M, M);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t k = 0; k < M; ++k)
      out(i, k) = lp_downsample(sx.poly().shifted(static_cast<int>(k) - static_cast<int>(i)), fb.decimation());
  return out;
}

cd cross_correlation_dv(const FilterBankSpec& fb, const AutocorrelationSeq& rxx, std::size_t i, std::size_t j,
                        int k) {
  if (i >= static_cast<std::size_t>(fb.decimation()) || j >= fb.channels())
    throw DimensionError(fmt::format("cross_correlation_dv: (i, j) = ({}, {}) outside {}x{}", i, j,
                                     fb.decimation(), fb.channels()));
  const auto taps = fb.filter(j).taps(fb.max_taps());
  cd acc = 0.0;
  for (std::size_t l = 0; l < taps.size(); ++l)
    acc += std::conj(taps[l]) *
           rxx.at(fb.decimation() * k + static_cast<int>(l) - static_cast<int>(i) - fb.delay());
  return acc;
}

BlockedSignal run_analysis(const FilterBankSpec& fb, std::span<const cd> x) {
  const auto M = static_cast<std::size_t>(fb.decimation());
  const std::size_t L = fb.channels();
  const std::size_t K = fb.max_taps();
  const std::size_t blocks = (x.size() + M - 1) / M;

  // x padded with K-1 leading zeros; v_j(n) is a contiguous dot product of
  // the reversed taps against padded[Mn .. Mn+K-1].
  std::vector<cd> padded(K - 1 + x.size());
  std::copy(x.begin(), x.end(), padded.begin() + static_cast<std::ptrdiff_t>(K - 1));
  std::vector<std::vector<cd>> reversed(L);
  for (std::size_t j = 0; j < L; ++j) {
    reversed[j] = fb.filter(j).taps(K);
    std::reverse(reversed[j].begin(), reversed[j].end());
  }

  BlockedSignal v(L, blocks);
  const std::span<const cd> pad(padded);
  for (std::size_t n = 0; n < blocks; ++n) {
    const auto window = pad.subspan(M * n, K);
    auto out = v[n];
    for (std::size_t j = 0; j < L; ++j) out[j] = kernels::dot(reversed[j], window);
  }
  return v;
}

BlockedSignal make_desired(std::span<const cd> x, int M, int d) {
  if (M < 1) throw std::invalid_argument("make_desired: M must be >= 1");
  if (d < 0) throw std::invalid_argument("make_desired: d must be >= 0");
  const auto m = static_cast<std::size_t>(M);
  const std::size_t blocks = (x.size() + m - 1) / m;
  BlockedSignal out(m, blocks);
  for (std::size_t n = 0; n < blocks; ++n) {
    auto row = out[n];
    for (std::size_t i = 0; i < m; ++i) {
      const long idx = static_cast<long>(m * n) - static_cast<long>(i) - d;
      row[i] = (idx >= 0 && idx < static_cast<long>(x.size())) ? x[static_cast<std::size_t>(idx)] : cd(0.0);
    }
  }
  return out;
}

AnalysisStream::AnalysisStream(FilterBankSpec fb) : fb_(std::move(fb)) {
  const std::size_t K = fb_.max_taps();
  for (const auto& h : fb_.filters()) {
    auto t = h.taps(K);
    std::reverse(t.begin(), t.end());
    reversed_taps_.push_back(std::move(t));
  }
  history_.assign(K, 0.0);
}

bool AnalysisStream::push(cd sample, std::span<cd> out) {
  std::shift_left(history_.begin(), history_.end(), 1);
  history_.back() = sample;
  const bool emit = count_ % static_cast<std::size_t>(fb_.decimation()) == 0;
  ++count_;
  if (!emit) return false;
  if (out.size() != fb_.channels()) throw DimensionError("AnalysisStream::push: output span has wrong length");
  for (std::size_t j = 0; j < reversed_taps_.size(); ++j) out[j] = kernels::dot(reversed_taps_[j], history_);
  return true;
}

void AnalysisStream::reset() {
  std::fill(history_.begin(), history_.end(), cd(0.0));
  count_ = 0;
}

}  // namespace ufb
