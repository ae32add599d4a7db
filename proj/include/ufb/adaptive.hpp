#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ufb/matrix_fir.hpp"
#include "ufb/spectra.hpp"

namespace ufb {

enum class UpdateRule { Lms, Nlms };

/// NLMS regressor energy: each input channel's own delay line, or all of them.
enum class NlmsNormalization { PerChannel, Joint };

struct AdaptiveOptions {
  UpdateRule rule = UpdateRule::Nlms;
  double step = 0.5;
  std::size_t tap_len = 8;
  NlmsNormalization normalization = NlmsNormalization::PerChannel;
  double eps = 1e-8;
};

/// Matrix of FIR filters a_{p,q} adapted by the matrix LMS rule
///   a_{p,q} <- a_{p,q} + mu_{p,q} e_p conj(u_q)
/// where u_q is channel q's delay line, or its normalized variant with
/// mu_{p,q} / (eps + ||u_q||^2). Taps start at zero.
///
/// Not thread-safe: one writer per instance.
class MatrixAdaptiveFilter {
 public:
  MatrixAdaptiveFilter(std::size_t outputs, std::size_t inputs, const AdaptiveOptions& opts);

  std::size_t outputs() const noexcept { return fir_.outputs(); }
  std::size_t inputs() const noexcept { return fir_.inputs(); }
  std::size_t tap_len() const noexcept { return fir_.tap_len(); }
  const AdaptiveOptions& options() const noexcept { return opts_; }

  double step(std::size_t p, std::size_t q) const { return steps_.at(p * inputs() + q); }
  /// Per-pair override; must be > 0.
  void set_step(std::size_t p, std::size_t q, double mu);
  /// Permits mu = 0 (frozen filter); used to test the degenerate case.
  void set_all_steps(double mu);

  const TapTable& taps() const noexcept { return fir_.taps(); }
  void set_taps(const TapTable& taps);
  std::span<const cd> history(std::size_t q) const { return fir_.history(q); }

  std::vector<cd> filter_block(std::span<const cd> v) { return fir_.filter_block(v); }
  std::vector<cd> lms_update(std::span<const cd> v, std::span<const cd> d);
  std::vector<cd> nlms_update(std::span<const cd> v, std::span<const cd> d);
  /// Update with the configured rule.
  std::vector<cd> update(std::span<const cd> v, std::span<const cd> d);

 private:
  std::vector<cd> adapt(std::span<const cd> v, std::span<const cd> d, bool normalized);

  AdaptiveOptions opts_;
  MatrixFir fir_;
  std::vector<double> steps_;
};

struct TapSnapshot {
  std::size_t iteration = 0;
  TapTable taps;
};

/// Learning curve and tap snapshots of one adaptation run.
struct AdaptationTrace {
  std::vector<double> squared_error;                // ||e(n)||^2 per block
  std::vector<std::vector<double>> component_error; // |e_p(n)|^2, optional
  std::vector<TapSnapshot> snapshots;

  std::size_t iterations() const noexcept { return squared_error.size(); }
  /// 10 log10(||e(n)||^2 / reference_power).
  std::vector<double> normalized_db(double reference_power) const;
};

/// Runs `n_iters` updates over v(0..), d(0..). A snapshot at iteration k holds
/// the taps after k updates (k = 0 is the initial state).
AdaptationTrace run_adaptation(MatrixAdaptiveFilter& f, const BlockedSignal& v, const BlockedSignal& d,
                               std::size_t n_iters, std::span<const std::size_t> snapshot_at = {},
                               bool per_component = false);

}  // namespace ufb
