#include "ufb/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "ufb/errors.hpp"
#include "ufb/kernels.hpp"

namespace ufb {

MatrixAdaptiveFilter::MatrixAdaptiveFilter(std::size_t outputs, std::size_t inputs, const AdaptiveOptions& opts)
    : opts_(opts), fir_(TapTable(outputs, inputs, opts.tap_len)), steps_(outputs * inputs, opts.step) {
  if (outputs == 0 || inputs == 0) throw std::invalid_argument("MatrixAdaptiveFilter: empty dimensions");
  if (opts.tap_len == 0) throw std::invalid_argument("MatrixAdaptiveFilter: tap length must be >= 1");
  if (!(opts.step > 0.0)) throw std::invalid_argument(fmt::format("step size must be > 0, got {}", opts.step));
  if (opts.eps < 0.0) throw std::invalid_argument("NLMS regularizer must be >= 0");
}

void MatrixAdaptiveFilter::set_step(std::size_t p, std::size_t q, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument(fmt::format("step size must be > 0, got {}", mu));
  steps_.at(p * inputs() + q) = mu;
}

void MatrixAdaptiveFilter::set_all_steps(double mu) {
  if (mu < 0.0) throw std::invalid_argument("step size must be >= 0");
  std::fill(steps_.begin(), steps_.end(), mu);
}

void MatrixAdaptiveFilter::set_taps(const TapTable& taps) {
  if (taps.outputs() != outputs() || taps.inputs() != inputs() || taps.tap_len() != tap_len())
    throw DimensionError("set_taps: table shape differs from filter");
  fir_.taps() = taps;
}

std::vector<cd> MatrixAdaptiveFilter::lms_update(std::span<const cd> v, std::span<const cd> d) {
  return adapt(v, d, false);
}

std::vector<cd> MatrixAdaptiveFilter::nlms_update(std::span<const cd> v, std::span<const cd> d) {
  return adapt(v, d, true);
}

std::vector<cd> MatrixAdaptiveFilter::update(std::span<const cd> v, std::span<const cd> d) {
  return adapt(v, d, opts_.rule == UpdateRule::Nlms);
}

std::vector<cd> MatrixAdaptiveFilter::adapt(std::span<const cd> v, std::span<const cd> d, bool normalized) {
  if (d.size() != outputs())
    throw DimensionError(fmt::format("desired vector has length {}, expected {}", d.size(), outputs()));
  std::vector<cd> e = fir_.filter_block(v);
  for (std::size_t p = 0; p < outputs(); ++p) e[p] = d[p] - e[p];

  std::vector<double> scale(inputs(), 1.0);
  if (normalized) {
    double joint = 0.0;
    for (std::size_t q = 0; q < inputs(); ++q) {
      scale[q] = kernels::norm2(history(q));
      joint += scale[q];
    }
    for (auto& s : scale) {
      const double energy = opts_.normalization == NlmsNormalization::Joint ? joint : s;
      const double denom = opts_.eps + energy;
      s = denom > 0.0 ? 1.0 / denom : 0.0;
    }
  }

  TapTable& taps = fir_.taps();
  for (std::size_t p = 0; p < outputs(); ++p) {
    if (e[p] == cd(0.0)) continue;
    for (std::size_t q = 0; q < inputs(); ++q) {
      const double mu = steps_[p * inputs() + q] * scale[q];
      if (mu == 0.0) continue;
      kernels::axpy_conj(taps.tap(p, q), mu * e[p], history(q));
    }
  }
  return e;
}

std::vector<double> AdaptationTrace::normalized_db(double reference_power) const {
  std::vector<double> out(squared_error.size());
  std::transform(squared_error.begin(), squared_error.end(), out.begin(),
                 [reference_power](double e) { return 10.0 * std::log10(e / reference_power); });
  return out;
}

AdaptationTrace run_adaptation(MatrixAdaptiveFilter& f, const BlockedSignal& v, const BlockedSignal& d,
                               std::size_t n_iters, std::span<const std::size_t> snapshot_at, bool per_component) {
  if (v.size() < n_iters || d.size() < n_iters)
    throw SequenceExhaustedError(fmt::format("adaptation needs {} blocks, have {} input / {} desired", n_iters,
                                             v.size(), d.size()));
  if (n_iters > 0 && (v.dim() != f.inputs() || d.dim() != f.outputs()))
    throw DimensionError("run_adaptation: signal dimensions do not match the filter");

  std::vector<std::size_t> schedule(snapshot_at.begin(), snapshot_at.end());
  std::sort(schedule.begin(), schedule.end());
  schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
  auto next = schedule.begin();

  AdaptationTrace trace;
  trace.squared_error.reserve(n_iters);
  if (per_component) trace.component_error.assign(f.outputs(), {});
  auto take_snapshots = [&](std::size_t iter) {
    while (next != schedule.end() && *next == iter) {
      trace.snapshots.push_back({iter, f.taps()});
      ++next;
    }
  };

  take_snapshots(0);
  for (std::size_t n = 0; n < n_iters; ++n) {
    const auto e = f.update(v[n], d[n]);
    double total = 0.0;
    for (std::size_t p = 0; p < e.size(); ++p) {
      const double ep = std::norm(e[p]);
      total += ep;
      if (per_component) trace.component_error[p].push_back(ep);
    }
    trace.squared_error.push_back(total);
    take_snapshots(n + 1);
  }
  return trace;
}

}  // namespace ufb
