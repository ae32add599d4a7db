#include "ufb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ufb/errors.hpp"
#include "ufb/kernels.hpp"

namespace ufb {

InputPSD InputModel::psd() const {
  if (kind == InputKind::White) return InputPSD::white(variance);
  const double energy = shaping.norm() * shaping.norm();
  return InputPSD::shaped(shaping, variance / energy);
}

std::vector<cd> generate_wss(const InputModel& model, std::size_t n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> w(n_samples);
  for (auto& s : w) s = normal(rng);

  std::vector<cd> x(n_samples);
  if (model.kind == InputKind::White) {
    const double g = std::sqrt(model.variance);
    std::transform(w.begin(), w.end(), x.begin(), [g](double s) { return cd(g * s); });
    return x;
  }
  if (!model.shaping.is_zero() && model.shaping.highest_power() > 0)
    throw std::invalid_argument("shaping filter must be causal");
  const auto taps = model.shaping.taps(static_cast<std::size_t>(1 - model.shaping.lowest_power()));
  const double gain = std::sqrt(model.variance) / model.shaping.norm();
  for (std::size_t n = 0; n < n_samples; ++n) {
    cd acc = 0.0;
    for (std::size_t l = 0; l < taps.size() && l <= n; ++l) acc += taps[l] * w[n - l];
    x[n] = gain * acc;
  }
  return x;
}

double ComparisonReport::max_leading_abs_diff(std::size_t k) const {
  double worst = 0.0;
  for (const auto& pc : pairs)
    for (std::size_t m = 0; m < std::min(k, pc.abs_diff.size()); ++m) worst = std::max(worst, pc.abs_diff[m]);
  return worst;
}

ComparisonReport compare_to_wiener(const TapTable& taps, const WienerSolution& ws, std::size_t n_terms) {
  if (taps.outputs() != ws.rows() || taps.inputs() != ws.cols())
    throw DimensionError("compare_to_wiener: tap table shape differs from Wiener solution");
  const TapTable ref = truncated_impulse_responses(ws, n_terms);
  ComparisonReport rep;
  double diff2 = 0.0, ref2 = 0.0;
  for (std::size_t p = 0; p < ws.rows(); ++p)
    for (std::size_t q = 0; q < ws.cols(); ++q) {
      PairComparison pc{p, q, {}, 0.0};
      double pd = 0.0, pr = 0.0;
      const std::size_t n = std::max(n_terms, taps.tap_len());
      for (std::size_t m = 0; m < n; ++m) {
        const cd a = m < taps.tap_len() ? taps.at(p, q, m) : cd(0.0);
        const cd r = m < n_terms ? ref.at(p, q, m) : cd(0.0);
        const double d = std::abs(a - r);
        pc.abs_diff.push_back(d);
        rep.max_abs_diff = std::max(rep.max_abs_diff, d);
        pd += d * d;
        pr += std::norm(r);
      }
      pc.relative_diff = pr > 0.0 ? std::sqrt(pd / pr) : std::sqrt(pd);
      diff2 += pd;
      ref2 += pr;
      rep.pairs.push_back(std::move(pc));
    }
  rep.relative_distance = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
  return rep;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const FilterBankSpec& fb = cfg.bank;
  const auto M = static_cast<std::size_t>(fb.decimation());
  const std::size_t L = fb.channels();

  ExperimentResult res{.config = cfg,
                       .trace = {},
                       .final_taps = {},
                       .wiener = {},
                       .wiener_taps = {},
                       .comparison = std::nullopt,
                       .metrics = {},
                       .kernel_backend = std::string(kernels::backend_name(kernels::active_backend()))};

  // Wiener first: a singular bank is reported before any simulation work.
  res.wiener = wiener_solve(fb, cfg.input.psd());

  const std::vector<cd> x = generate_wss(cfg.input, M * std::max<std::size_t>(cfg.iterations, 1), cfg.seed);
  const BlockedSignal v = run_analysis(fb, x);
  const BlockedSignal d = make_desired(x, fb.decimation(), fb.delay());

  MatrixAdaptiveFilter filter(M, L, cfg.adaptive);
  res.trace = run_adaptation(filter, v, d, cfg.iterations, cfg.snapshots, cfg.per_component_trace);
  res.final_taps = filter.taps();

  auto& m = res.metrics;
  const std::size_t n = res.trace.iterations();
  double dpow = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < M; ++i) dpow += std::norm(d.at(k, i));
  m.desired_power = n ? dpow / static_cast<double>(n) : 0.0;
  if (n > 0) {
    const std::size_t head = std::min<std::size_t>(50, n);
    m.initial_mse = std::accumulate(res.trace.squared_error.begin(), res.trace.squared_error.begin() + head, 0.0) /
                    static_cast<double>(head);
    const std::size_t start = n - std::max<std::size_t>(1, n / 5);
    double err = 0.0, ref = 0.0;
    for (std::size_t k = start; k < n; ++k) {
      err += res.trace.squared_error[k];
      for (std::size_t i = 0; i < M; ++i) ref += std::norm(d.at(k, i));
    }
    m.steady_state_mse = err / static_cast<double>(n - start);
    m.reconstruction_mse = ref > 0.0 ? err / ref : err;
  }

  if (res.wiener.stable) {
    m.wiener_truncation = std::max(suggested_truncation(res.wiener), cfg.adaptive.tap_len);
    res.wiener_taps = truncated_impulse_responses(res.wiener, m.wiener_truncation);
    res.comparison = compare_to_wiener(res.final_taps, res.wiener, m.wiener_truncation);
    m.tap_distance = res.comparison->relative_distance;
    m.max_tap_abs_diff = res.comparison->max_abs_diff;
  }
  return res;
}

FilterBankSpec experiment1_bank() {
  const std::vector<double> h0{4.0, 7.0, 2.0};
  const std::vector<double> h1{3.0, -1.0, -1.5};
  return FilterBankSpec(2, {LaurentPoly::from_taps(h0), LaurentPoly::from_taps(h1)}, 0);
}

FilterBankSpec experiment2_bank() {
  const std::vector<double> h0{13.0, -3.0, 2.0, -5.0, -2.0};
  const std::vector<double> h1{1.0, -24.0, -5.0, 7.0};
  const std::vector<double> h2{-19.0, 5.0, 14.0, 1.0, -8.0};
  return FilterBankSpec(3, {LaurentPoly::from_taps(h0), LaurentPoly::from_taps(h1), LaurentPoly::from_taps(h2)}, 0);
}

ExperimentConfig experiment1_config(std::uint64_t seed) {
  ExperimentConfig cfg{.bank = experiment1_bank(),
                       .input = {},
                       .seed = seed,
                       .adaptive = {.rule = UpdateRule::Nlms, .step = 0.6, .tap_len = 11},
                       .iterations = 2000,
                       .snapshots = {2000},
                       .per_component_trace = true};
  return cfg;
}

ExperimentConfig experiment2_config(std::uint64_t seed) {
  ExperimentConfig cfg{.bank = experiment2_bank(),
                       .input = {},
                       .seed = seed,
                       .adaptive = {.rule = UpdateRule::Nlms, .step = 0.45, .tap_len = 15},
                       .iterations = 12000,
                       .snapshots = {12000},
                       .per_component_trace = true};
  return cfg;
}

std::vector<ErrorBin> exponential_bins(const std::vector<double>& x, std::size_t start) {
  std::vector<ErrorBin> bins;
  if (start == 0) start = 1;
  for (std::size_t lo = start; lo < x.size(); lo *= 2) {
    const std::size_t hi = std::min(2 * lo, x.size());
    ErrorBin b{lo, hi, 0.0, 0.0};
    const double count = static_cast<double>(hi - lo);
    b.mean = std::accumulate(x.begin() + static_cast<std::ptrdiff_t>(lo), x.begin() + static_cast<std::ptrdiff_t>(hi),
                             0.0) / count;
    double var = 0.0;
    for (std::size_t k = lo; k < hi; ++k) var += (x[k] - b.mean) * (x[k] - b.mean);
    b.std_error = count > 1 ? std::sqrt(var / (count - 1) / count) : 0.0;
    bins.push_back(b);
  }
  return bins;
}

std::optional<std::size_t> iterations_to_level(const std::vector<double>& squared_error, double reference_power,
                                               double level_db, std::size_t window) {
  const double threshold = std::pow(10.0, level_db / 10.0) * reference_power;
  double sum = 0.0;
  for (std::size_t k = 0; k < squared_error.size(); ++k) {
    sum += squared_error[k];
    if (k >= window) sum -= squared_error[k - window];
    if (k + 1 >= window && sum / static_cast<double>(window) < threshold) return k + 1;
  }
  return std::nullopt;
}

}  // namespace ufb
