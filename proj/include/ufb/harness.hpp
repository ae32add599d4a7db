#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ufb/adaptive.hpp"
#include "ufb/spectra.hpp"
#include "ufb/wiener.hpp"

namespace ufb {

/// Name of the pinned Gaussian generator, recorded in result metadata.
inline constexpr const char* kGeneratorName = "std::mt19937_64 + std::normal_distribution<double>";
inline constexpr std::uint64_t kDefaultSeed = 20130215;

enum class InputKind { White, Shaped };

/// WSS input: unit-energy-normalized shaping filter G applied to white
/// Gaussian noise, scaled to `variance`. White input is G = 1.
struct InputModel {
  InputKind kind = InputKind::White;
  double variance = 1.0;
  LaurentPoly shaping = LaurentPoly::constant(1.0);

  /// variance * G G~ / ||g||^2
  InputPSD psd() const;
};

std::vector<cd> generate_wss(const InputModel& model, std::size_t n_samples, std::uint64_t seed);

struct ExperimentConfig {
  FilterBankSpec bank;
  InputModel input;
  std::uint64_t seed = 1;
  AdaptiveOptions adaptive;
  std::size_t iterations = 1000;
  std::vector<std::size_t> snapshots;
  bool per_component_trace = false;
};

struct PairComparison {
  std::size_t p = 0, q = 0;
  std::vector<double> abs_diff;  // |tap - reference| per tap index
  double relative_diff = 0.0;    // ||tap - reference|| / ||reference||
};

struct ComparisonReport {
  std::vector<PairComparison> pairs;
  double max_abs_diff = 0.0;
  /// ||taps - reference|| / ||reference|| over the whole table.
  double relative_distance = 0.0;

  /// Largest |difference| over the first `k` taps of every pair.
  double max_leading_abs_diff(std::size_t k) const;
};

/// Compares taps against the first n_terms of each Wiener impulse response
/// (taps beyond tap_len count as zero). Throws UnstableSolutionError for
/// unstable solutions.
ComparisonReport compare_to_wiener(const TapTable& taps, const WienerSolution& ws, std::size_t n_terms);

struct ExperimentMetrics {
  double tap_distance = 0.0;         // relative, against the truncated Wiener response
  double max_tap_abs_diff = 0.0;
  double steady_state_mse = 0.0;     // mean ||e||^2 over the last 20% of iterations
  double reconstruction_mse = 0.0;   // sum ||e||^2 / sum ||d||^2 over the same window
  double initial_mse = 0.0;          // mean ||e||^2 over the first min(50, n) iterations
  double desired_power = 0.0;        // mean ||d||^2 over the run
  std::size_t wiener_truncation = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  AdaptationTrace trace;
  TapTable final_taps;
  WienerSolution wiener;
  TapTable wiener_taps;  // truncated to wiener_truncation terms; empty if unstable
  std::optional<ComparisonReport> comparison;
  ExperimentMetrics metrics;
  std::string kernel_backend;
};

/// Analysis -> desired signal -> adaptation -> exact Wiener solve -> comparison.
/// Deterministic for a fixed config on one platform.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Two-band bank 4 + 7z^-1 + 2z^-2, 3 - z^-1 - 1.5z^-2; d = 0.
FilterBankSpec experiment1_bank();
/// Three-band bank with order-4/3/4 filters; d = 0.
FilterBankSpec experiment2_bank();
/// NLMS, step 0.6, 11 taps, 2000 iterations, white unit-variance input.
ExperimentConfig experiment1_config(std::uint64_t seed = kDefaultSeed);
/// NLMS, step 0.45, 15 taps, 12000 iterations, white unit-variance input.
ExperimentConfig experiment2_config(std::uint64_t seed = kDefaultSeed);

/// Mean of x over [lo, hi) for hi doubling from `start`:
/// [start, 2 start), [2 start, 4 start), ..., last bin truncated at x.size().
struct ErrorBin {
  std::size_t begin = 0, end = 0;
  double mean = 0.0;
  double std_error = 0.0;
};
std::vector<ErrorBin> exponential_bins(const std::vector<double>& x, std::size_t start);

/// First iteration whose trailing-window mean of ||e||^2 / reference_power
/// falls below 10^(level_db/10); nullopt if never.
std::optional<std::size_t> iterations_to_level(const std::vector<double>& squared_error, double reference_power,
                                               double level_db, std::size_t window = 20);

}  // namespace ufb
