// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: ufb_acceptance [--expect-fail N]...
// Exit status is 0 when the failing set equals the expected-fail set, so a
// criterion known to be unattainable still prints FAIL while the run stays
// scriptable; an expected failure that starts passing is reported too.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <set>
#include <string>

#include <fmt/format.h>

#include "test_common.hpp"
#include "ufb/errors.hpp"
#include "ufb/harness.hpp"
#include "ufb/verify.hpp"
#include "ufb/wiener.hpp"

using namespace ufb;
using namespace ufb::test;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome wiener_two_band() {
  const auto t0 = std::chrono::steady_clock::now();
  const WienerSolution ws = wiener_solve(experiment1_bank(), InputPSD::white());
  const double secs = seconds_since(t0);
  const double res = max_cross_residual(ws.A, expected_exp1());
  return {res < 1e-9 && secs < 1.0, fmt::format("max cross residual {:.2e}, {:.3f} s", res, secs)};
}

Outcome wiener_three_band() {
  const auto t0 = std::chrono::steady_clock::now();
  const WienerSolution ws = wiener_solve(experiment2_bank(), InputPSD::white());
  const double secs = seconds_since(t0);
  const double res = max_cross_residual(ws.A, expected_exp2());
  double rmax = 0.0;
  for (const cd& p : ws.poles) rmax = std::max(rmax, std::abs(p));
  const bool ok = res < 1e-9 && ws.stable && ws.poles.size() == 2 && rmax < 1.0 && secs < 1.0;
  return {ok, fmt::format("max cross residual {:.2e} over 9 entries, {} with {} poles, max |pole| {:.6f}, {:.3f} s", res,
                          ws.stable ? "stable" : "unstable", ws.poles.size(), rmax, secs)};
}

Outcome table_one() {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult res = run_experiment(experiment1_config());
  const double secs = seconds_since(t0);
  const TapTable& t = res.trace.snapshots.at(0).taps;
  const double table[5][4] = {{4.000e-2, 2.800e-1, 1.200e-1, -1.600e-1},
                              {1.360e-2, 9.520e-2, -1.920e-2, -1.344e-1},
                              {4.624e-3, 3.237e-2, -6.528e-3, -4.570e-2},
                              {1.572e-3, 1.101e-2, -2.220e-3, -1.554e-2},
                              {5.350e-4, 3.741e-3, -7.553e-4, -5.282e-3}};
  double worst = 0.0;
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t c = 0; c < 4; ++c) worst = std::max(worst, std::abs(t.at(c / 2, c % 2, k) - table[k][c]));
  double worst_ratio = 0.0;
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t k = 1; k <= 6; ++k)
      worst_ratio = std::max(worst_ratio, std::abs((t.at(0, q, k + 1) / t.at(0, q, k)).real() - 0.34));
  const bool ok = worst < 5e-3 && worst_ratio <= 0.01 && secs < 5.0;
  return {ok, fmt::format("max |tap - table| {:.2e} on 5x4 taps at iteration {}, max |ratio - 0.34| {:.2e}, {:.2f} s",
                          worst, res.trace.snapshots.at(0).iteration, worst_ratio, secs)};
}

Outcome table_two() {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult res = run_experiment(experiment2_config());
  const double secs = seconds_since(t0);
  const RationalMatrix ref = expected_exp2();
  const TapTable& t = res.final_taps;
  double lead = 0.0;
  std::size_t deep_bad = 0;
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) {
      const auto h = rtf_impulse_response(ref(p, q), t.tap_len());
      lead = std::max(lead, std::abs(t.at(p, q, 0) - h[0]));
      for (std::size_t k = 1; k < h.size(); ++k)
        if (std::abs(t.at(p, q, k) - h[k]) > std::max(0.1 * std::abs(h[k]), 1e-4)) ++deep_bad;
    }
  const bool ok = lead < 5e-3 && deep_bad == 0 && secs < 30.0;
  return {ok, fmt::format("a_{{1,1}}[0] = {:.4e} (ref {:.4e}), max leading diff {:.2e}, {} deeper taps out of "
                          "tolerance, {:.2f} s",
                          t.at(0, 0, 0).real(), 155.5 / 2594.0, lead, deep_bad, secs)};
}

Outcome theorem1_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kDefaultSeed);
  const auto r = verify::theorem1_agreement(rng, 500, 32);
  const double secs = seconds_since(t0);
  return {r.passed() && r.cases >= 500 && secs < 60.0,
          fmt::format("{} cases x 32 points, {} failures, worst {:.2e} (tol {:.0e}), {:.2f} s", r.cases, r.failures,
                      r.worst, r.tolerance, secs)};
}

Outcome psd_independence() {
  std::mt19937_64 rng(kDefaultSeed);
  const auto r = verify::psd_independence(rng, 50);

  // Oversampled counterexample: try random L > M banks and look for a pair of
  // PSDs giving different solutions.
  std::size_t tried = 0, singular = 0;
  bool found = false;
  for (int M = 2; M <= 3 && !found; ++M)
    for (std::size_t L = static_cast<std::size_t>(M) + 1; L <= 4 && !found; ++L)
      for (int k = 0; k < 10 && !found; ++k) {
        ++tried;
        const FilterBankSpec fb = verify::random_full_rank_bank(rng, M, L, 3);
        try {
          const WienerSolution a = wiener_solve(fb, InputPSD::white());
          const WienerSolution b = wiener_solve(fb, InputPSD::shaped(verify::random_filter(rng, 3)));
          found = !equivalent(a.A, b.A);
        } catch (const SingularBankError&) {
          ++singular;
        }
      }

  // Undersampled case, reported for reference.
  const FilterBankSpec under = verify::random_full_rank_bank(rng, 3, 2, 3);
  const double under_diff = max_cross_residual(wiener_solve(under, InputPSD::white()).A,
                                               wiener_solve(under, InputPSD::shaped(taps({1, 0.5}))).A);

  const bool ok = r.passed() && r.cases >= 50 && found;
  return {ok, fmt::format("L = M: {} banks, {} failures, worst {:.2e}; L > M counterexample {} ({} of {} oversampled "
                          "banks have det S_vv = 0, no Wiener solution); L < M banks do differ (residual {:.2e})",
                          r.cases, r.failures, r.worst, found ? "found" : "NOT found", singular, tried, under_diff)};
}

Outcome perfect_reconstruction() {
  std::string detail;
  bool ok = true;
  const std::pair<FilterBankSpec, std::size_t> cases[] = {{experiment1_bank(), 60}, {experiment2_bank(), 100}};
  const auto x = generate_wss(InputModel{}, 100000, kDefaultSeed);
  int idx = 1;
  for (const auto& [fb, n_taps] : cases) {
    const WienerSolution ws = wiener_solve(fb, InputPSD::white());
    const std::size_t taps_used = std::max(n_taps, suggested_truncation(ws));
    const double mse = simulate_reconstruction(ws, fb, x, taps_used, 0.2);
    ok = ok && mse < 1e-6;
    detail += fmt::format("{}experiment {}: relative MSE {:.2e} ({} taps)", idx > 1 ? "; " : "", idx, mse, taps_used);
    ++idx;
  }
  return {ok, detail};
}

Outcome error_curves() {
  std::string detail;
  bool ok = true;
  int idx = 1;
  for (const auto& cfg : {experiment1_config(), experiment2_config()}) {
    const ExperimentResult res = run_experiment(cfg);
    const auto bins = exponential_bins(res.trace.squared_error, 50);
    std::size_t strict_rises = 0, significant_rises = 0;
    for (std::size_t k = 1; k < bins.size(); ++k) {
      if (bins[k].mean > bins[k - 1].mean) ++strict_rises;
      if (bins[k].mean > bins[k - 1].mean + 3.0 * std::hypot(bins[k].std_error, bins[k - 1].std_error))
        ++significant_rises;
    }
    const double final_db = 10.0 * std::log10(res.metrics.steady_state_mse / res.metrics.initial_mse);
    ok = ok && significant_rises == 0 && final_db < -40.0;
    detail += fmt::format("{}experiment {}: {} bins, {} rises beyond 3 SE ({} strict), final {:.1f} dB", idx > 1 ? "; " : "",
                          idx, bins.size(), significant_rises, strict_rises, final_db);
    ++idx;
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_fail;
  for (int a = 1; a < argc; ++a) {
    if (std::strcmp(argv[a], "--expect-fail") == 0 && a + 1 < argc) {
      expected_fail.insert(std::atoi(argv[++a]));
    } else {
      std::fprintf(stderr, "usage: %s [--expect-fail N]...\n", argv[0]);
      return 2;
    }
  }

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Wiener reproduction, two-band bank", wiener_two_band},
      {"Wiener reproduction, three-band bank", wiener_three_band},
      {"two-band tap table at iteration 2000", table_one},
      {"three-band leading taps at iteration 12000", table_two},
      {"determinant formula oracle suite", theorem1_suite},
      {"PSD independence and oversampled counterexample", psd_independence},
      {"end-to-end perfect reconstruction", perfect_reconstruction},
      {"error-curve behavior", error_curves},
  };

  std::set<int> failed;
  int n = 1;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    if (!o.pass) failed.insert(n);
    fmt::print("{} criterion {}: {}: {}{}\n", o.pass ? "PASS" : "FAIL", n, name, o.detail,
               !o.pass && expected_fail.count(n) ? " [known unattainable]" : "");
    std::fflush(stdout);
    ++n;
  }
  fmt::print("{} of {} criteria passed\n", std::size(criteria) - failed.size(), std::size(criteria));
  return failed == expected_fail ? 0 : 1;
}
