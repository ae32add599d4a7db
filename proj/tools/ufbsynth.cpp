// ufbsynth: Wiener synthesis, adaptive synthesis and property checks for
// uniform filter banks.
//
// Exit codes: 0 success, 1 internal error, 2 config/usage error,
// 3 singular bank, 4 property failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "ufb/errors.hpp"
#include "ufb/harness.hpp"
#include "ufb/io.hpp"
#include "ufb/kernels.hpp"
#include "ufb/verify.hpp"
#include "ufb/wiener.hpp"

namespace {

using namespace ufb;

enum Exit : int { kOk = 0, kInternal = 1, kConfig = 2, kSingular = 3, kProperty = 4 };

std::string complex_str(cd z) {
  if (std::abs(z.imag()) < 1e-12 * std::max(1.0, std::abs(z))) return fmt::format("{:.8g}", z.real());
  return fmt::format("{:.8g}{:+.8g}j", z.real(), z.imag());
}

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", p.string()));
  out << s;
}

// Scales so the denominator's z^0 coefficient is 1 and drops round-off
// imaginary parts of real-valued entries.
LaurentPoly display_poly(const LaurentPoly& p, cd scale, bool real) {
  std::vector<cd> c(p.coeffs().begin(), p.coeffs().end());
  for (cd& v : c) {
    v *= scale;
    if (real) v = v.real();
  }
  return LaurentPoly(p.lowest_power(), std::move(c));
}

void print_solution(const WienerSolution& ws) {
  bool real = true;
  for (std::size_t p = 0; p < ws.rows(); ++p)
    for (std::size_t q = 0; q < ws.cols(); ++q) {
      const RationalTF r = ws.reduced(p, q);
      for (const cd& v : r.num().coeffs()) real = real && std::abs(v.imag()) <= 1e-9 * r.num().max_abs();
    }
  fmt::print("Wiener synthesis filter A(z): {} x {}\n", ws.rows(), ws.cols());
  for (std::size_t p = 0; p < ws.rows(); ++p)
    for (std::size_t q = 0; q < ws.cols(); ++q) {
      const RationalTF r = reduce_for_display(ws.reduced(p, q));
      const cd scale = 1.0 / r.den().coeff(0);
      fmt::print("  A[{},{}] = ({}) / ({})\n", p + 1, q + 1, display_poly(r.num(), scale, real).pretty(),
                 display_poly(r.den(), scale, real).pretty());
    }
  fmt::print("stability: {}\n", ws.stable ? "stable" : "UNSTABLE");
  for (const cd& z : ws.poles) fmt::print("  pole {}  |z| = {:.8g}\n", complex_str(z), std::abs(z));
}

struct WienerArgs {
  std::string config;
  std::string out;
  bool force = false;
};

int cmd_wiener(const WienerArgs& a) {
  const io::json j = io::load_json_file(a.config);
  // Either a bare bank or an experiment config with "bank" and optional "input".
  const bool nested = j.is_object() && j.contains("bank");
  const FilterBankSpec fb = io::bank_from_json(nested ? j["bank"] : j, nested ? "bank" : "config");
  const InputModel input = nested && j.contains("input") ? io::input_from_json(j["input"]) : InputModel{};
  const InputPSD sx = input.psd();

  if (!a.out.empty()) io::prepare_output_dir(a.out, a.force);
  const auto t0 = std::chrono::steady_clock::now();
  const WienerSolution ws = wiener_solve(fb, sx);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  print_solution(ws);
  fmt::print("solve time: {:.3f} s\n", secs);

  std::optional<ReconstructionReport> rep;
  if (fb.maximally_decimated()) {
    const auto grid = unit_circle_grid();
    rep = reconstruction_check(ws, fb, sx, grid);
    fmt::print("reconstruction residual on unit circle: max {:.3e} (A S_vd - S_dd), {:.3e} (A S_vv A~ - S_dd)\n",
               rep->max_residual, rep->max_psd_residual);
  }
  if (!a.out.empty()) {
    const std::filesystem::path dir(a.out);
    write_text(dir / "wiener.json", io::wiener_to_json(ws).dump(2) + "\n");
    if (rep) {
      std::ofstream os(dir / "residuals.csv", std::ios::binary);
      io::write_residual_csv(os, *rep);
    }
    fmt::print("wrote {}\n", (dir / "wiener.json").string());
  }
  return kOk;
}

struct AdaptArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iters;
  std::optional<double> step;
  bool force = false;
};

void print_tap_comparison(const ExperimentResult& res, std::size_t n_rows) {
  const TapTable& t = res.final_taps;
  const std::size_t rows = std::min(n_rows, t.tap_len());
  std::string header = fmt::format("{:>4}", "k");
  for (std::size_t p = 0; p < t.outputs(); ++p)
    for (std::size_t q = 0; q < t.inputs(); ++q) header += fmt::format(" {:>11}", fmt::format("a_{{{},{}}}", p + 1, q + 1));
  fmt::print("taps at iteration {} (adaptive / Wiener):\n{}\n", res.trace.iterations(), header);
  for (std::size_t k = 0; k < rows; ++k) {
    std::string line = fmt::format("{:>4}", k);
    std::string ref = fmt::format("{:>4}", "");
    for (std::size_t p = 0; p < t.outputs(); ++p)
      for (std::size_t q = 0; q < t.inputs(); ++q) {
        line += fmt::format(" {:>11.4e}", t.at(p, q, k).real());
        const bool have = !res.wiener_taps.raw().empty() && k < res.wiener_taps.tap_len();
        ref += have ? fmt::format(" {:>11.4e}", res.wiener_taps.at(p, q, k).real()) : fmt::format(" {:>11}", "-");
      }
    fmt::print("{}\n{}\n", line, ref);
  }
}

int run_adapt(ExperimentConfig cfg, const AdaptArgs& a) {
  if (a.seed) cfg.seed = *a.seed;
  if (a.iters) {
    cfg.iterations = *a.iters;
    cfg.snapshots.clear();
  }
  if (a.step) {
    if (!(*a.step > 0.0)) throw ConfigError("--step: must be > 0");
    cfg.adaptive.step = *a.step;
  }
  if (!a.out.empty()) io::prepare_output_dir(a.out, a.force);

  std::fprintf(stderr, "running %zu iterations (M = %d, L = %zu, tap_len = %zu, kernels = %s)\n", cfg.iterations,
               cfg.bank.decimation(), cfg.bank.channels(), cfg.adaptive.tap_len,
               std::string(kernels::backend_name(kernels::active_backend())).c_str());
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult res = run_experiment(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  print_solution(res.wiener);
  print_tap_comparison(res, 5);
  const auto& m = res.metrics;
  fmt::print("iterations: {}  run time: {:.2f} s\n", res.trace.iterations(), secs);
  if (res.trace.iterations() > 0) {
    fmt::print("steady-state MSE: {:.4e}  reconstruction MSE (relative): {:.4e}\n", m.steady_state_mse,
               m.reconstruction_mse);
    if (res.comparison)
      fmt::print("tap distance to Wiener (relative): {:.4e}  max |tap diff|: {:.4e}\n", m.tap_distance,
                 m.max_tap_abs_diff);
  }
  if (!a.out.empty()) {
    io::write_result_dir(res, a.out);
    fmt::print("wrote results to {}\n", a.out);
  }
  return kOk;
}

struct VerifyArgs {
  std::uint64_t seed = 1;
  bool quick = false;
  bool inject_fault = false;
};

int cmd_verify(const VerifyArgs& a) {
  const auto results = verify::run_property_suite({.seed = a.seed, .quick = a.quick, .inject_fault = a.inject_fault});
  bool ok = true;
  for (const auto& r : results) {
    fmt::print("{:<26} {}  cases={} failures={} worst={:.3e} tol={:.1e}\n", r.name, r.passed() ? "PASS" : "FAIL",
               r.cases, r.failures, r.worst, r.tolerance);
    ok = ok && r.passed();
  }
  fmt::print("{}\n", ok ? "all properties passed" : "property failures detected");
  return ok ? kOk : kProperty;
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfig;
  } catch (const DimensionError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfig;
  } catch (const SingularBankError& e) {
    fmt::print(stderr, "singular bank: {}\n  rank defect: {}\n  certificate: {}\n", e.what(), e.rank_defect(),
               e.certificate());
    return kSingular;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix Wiener and adaptive synthesis filters for uniform filter banks"};
  app.require_subcommand(1);

  WienerArgs wa;
  auto* w = app.add_subcommand("wiener", "Exact Wiener synthesis filter for a bank config");
  w->add_option("--config", wa.config, "Bank or experiment config (JSON)")->required();
  w->add_option("--out", wa.out, "Output directory for wiener.json and residuals.csv");
  w->add_flag("--force", wa.force, "Allow writing into a non-empty output directory");

  AdaptArgs aa;
  auto* ad = app.add_subcommand("adapt", "Run an adaptive synthesis experiment from a config");
  ad->add_option("--config", aa.config, "Experiment config (JSON)")->required();
  ad->add_option("--out", aa.out, "Result directory");
  ad->add_option("--seed", aa.seed, "Override the RNG seed");
  ad->add_option("--iters", aa.iters, "Override the iteration count");
  ad->add_option("--step", aa.step, "Override the step size");
  ad->add_flag("--force", aa.force, "Allow writing into a non-empty output directory");

  VerifyArgs va;
  auto* ve = app.add_subcommand("verify", "Randomized property suite");
  ve->add_option("--seed", va.seed, "RNG seed")->capture_default_str();
  ve->add_flag("--quick", va.quick, "Reduced case counts");
  ve->add_flag("--inject-fault", va.inject_fault, "Test-only: corrupt one alias term (the suite must fail)");

  AdaptArgs ra;
  auto* re = app.add_subcommand("repro", "Reproduce a built-in experiment preset");
  re->add_option("preset", ra.preset, "exp1 or exp2")->required()->check(CLI::IsMember({"exp1", "exp2"}));
  re->add_option("--out", ra.out, "Result directory");
  re->add_option("--seed", ra.seed, "Override the RNG seed");
  re->add_option("--iters", ra.iters, "Override the iteration count");
  re->add_option("--step", ra.step, "Override the step size");
  re->add_flag("--force", ra.force, "Allow writing into a non-empty output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  if (w->parsed()) return guarded([&] { return cmd_wiener(wa); });
  if (ad->parsed())
    return guarded([&] { return run_adapt(io::config_from_json(io::load_json_file(aa.config)), aa); });
  if (ve->parsed()) return guarded([&] { return cmd_verify(va); });
  if (re->parsed()) {
    return guarded([&] {
      const ExperimentConfig cfg = ra.preset == "exp1" ? experiment1_config() : experiment2_config();
      return run_adapt(cfg, ra);
    });
  }
  return kConfig;
}
