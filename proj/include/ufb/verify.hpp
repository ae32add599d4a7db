#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ufb/spectra.hpp"
#include "ufb/wiener.hpp"

namespace ufb::verify {

struct VerifyOptions {
  std::uint64_t seed = 1;
  bool quick = false;
  /// Test-only mutation forwarded to the alias-sum determinant.
  bool inject_fault = false;
};

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;      // worst observed error measure
  double tolerance = 0.0;
  bool passed() const noexcept { return failures == 0 && cases > 0; }
};

/// Random real taps of order in [min_order, max_order], standard normal coefficients.
LaurentPoly random_filter(std::mt19937_64& rng, int max_order, int min_order = 0);
FilterBankSpec random_bank(std::mt19937_64& rng, int M, std::size_t L, int max_order, int delay = 0,
                           int min_order = 0);
/// Every filter has order >= M - 1, so all polyphase components are random
/// and the bank is invertible with probability one.
FilterBankSpec random_full_rank_bank(std::mt19937_64& rng, int M, std::size_t L, int max_order, int delay = 0);
/// gain * G G~ + floor with a random G of order <= max_order.
InputPSD random_psd(std::mt19937_64& rng, int max_order);

/// Alias-sum determinant vs direct polynomial determinant, random subsets.
PropertyResult theorem1_agreement(std::mt19937_64& rng, std::size_t n_cases, std::size_t points_per_case,
                                  bool inject_fault = false);
/// Alias-sum determinant and closed form are unchanged across all M roots.
PropertyResult branch_independence(std::mt19937_64& rng, std::size_t n_cases);
/// Maximally decimated banks: Wiener solution under white and shaped input coincide.
PropertyResult psd_independence(std::mt19937_64& rng, std::size_t n_cases);
/// A S_vv = S_dv for random solvable banks (L <= M).
PropertyResult wiener_identity(std::mt19937_64& rng, std::size_t n_cases);
/// Closed-form ratio vs the solved rational matrix on unit-circle points.
PropertyResult closed_form_consistency(std::mt19937_64& rng, std::size_t n_cases);

std::vector<PropertyResult> run_property_suite(const VerifyOptions& opts);

}  // namespace ufb::verify
