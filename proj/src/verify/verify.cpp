#include "ufb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ufb/errors.hpp"

namespace ufb::verify {

namespace {

cd random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, u(rng));
}

std::vector<std::size_t> random_selection(std::mt19937_64& rng, std::size_t from, std::size_t count) {
  std::vector<std::size_t> idx(from);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(count);
  return idx;
}

void record(PropertyResult& r, double err) {
  ++r.cases;
  r.worst = std::max(r.worst, err);
  if (!(err <= r.tolerance)) ++r.failures;
}

}  // namespace

LaurentPoly random_filter(std::mt19937_64& rng, int max_order, int min_order) {
  std::uniform_int_distribution<int> order(min_order, std::max(min_order, max_order));
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> taps(static_cast<std::size_t>(order(rng)) + 1);
  for (auto& t : taps) t = n(rng);
  return LaurentPoly::from_taps(taps);
}

FilterBankSpec random_bank(std::mt19937_64& rng, int M, std::size_t L, int max_order, int delay, int min_order) {
  std::vector<LaurentPoly> hs;
  for (std::size_t j = 0; j < L; ++j) hs.push_back(random_filter(rng, max_order, min_order));
  return FilterBankSpec(M, std::move(hs), delay);
}

FilterBankSpec random_full_rank_bank(std::mt19937_64& rng, int M, std::size_t L, int max_order, int delay) {
  return random_bank(rng, M, L, std::max(max_order, M - 1), delay, M - 1);
}

InputPSD random_psd(std::mt19937_64& rng, int max_order) {
  const LaurentPoly g = random_filter(rng, max_order);
  std::uniform_real_distribution<double> floor(0.05, 0.5);
  return InputPSD(g * lp_paraconjugate(g) + LaurentPoly::constant(floor(rng)));
}

PropertyResult theorem1_agreement(std::mt19937_64& rng, std::size_t n_cases, std::size_t points_per_case,
                                  bool inject_fault) {
  PropertyResult r{"theorem1_agreement", 0, 0, 0.0, 1e-8};
  std::uniform_int_distribution<int> pick_m(2, 4);
  for (std::size_t c = 0; c < n_cases; ++c) {
    const int M = pick_m(rng);
    std::uniform_int_distribution<std::size_t> pick_l(1, 4);
    const std::size_t L = pick_l(rng);
    std::uniform_int_distribution<std::size_t> pick_q(1, std::min<std::size_t>(L, static_cast<std::size_t>(M)));
    const std::size_t Q = pick_q(rng);
    const FilterBankSpec fb = random_bank(rng, M, L, 4);
    const InputPSD sx = random_psd(rng, 3);
    const auto rows = random_selection(rng, L, Q);
    const auto cols = random_selection(rng, L, Q);
    const auto alias_sum = theorem1_det(fb, sx, rows, cols, {.inject_twiddle_fault = inject_fault});
    const auto direct = submatrix_det_bruteforce(fb, sx, rows, cols);
    double worst = 0.0;
    for (std::size_t k = 0; k < points_per_case; ++k) {
      const cd z = random_unit(rng);
      const cd expected = direct(z);
      worst = std::max(worst, std::abs(alias_sum(z) - expected) / (1.0 + std::abs(expected)));
    }
    record(r, worst);
  }
  return r;
}

PropertyResult branch_independence(std::mt19937_64& rng, std::size_t n_cases) {
  PropertyResult r{"branch_independence", 0, 0, 0.0, 1e-9};
  std::uniform_int_distribution<int> pick_m(2, 4);
  for (std::size_t c = 0; c < n_cases; ++c) {
    const int M = pick_m(rng);
    const auto L = static_cast<std::size_t>(M);
    const FilterBankSpec fb = random_full_rank_bank(rng, M, L, 3);
    const InputPSD sx = random_psd(rng, 2);
    std::uniform_int_distribution<std::size_t> pick_q(1, L);
    const std::size_t Q = pick_q(rng);
    const auto det = theorem1_det(fb, sx, random_selection(rng, L, Q), random_selection(rng, L, Q));
    std::uniform_int_distribution<std::size_t> pick_i(0, L - 1);
    const std::size_t i = pick_i(rng), j = pick_i(rng);
    const cd z = random_unit(rng);
    const cd d0 = det.evaluate(z, 0);
    const cd a0 = closed_form_eval(fb, i, j, fb.delay(), z, 0);
    double worst = 0.0;
    for (int b = 1; b < M; ++b) {
      worst = std::max(worst, std::abs(det.evaluate(z, b) - d0) / std::max(1.0, std::abs(d0)));
      worst = std::max(worst, std::abs(closed_form_eval(fb, i, j, fb.delay(), z, b) - a0) / std::max(1.0, std::abs(a0)));
    }
    record(r, worst);
  }
  return r;
}

PropertyResult psd_independence(std::mt19937_64& rng, std::size_t n_cases) {
  PropertyResult r{"psd_independence", 0, 0, 0.0, RationalTF::kEqualityTolerance};
  std::uniform_int_distribution<int> pick_m(2, 4);
  for (std::size_t c = 0; c < n_cases; ++c) {
    const int M = pick_m(rng);
    const FilterBankSpec fb = random_full_rank_bank(rng, M, static_cast<std::size_t>(M), 3);
    const LaurentPoly g = random_filter(rng, 3);
    const WienerSolution white = wiener_solve(fb, InputPSD::white());
    const WienerSolution shaped = wiener_solve(fb, InputPSD::shaped(g));
    record(r, max_cross_residual(white.A, shaped.A));
  }
  return r;
}

PropertyResult wiener_identity(std::mt19937_64& rng, std::size_t n_cases) {
  PropertyResult r{"wiener_identity", 0, 0, 0.0, 1e-9};
  std::uniform_int_distribution<int> pick_m(2, 4);
  std::uniform_int_distribution<int> pick_d(0, 2);
  for (std::size_t c = 0; c < n_cases; ++c) {
    const int M = pick_m(rng);
    std::uniform_int_distribution<std::size_t> pick_l(1, static_cast<std::size_t>(M));
    const FilterBankSpec fb = random_full_rank_bank(rng, M, pick_l(rng), 3, pick_d(rng));
    const InputPSD sx = random_psd(rng, 2);
    const WienerSolution ws = wiener_solve(fb, sx);
    record(r, wiener_identity_residual(ws, fb, sx));
  }
  return r;
}

PropertyResult closed_form_consistency(std::mt19937_64& rng, std::size_t n_cases) {
  PropertyResult r{"closed_form_consistency", 0, 0, 0.0, 1e-8};
  std::uniform_int_distribution<int> pick_m(1, 4);
  std::uniform_int_distribution<int> pick_d(0, 2);
  for (std::size_t c = 0; c < n_cases; ++c) {
    const int M = pick_m(rng);
    const FilterBankSpec fb = random_full_rank_bank(rng, M, static_cast<std::size_t>(M), 3, pick_d(rng));
    const WienerSolution ws = wiener_solve(fb, InputPSD::white());
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const cd z = random_unit(rng);
      const Eigen::MatrixXcd a = ws.A.evaluate(z);
      for (std::size_t i = 0; i < static_cast<std::size_t>(M); ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(M); ++j) {
          const cd expected = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          const cd got = closed_form_eval(fb, i, j, fb.delay(), z);
          worst = std::max(worst, std::abs(got - expected) / std::max(1.0, std::abs(expected)));
        }
    }
    record(r, worst);
  }
  return r;
}

std::vector<PropertyResult> run_property_suite(const VerifyOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  const std::size_t scale = opts.quick ? 1 : 5;
  std::vector<PropertyResult> out;
  out.push_back(theorem1_agreement(rng, 100 * scale, 32, opts.inject_fault));
  out.push_back(branch_independence(rng, 40 * scale));
  out.push_back(psd_independence(rng, 10 * scale));
  out.push_back(wiener_identity(rng, 10 * scale));
  out.push_back(closed_form_consistency(rng, 10 * scale));
  return out;
}

}  // namespace ufb::verify
