#include "ufb/laurent.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "ufb/errors.hpp"
#include "ufb/kernels.hpp"

namespace ufb {

LaurentPoly::LaurentPoly(int lowest_power, std::vector<cd> coeffs)
    : lowest_(lowest_power), coeffs_(std::move(coeffs)) {
  normalize();
}

LaurentPoly LaurentPoly::constant(cd c) { return LaurentPoly(0, {c}); }

LaurentPoly LaurentPoly::monomial(int power, cd c) { return LaurentPoly(power, {c}); }

LaurentPoly LaurentPoly::from_taps(std::span<const double> taps) {
  std::vector<cd> c(taps.rbegin(), taps.rend());
  return LaurentPoly(-static_cast<int>(taps.size()) + 1, std::move(c));
}

LaurentPoly LaurentPoly::from_taps(std::span<const cd> taps) {
  std::vector<cd> c(taps.rbegin(), taps.rend());
  return LaurentPoly(-static_cast<int>(taps.size()) + 1, std::move(c));
}

void LaurentPoly::normalize() {
  const double threshold = std::max(kRelativeTrim * max_abs(), kAbsoluteTrim);
  auto keep = [threshold](const cd& c) { return std::abs(c) >= threshold; };
  const auto first = std::find_if(coeffs_.begin(), coeffs_.end(), keep);
  if (first == coeffs_.end()) {
    coeffs_.clear();
    lowest_ = 0;
    return;
  }
  const auto last = std::find_if(coeffs_.rbegin(), coeffs_.rend(), keep).base();
  lowest_ += static_cast<int>(first - coeffs_.begin());
  coeffs_.erase(last, coeffs_.end());
  coeffs_.erase(coeffs_.begin(), first);
}

bool LaurentPoly::is_real() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const cd& c) { return c.imag() == 0.0; });
}

cd LaurentPoly::coeff(int power) const noexcept {
  const long idx = static_cast<long>(power) - lowest_;
  if (idx < 0 || idx >= static_cast<long>(coeffs_.size())) return 0.0;
  return coeffs_[static_cast<std::size_t>(idx)];
}

cd LaurentPoly::operator()(cd z) const {
  if (coeffs_.empty()) return 0.0;
  // Horner in z over the stored block, then the z^lowest factor.
  cd acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  if (lowest_ == 0) return acc;
  return acc * std::pow(z, lowest_);
}

double LaurentPoly::norm() const noexcept {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

double LaurentPoly::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly r = *this;
  if (!r.is_zero()) r.lowest_ += k;
  return r;
}

std::vector<cd> LaurentPoly::taps(std::size_t n) const {
  if (!is_zero() && highest_power() > 0)
    throw NonCausalError("taps(): polynomial has positive powers of z");
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = coeff(-static_cast<int>(k));
  return out;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;
  const int lo = std::min(lowest_, rhs.lowest_);
  const int hi = std::max(highest_power(), rhs.highest_power());
  std::vector<cd> c(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k + (lowest_ - lo)] += coeffs_[k];
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) c[k + (rhs.lowest_ - lo)] += rhs.coeffs_[k];
  lowest_ = lo;
  coeffs_ = std::move(c);
  normalize();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) { return *this += -rhs; }

LaurentPoly& LaurentPoly::operator*=(cd s) {
  for (auto& c : coeffs_) c *= s;
  normalize();
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  std::vector<cd> c(ac.size() + bc.size() - 1);
  for (std::size_t i = 0; i < ac.size(); ++i)
    kernels::axpy(std::span<cd>(c).subspan(i, bc.size()), ac[i], bc);
  return LaurentPoly(a.lowest_power() + b.lowest_power(), std::move(c));
}

std::string LaurentPoly::to_text() const {
  std::string out = std::to_string(lowest_);
  for (const auto& c : coeffs_) out += fmt::format(";{:.17g},{:.17g}", c.real(), c.imag());
  return out;
}

namespace {

double parse_double(std::string_view s) {
  // from_chars for double is available in libstdc++ 11.
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(fmt::format("LaurentPoly text: bad number '{}'", s));
  return v;
}

}  // namespace

LaurentPoly LaurentPoly::from_text(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(';', start);
    fields.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  int lowest = 0;
  {
    const auto f = fields.front();
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), lowest);
    if (ec != std::errc() || ptr != f.data() + f.size())
      throw ConfigError(fmt::format("LaurentPoly text: bad lowest power '{}'", f));
  }
  std::vector<cd> coeffs;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const auto comma = fields[i].find(',');
    if (comma == std::string_view::npos)
      throw ConfigError(fmt::format("LaurentPoly text: coefficient '{}' lacks ','", fields[i]));
    coeffs.emplace_back(parse_double(fields[i].substr(0, comma)),
                        parse_double(fields[i].substr(comma + 1)));
  }
  return LaurentPoly(lowest, std::move(coeffs));
}

std::string LaurentPoly::pretty(int precision) const {
  if (is_zero()) return "0";
  std::string out;
  // Descending powers of z, i.e. ascending powers of z^-1.
  for (int p = highest_power(); p >= lowest_; --p) {
    const cd c = coeff(p);
    if (c == cd(0.0)) continue;
    std::string num;
    if (c.imag() == 0.0) {
      const double v = c.real();
      num = fmt::format("{:.{}g}", std::abs(v), precision);
      out += out.empty() ? (v < 0 ? "-" : "") : (v < 0 ? " - " : " + ");
    } else {
      num = fmt::format("({:.{}g}{:+.{}g}j)", c.real(), precision, c.imag(), precision);
      out += out.empty() ? "" : " + ";
    }
    const bool unit = c.imag() == 0.0 && std::abs(c.real()) == 1.0;
    if (p == 0) {
      out += num;
    } else {
      if (!unit) out += num;
      out += p == 1 ? "z" : fmt::format("z^{}", p);
    }
  }
  return out;
}

LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b) { return a * b; }

LaurentPoly lp_paraconjugate(const LaurentPoly& a) {
  if (a.is_zero()) return {};
  std::vector<cd> c(a.coeffs().rbegin(), a.coeffs().rend());
  for (auto& v : c) v = std::conj(v);
  return LaurentPoly(-a.highest_power(), std::move(c));
}

namespace {

int floor_div(int a, int b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

}  // namespace

LaurentPoly lp_downsample(const LaurentPoly& a, int M) {
  if (M < 1) throw std::invalid_argument("lp_downsample: M must be >= 1");
  if (a.is_zero() || M == 1) return a;
  const int k_lo = -floor_div(-a.lowest_power(), M);  // ceil(lowest / M)
  const int k_hi = floor_div(a.highest_power(), M);
  if (k_hi < k_lo) return {};
  std::vector<cd> c;
  c.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (int k = k_lo; k <= k_hi; ++k) c.push_back(a.coeff(M * k));
  return LaurentPoly(k_lo, std::move(c));
}

double relative_difference(const LaurentPoly& a, const LaurentPoly& b) {
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  // Unnormalized difference so nothing is trimmed away before measuring.
  const int lo = std::min(a.lowest_power(), b.lowest_power());
  const int hi = std::max(a.highest_power(), b.highest_power());
  double s = 0.0;
  for (int p = lo; p <= hi; ++p) s += std::norm(a.coeff(p) - b.coeff(p));
  return std::sqrt(s) / scale;
}

}  // namespace ufb
