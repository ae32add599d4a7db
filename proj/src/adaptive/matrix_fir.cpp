#include "ufb/matrix_fir.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ufb/errors.hpp"
#include "ufb/kernels.hpp"

namespace ufb {

double TapTable::norm() const noexcept { return std::sqrt(kernels::norm2(data_)); }

double tap_distance(const TapTable& a, const TapTable& b) {
  if (a.outputs() != b.outputs() || a.inputs() != b.inputs() || a.tap_len() != b.tap_len())
    throw DimensionError("tap_distance: table shapes differ");
  double s = 0.0;
  for (std::size_t k = 0; k < a.raw().size(); ++k) s += std::norm(a.raw()[k] - b.raw()[k]);
  return std::sqrt(s);
}

MatrixFir::MatrixFir(TapTable taps) : taps_(std::move(taps)), lines_(taps_.inputs() * taps_.tap_len()) {
  if (taps_.tap_len() == 0) throw std::invalid_argument("MatrixFir: tap length must be >= 1");
}

std::vector<cd> MatrixFir::filter_block(std::span<const cd> v) {
  std::vector<cd> y(outputs());
  filter_block(v, y);
  return y;
}

void MatrixFir::filter_block(std::span<const cd> v, std::span<cd> y) {
  if (v.size() != inputs() || y.size() != outputs())
    throw DimensionError(fmt::format("MatrixFir: got input {} / output {}, expected {} / {}", v.size(), y.size(),
                                     inputs(), outputs()));
  const std::size_t T = tap_len();
  for (std::size_t q = 0; q < inputs(); ++q) {
    auto line = lines_.begin() + static_cast<std::ptrdiff_t>(q * T);
    std::shift_right(line, line + static_cast<std::ptrdiff_t>(T), 1);
    *line = v[q];
  }
  for (std::size_t p = 0; p < outputs(); ++p) {
    cd acc = 0.0;
    for (std::size_t q = 0; q < inputs(); ++q) acc += kernels::dot(taps_.tap(p, q), history(q));
    y[p] = acc;
  }
}

void MatrixFir::reset() { std::fill(lines_.begin(), lines_.end(), cd(0.0)); }

}  // namespace ufb
