#include "nlslab/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "nlslab/error.hpp"

namespace nlslab {

void GridSpec::validate() const {
  if (dim < 1 || dim > kMaxDim)
    throw ConfigError("grid.dim must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
  if (points < 4 || !std::has_single_bit(points))
    throw ConfigError("grid.points must be a power of two >= 4 (got " + std::to_string(points) + ")");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ConfigError("grid.half_width must be positive and finite");
}

std::size_t GridSpec::size() const noexcept {
  std::size_t n = 1;
  for (std::size_t d = 0; d < dim; ++d) n *= points;
  return n;
}

double GridSpec::cell_volume() const noexcept { return std::pow(spacing(), static_cast<double>(dim)); }

double GridSpec::wavenumber(std::size_t index) const noexcept {
  const double dk = std::numbers::pi / half_width;
  const auto n = static_cast<long>(points);
  auto j = static_cast<long>(index);
  if (j >= n / 2) j -= n;
  return dk * static_cast<double>(j);
}

Vec GridSpec::position(std::size_t flat) const noexcept {
  Vec x(dim);
  for (std::size_t d = dim; d-- > 0;) {
    x[d] = coordinate(flat % points);
    flat /= points;
  }
  return x;
}

std::uint64_t GridSpec::hash() const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  std::uint64_t hw = 0;
  std::memcpy(&hw, &half_width, sizeof hw);
  mix(dim);
  mix(points);
  mix(hw);
  return h;
}

WaveField::WaveField(const GridSpec& g, std::vector<cplx> s) : grid(g), samples(std::move(s)) {
  if (samples.size() != grid.size())
    throw ConfigError("WaveField: sample count " + std::to_string(samples.size()) +
                      " does not match grid size " + std::to_string(grid.size()));
}

bool WaveField::all_finite() const noexcept {
  for (const cplx& z : samples)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace nlslab
