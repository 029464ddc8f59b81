#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nlslab/vec.hpp"

namespace nlslab {

using cplx = std::complex<double>;

/// Periodic box [-L, L)^N sampled with the same power-of-two number of points
/// along every axis. Samples are stored row-major, last axis fastest.
struct GridSpec {
  std::size_t dim = 1;
  std::size_t points = 256;
  double half_width = 1.0;

  /// Throws ConfigError unless 1 <= dim <= 3, points is a power of two >= 4
  /// and half_width > 0.
  void validate() const;

  std::size_t size() const noexcept;
  double spacing() const noexcept { return 2.0 * half_width / static_cast<double>(points); }
  double cell_volume() const noexcept;
  double coordinate(std::size_t index) const noexcept {
    return -half_width + static_cast<double>(index) * spacing();
  }
  /// Angular wavenumber of FFT bin `index` along one axis.
  double wavenumber(std::size_t index) const noexcept;
  /// Position of the flat sample index.
  Vec position(std::size_t flat) const noexcept;

  /// Same sampling, box scaled by `factor` (the unit-scale grid of a
  /// semiclassical run is `scaled(1/eps)`).
  GridSpec scaled(double factor) const noexcept {
    return GridSpec{dim, points, half_width * factor};
  }

  /// Stable 64-bit fingerprint of (dim, points, half_width bits).
  std::uint64_t hash() const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Complex samples of a wavefunction on a GridSpec.
struct WaveField {
  GridSpec grid;
  std::vector<cplx> samples;

  WaveField() = default;
  explicit WaveField(const GridSpec& g) : grid(g), samples(g.size(), cplx{}) {}
  WaveField(const GridSpec& g, std::vector<cplx> s);

  bool all_finite() const noexcept;
};

/// Calls f(flat_index, position) for every grid point.
template <class F>
void for_each_point(const GridSpec& g, F&& f) {
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) f(i, g.position(i));
}

}  // namespace nlslab
