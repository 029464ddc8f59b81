#pragma once

#include <array>
#include <span>
#include <vector>

#include "nlslab/grid.hpp"

namespace nlslab::spectral {

/// In-place N-dimensional complex FFT on a GridSpec. Plans are created once
/// per shape (FFTW_ESTIMATE, so planning is deterministic) and shared; the
/// execute calls are safe to issue from several threads.
class Fft {
public:
  explicit Fft(const GridSpec& grid);

  /// Unnormalized forward transform.
  void forward(std::span<cplx> data) const;
  /// Inverse transform including the 1/size normalization.
  void inverse(std::span<cplx> data) const;

  const GridSpec& grid() const noexcept { return grid_; }

private:
  GridSpec grid_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// |k|^2 for every Fourier bin, in FFT order.
std::vector<double> wavenumber_squared(const GridSpec& grid);

/// Per-axis wavenumber of every bin, Nyquist bin zeroed (odd derivatives).
std::vector<double> axis_wavenumbers(const GridSpec& grid, std::size_t axis);

/// Spectral partial derivative along `axis`.
std::vector<cplx> derivative(const Fft& fft, std::span<const cplx> f, std::size_t axis);

/// Spectral Laplacian.
std::vector<cplx> laplacian(const Fft& fft, std::span<const cplx> f);

/// Samples of x -> f(x - shift) by Fourier interpolation (periodic).
std::vector<cplx> shifted(const Fft& fft, std::span<const cplx> f, const Vec& shift);

/// Multiplies an already transformed array by the phase of a shift.
void apply_shift_phase(const GridSpec& grid, std::span<cplx> fhat, const Vec& shift);

/// Samples of x -> f(-x) (exact index reflection about the origin node).
std::vector<cplx> reflected(const GridSpec& grid, std::span<const cplx> f);

/// Rectangle-rule integral of a real integrand.
double integrate(const GridSpec& grid, std::span<const double> values);

/// ∫|f|^2 and ∫|∇f|^2 computed from the forward transform by Parseval.
struct SobolevParts {
  double l2 = 0.0;
  double grad = 0.0;
};
SobolevParts sobolev_parts(const GridSpec& grid, std::span<const cplx> fhat,
                           std::span<const double> k2);

}  // namespace nlslab::spectral
