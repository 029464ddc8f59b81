#include "nlslab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "nlslab/error.hpp"

namespace nlslab::spectral {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans live for the whole process.
PlanPair plans_for(std::size_t dim, std::size_t points) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({dim, points});
  if (it != cache.end()) return it->second;

  int dims[kMaxDim];
  std::size_t total = 1;
  for (std::size_t d = 0; d < dim; ++d) {
    dims[d] = static_cast<int>(points);
    total *= points;
  }
  auto* scratch = fftw_alloc_complex(total);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft(static_cast<int>(dim), dims, scratch, scratch, FFTW_FORWARD, flags),
             fftw_plan_dft(static_cast<int>(dim), dims, scratch, scratch, FFTW_BACKWARD, flags)};
  fftw_free(scratch);
  if (p.forward == nullptr || p.backward == nullptr) throw NumericalError("FFTW planning failed");
  cache.emplace(std::make_pair(dim, points), p);
  return p;
}

fftw_complex* as_fftw(std::span<cplx> data) { return reinterpret_cast<fftw_complex*>(data.data()); }

}  // namespace

Fft::Fft(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  const PlanPair p = plans_for(grid.dim, grid.points);
  forward_plan_ = p.forward;
  backward_plan_ = p.backward;
}

void Fft::forward(std::span<cplx> data) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data), as_fftw(data));
}

void Fft::inverse(std::span<cplx> data) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data), as_fftw(data));
  const double scale = 1.0 / static_cast<double>(data.size());
  for (cplx& z : data) z *= scale;
}

std::vector<double> wavenumber_squared(const GridSpec& grid) {
  std::vector<double> k2(grid.size(), 0.0);
  const std::size_t n = grid.points;
  for (std::size_t i = 0; i < k2.size(); ++i) {
    std::size_t rest = i;
    double s = 0.0;
    for (std::size_t d = 0; d < grid.dim; ++d) {
      const double k = grid.wavenumber(rest % n);
      s += k * k;
      rest /= n;
    }
    k2[i] = s;
  }
  return k2;
}

std::vector<double> axis_wavenumbers(const GridSpec& grid, std::size_t axis) {
  std::vector<double> k(grid.size(), 0.0);
  const std::size_t n = grid.points;
  std::size_t stride = 1;
  for (std::size_t d = axis + 1; d < grid.dim; ++d) stride *= n;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const std::size_t j = (i / stride) % n;
    k[i] = (j == n / 2) ? 0.0 : grid.wavenumber(j);
  }
  return k;
}

std::vector<cplx> derivative(const Fft& fft, std::span<const cplx> f, std::size_t axis) {
  std::vector<cplx> out(f.begin(), f.end());
  fft.forward(out);
  const auto k = axis_wavenumbers(fft.grid(), axis);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= cplx(0.0, k[i]);
  fft.inverse(out);
  return out;
}

std::vector<cplx> laplacian(const Fft& fft, std::span<const cplx> f) {
  std::vector<cplx> out(f.begin(), f.end());
  fft.forward(out);
  const auto k2 = wavenumber_squared(fft.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= -k2[i];
  fft.inverse(out);
  return out;
}

void apply_shift_phase(const GridSpec& grid, std::span<cplx> fhat, const Vec& shift) {
  const std::size_t n = grid.points;
  // The phase factorizes over axes; tabulate each axis once.
  std::vector<std::vector<cplx>> axis_phase(grid.dim, std::vector<cplx>(n));
  for (std::size_t d = 0; d < grid.dim; ++d)
    for (std::size_t j = 0; j < n; ++j) axis_phase[d][j] = std::polar(1.0, -grid.wavenumber(j) * shift[d]);
  for (std::size_t i = 0; i < fhat.size(); ++i) {
    std::size_t rest = i;
    cplx ph = 1.0;
    for (std::size_t d = grid.dim; d-- > 0;) {
      ph *= axis_phase[d][rest % n];
      rest /= n;
    }
    fhat[i] *= ph;
  }
}

std::vector<cplx> shifted(const Fft& fft, std::span<const cplx> f, const Vec& shift) {
  std::vector<cplx> out(f.begin(), f.end());
  fft.forward(out);
  apply_shift_phase(fft.grid(), out, shift);
  fft.inverse(out);
  return out;
}

std::vector<cplx> reflected(const GridSpec& grid, std::span<const cplx> f) {
  std::vector<cplx> out(f.size());
  const std::size_t n = grid.points;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::size_t rest = i, target = 0, scale = 1;
    for (std::size_t d = 0; d < grid.dim; ++d) {
      const std::size_t j = rest % n;
      target += ((n - j) % n) * scale;
      rest /= n;
      scale *= n;
    }
    out[target] = f[i];
  }
  return out;
}

double integrate(const GridSpec& grid, std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_volume();
}

SobolevParts sobolev_parts(const GridSpec& grid, std::span<const cplx> fhat, std::span<const double> k2) {
  double l2 = 0.0, grad = 0.0;
  for (std::size_t i = 0; i < fhat.size(); ++i) {
    const double a = std::norm(fhat[i]);
    l2 += a;
    grad += k2[i] * a;
  }
  const double w = grid.cell_volume() / static_cast<double>(fhat.size());
  return {l2 * w, grad * w};
}

}  // namespace nlslab::spectral
