#include "nlslab/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>
#include <string>

#include "nlslab/error.hpp"
#include "nlslab/snapshot.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {
namespace {

double l2_mass(const GridSpec& g, std::span<const double> u) {
  double s = 0.0;
  for (double v : u) s += v * v;
  return s * g.cell_volume();
}

// Real-valued Laplacian via the complex transform.
std::vector<double> real_laplacian(const spectral::Fft& fft, std::span<const double> k2, std::span<const double> u,
                                   std::vector<cplx>& work) {
  work.assign(u.begin(), u.end());
  fft.forward(work);
  for (std::size_t i = 0; i < work.size(); ++i) work[i] *= -k2[i];
  fft.inverse(work);
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = work[i].real();
  return out;
}

double energy_of(const GridSpec& g, std::span<const double> u, std::span<const double> lap, double p) {
  double kin = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    kin -= u[i] * lap[i];
    pot += std::pow(std::abs(u[i]), 2.0 * p + 2.0);
  }
  return (0.5 * kin - pot / (p + 1.0)) * g.cell_volume();
}

void check_preconditions(const GridSpec& grid, double p) {
  grid.validate();
  const double p_max = 2.0 / static_cast<double>(grid.dim);
  if (!(p > 0.0 && p < p_max))
    throw DomainError("nonlinearity exponent p = " + std::to_string(p) + " outside (0, 2/N)");
  if (grid.spacing() > 0.1 + 1e-12)
    throw DomainError("ground-state grid spacing " + std::to_string(grid.spacing()) + " exceeds 0.1");
}

}  // namespace

double ground_energy(const WaveField& v, double p) {
  const spectral::Fft fft(v.grid);
  std::vector<cplx> vh = v.samples;
  fft.forward(vh);
  const auto parts = spectral::sobolev_parts(v.grid, vh, spectral::wavenumber_squared(v.grid));
  double pot = 0.0;
  for (const cplx& z : v.samples) pot += std::pow(std::norm(z), p + 1.0);
  return 0.5 * parts.grad - pot * v.grid.cell_volume() / (p + 1.0);
}

double euler_lagrange_residual(const WaveField& r, double p) {
  const spectral::Fft fft(r.grid);
  const auto lap = spectral::laplacian(fft, r.samples);
  double worst = 0.0;
  for (std::size_t i = 0; i < lap.size(); ++i) {
    const cplx z = r.samples[i];
    const cplx res = -0.5 * lap[i] + z - std::pow(std::norm(z), p) * z;
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

GroundStateSolution solve_ground_state(const GridSpec& grid, double p, double tol, int max_iter) {
  GroundStateOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return solve_ground_state(grid, p, opts);
}

GroundStateSolution solve_ground_state(const GridSpec& grid, double p, const GroundStateOptions& opts) {
  check_preconditions(grid, p);
  const spectral::Fft fft(grid);
  const auto k2 = spectral::wavenumber_squared(grid);
  const std::size_t n = grid.size();
  const double nd = static_cast<double>(grid.dim);

  // Unit-width Gaussian centered on the grid.
  std::vector<double> u(n);
  for_each_point(grid, [&](std::size_t i, const Vec& x) { u[i] = std::exp(-x.norm2()); });
  double target_mass = l2_mass(grid, u) * std::pow(p + 1.0, 1.0 / p);

  std::vector<cplx> work;
  std::vector<double> grad(n);
  GroundStateSolution sol;
  double last_residual = HUGE_VAL;
  int iter = 0;

  auto renormalize = [&](double mass) {
    const double s = std::sqrt(mass / l2_mass(grid, u));
    for (double& v : u) v *= s;
  };
  renormalize(target_mass);

  // Outer loop: fixed-mass constrained descent, then rescale the mass with
  // the exact scaling law m(λ) = λ^(1/p - N/2) m(1) so that the multiplier
  // λ = -μ approaches 1.
  bool converged = false;
  while (!converged) {
    sol.energy_history.clear();
    double mu = 0.0;
    for (;;) {
      if (iter >= opts.max_iter)
        throw ConvergenceError("ground state: no convergence after " + std::to_string(opts.max_iter) +
                                   " iterations (last residual " + std::to_string(last_residual) + ")",
                               last_residual);
      const auto lap = real_laplacian(fft, k2, u, work);
      sol.energy_history.push_back(energy_of(grid, u, lap, p));
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        grad[i] = -0.5 * lap[i] - std::pow(std::abs(u[i]), 2.0 * p) * u[i];
        num += u[i] * grad[i];
        den += u[i] * u[i];
      }
      mu = num / den;
      double phase_residual = 0.0, full_residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        grad[i] -= mu * u[i];
        phase_residual = std::max(phase_residual, std::abs(grad[i]));
        // -½Δu + u - u^(2p+1) = (grad + μu) + u
        full_residual = std::max(full_residual, std::abs(grad[i] + (mu + 1.0) * u[i]));
      }
      last_residual = full_residual;
      if (full_residual <= opts.tol) {
        sol.iterations = iter;
        converged = true;
        break;
      }
      double peak = 0.0;
      for (double v : u) peak = std::max(peak, std::abs(v));
      if (phase_residual <= std::max(0.05 * opts.tol, 1e-3 * std::abs(mu + 1.0) * peak)) break;

      // Preconditioned projected gradient step, then back onto the sphere.
      work.assign(grad.begin(), grad.end());
      fft.forward(work);
      const double shift = std::max(1.0, -mu);
      for (std::size_t i = 0; i < n; ++i) work[i] /= (shift + 0.5 * k2[i]);
      fft.inverse(work);
      for (std::size_t i = 0; i < n; ++i) u[i] -= opts.step * work[i].real();
      renormalize(target_mass);
      const double drift = std::abs(l2_mass(grid, u) / target_mass - 1.0);
      sol.max_mass_drift = std::max(sol.max_mass_drift, drift);
      ++iter;
    }
    if (converged) break;
    const double lambda = -mu;
    if (!(lambda > 0.0)) throw ConvergenceError("ground state: non-positive multiplier", last_residual);
    target_mass *= std::pow(lambda, -(1.0 / p - 0.5 * nd));
    for (double& v : u) v *= std::pow(lambda, -0.5 / p);
    renormalize(target_mass);
  }

  std::vector<cplx> samples(u.begin(), u.end());
  auto history = std::move(sol.energy_history);
  const int iterations = sol.iterations;
  const double drift = sol.max_mass_drift;
  sol = ground_state_from_field(WaveField(grid, std::move(samples)), p);
  sol.energy_history = std::move(history);
  sol.iterations = iterations;
  sol.max_mass_drift = drift;
  return sol;
}

GroundStateSolution ground_state_from_field(WaveField field, double p) {
  GroundStateSolution sol;
  sol.p = p;
  sol.field = std::move(field);
  const GridSpec& g = sol.field.grid;
  double mass = 0.0;
  for (const cplx& z : sol.field.samples) mass += std::norm(z);
  sol.mass = mass * g.cell_volume();
  sol.residual_inf = euler_lagrange_residual(sol.field, p);
  sol.energy = ground_energy(sol.field, p);
  const spectral::Fft fft(g);
  std::vector<cplx> h = sol.field.samples;
  fft.forward(h);
  sol.gradient_sq = spectral::sobolev_parts(g, h, spectral::wavenumber_squared(g)).grad;
  // Default tail window [3, 6] when the box leaves room for it.
  try {
    sol.decay_rate = fit_decay_rate(sol, 3.0, std::min(6.0, 0.5 * g.half_width));
  } catch (const DomainError&) {
    sol.decay_rate = 0.0;
  }
  return sol;
}

double fit_decay_rate(const GroundStateSolution& sol, double lo, double hi) {
  const GridSpec& g = sol.grid();
  if (!(lo >= 0.0 && hi > lo)) throw DomainError("decay window must satisfy 0 <= lo < hi");
  if (hi >= g.half_width) throw DomainError("decay window exceeds the box half-width");
  const std::size_t n = g.points;
  std::size_t center = 0;
  for (std::size_t d = 0; d < g.dim; ++d) center = center * n + n / 2;
  std::size_t stride = 1;  // first axis is the slowest
  for (std::size_t d = 1; d < g.dim; ++d) stride *= n;
  const double half_sph = 0.5 * (static_cast<double>(g.dim) - 1.0);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t j = n / 2; j < n; ++j) {
    const double r = g.coordinate(j);
    if (r < lo || r > hi) continue;
    const double value = std::abs(sol.field.samples[center + (j - n / 2) * stride]);
    if (value < 1e-300) throw DomainError("decay window contains samples below the underflow floor");
    const double y = -std::log(value * std::pow(r, half_sph));
    sx += r;
    sy += y;
    sxx += r * r;
    sxy += r * y;
    ++count;
  }
  if (count < 3) throw DomainError("decay window contains fewer than 3 samples");
  const double c = static_cast<double>(count);
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

GroundStateSolution cached_ground_state(const std::filesystem::path& dir, const GridSpec& grid, double p, double tol,
                                        int max_iter) {
  char name[128];
  std::snprintf(name, sizeof name, "groundstate_N%zu_p%.17g_%016llx.nlsf", grid.dim, p,
                static_cast<unsigned long long>(grid.hash()));
  const auto path = dir / name;
  if (std::filesystem::exists(path)) {
    Snapshot snap = read_snapshot(path);
    if (snap.field.grid == grid) {
      auto sol = ground_state_from_field(std::move(snap.field), p);
      if (sol.residual_inf <= tol) return sol;
    }
  }
  auto sol = solve_ground_state(grid, p, tol, max_iter);
  std::filesystem::create_directories(dir);
  // Temporary name per thread, then rename: concurrent sweeps never see a partial file.
  auto tmp = path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  write_snapshot(tmp, Snapshot{sol.field, 1.0, 0.0});
  std::filesystem::rename(tmp, path);
  return sol;
}

}  // namespace nlslab
