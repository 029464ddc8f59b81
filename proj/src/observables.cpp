#include "nlslab/observables.hpp"

#include <algorithm>
#include <cmath>

#include "nlslab/cutoff.hpp"
#include "nlslab/error.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {
namespace {

double eps_pow(double eps, const GridSpec& g, double shift) {
  return std::pow(eps, static_cast<double>(g.dim) - shift);
}

// ∂_i u for every axis, from a single forward transform.
std::vector<std::vector<cplx>> gradient_fields(const WaveField& u) {
  const spectral::Fft fft(u.grid);
  std::vector<cplx> uh = u.samples;
  fft.forward(uh);
  std::vector<std::vector<cplx>> grad;
  for (std::size_t d = 0; d < u.grid.dim; ++d) {
    const auto k = spectral::axis_wavenumbers(u.grid, d);
    std::vector<cplx> g(uh.size());
    for (std::size_t i = 0; i < uh.size(); ++i) g[i] = uh[i] * cplx(0.0, k[i]);
    fft.inverse(g);
    grad.push_back(std::move(g));
  }
  return grad;
}

}  // namespace

double h1eps_norm_sq(const WaveField& u, double eps) {
  double grad = 0.0, l2 = 0.0;
  for (const auto& g : gradient_fields(u))
    for (const cplx& z : g) grad += std::norm(z);
  for (const cplx& z : u.samples) l2 += std::norm(z);
  const double vol = u.grid.cell_volume();
  return grad * vol / eps_pow(eps, u.grid, 2.0) + l2 * vol / eps_pow(eps, u.grid, 0.0);
}

Vec momentum(const WaveField& u, double eps) {
  const auto grad = gradient_fields(u);
  Vec p(u.grid.dim);
  const double scale = u.grid.cell_volume() / eps_pow(eps, u.grid, 1.0);
  for (std::size_t d = 0; d < u.grid.dim; ++d) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.samples.size(); ++i) s += (std::conj(u.samples[i]) * grad[d][i]).imag();
    p[d] = s * scale;
  }
  return p;
}

DiagnosticsContext make_diagnostics_context(const GridSpec& grid, double eps, double p, double mass,
                                            double ground_energy, const PotentialModel& model, double chi_radius,
                                            double vacuum_floor) {
  if (!(chi_radius > 0.0)) throw ConfigError("cutoff radius M must be positive");
  DiagnosticsContext ctx;
  ctx.grid = grid;
  ctx.eps = eps;
  ctx.p = p;
  ctx.mass = mass;
  ctx.ground_energy = ground_energy;
  ctx.model = model;
  ctx.vacuum_floor = vacuum_floor;
  ctx.chi_radius = chi_radius;
  ctx.potential = sample_on_grid(model, grid);
  ctx.rho_outer = std::pow(eps, 4.0 / (2.0 - model.beta));
  ctx.cutoff_degenerate = ctx.rho_outer < grid.spacing();

  const std::size_t n = grid.size();
  ctx.grad_v.assign(grid.dim, std::vector<double>(n, 0.0));
  ctx.chi_eps.resize(n);
  ctx.chi.resize(n);
  for_each_point(grid, [&](std::size_t i, const Vec& x) {
    const double r = x.norm();
    ctx.chi_eps[i] = ctx.cutoff_degenerate ? 1.0 : radial_hole(r, 0.5 * ctx.rho_outer, ctx.rho_outer);
    ctx.chi[i] = radial_bump(r, chi_radius, 2.0 * chi_radius);
    const bool capped = model.singular() && r < ctx.potential.cap_radius;
    if (!capped) {
      const Vec g = gradient(model, x);
      for (std::size_t d = 0; d < grid.dim; ++d) ctx.grad_v[d][i] = g[d];
    }
  });
  return ctx;
}

EnergySplit energy_split(const WaveField& u, const DiagnosticsContext& ctx) {
  const auto grad = gradient_fields(u);
  double peak = 0.0;
  for (const cplx& z : u.samples) peak = std::max(peak, std::norm(z));
  const double floor = ctx.vacuum_floor * peak;

  double grad_sq = 0.0, phase_sq = 0.0, vacuum_grad = 0.0, nonlinear = 0.0, potential = 0.0;
  for (std::size_t i = 0; i < u.samples.size(); ++i) {
    const cplx z = u.samples[i];
    const double density = std::norm(z);
    double g2 = 0.0, current2 = 0.0;
    for (std::size_t d = 0; d < u.grid.dim; ++d) {
      g2 += std::norm(grad[d][i]);
      const double j = (std::conj(z) * grad[d][i]).imag();
      current2 += j * j;
    }
    grad_sq += g2;
    if (density >= floor && density > 0.0) phase_sq += current2 / density;
    else vacuum_grad += g2;
    nonlinear += std::pow(density, ctx.p + 1.0);
    potential += ctx.potential.values[i] * density;
  }
  const double vol = u.grid.cell_volume();
  const double grad_w = 0.5 * vol / eps_pow(ctx.eps, u.grid, 2.0);
  const double mass_w = vol / eps_pow(ctx.eps, u.grid, 0.0);

  EnergySplit s;
  const double nonlinear_term = nonlinear * mass_w / (ctx.p + 1.0);
  s.total = grad_w * grad_sq - nonlinear_term + mass_w * potential;
  s.internal = grad_w * (grad_sq - phase_sq) - nonlinear_term;
  s.kinetic = s.total - s.internal;
  s.vacuum_gradient_share = grad_sq > 0.0 ? vacuum_grad / grad_sq : 0.0;
  s.unreliable = s.vacuum_gradient_share > 0.5;
  double field_mass = 0.0;
  for (const cplx& z : u.samples) field_mass += std::norm(z);
  field_mass *= mass_w;
  s.kinetic_bound_ok = s.kinetic >= field_mass * ctx.model.v0 - 1e-8;
  return s;
}

Vec centroid(const WaveField& u, const DiagnosticsContext& ctx) {
  Vec c(u.grid.dim);
  for_each_point(u.grid, [&](std::size_t i, const Vec& x) { c += (ctx.chi[i] * std::norm(u.samples[i])) * x; });
  return c * (u.grid.cell_volume() / eps_pow(ctx.eps, u.grid, 0.0) / ctx.mass);
}

Vec potential_force(const WaveField& u, const DiagnosticsContext& ctx) {
  Vec f(u.grid.dim);
  const double w = -u.grid.cell_volume() / eps_pow(ctx.eps, u.grid, 0.0);
  for (std::size_t d = 0; d < u.grid.dim; ++d) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.samples.size(); ++i) s += std::norm(u.samples[i]) * ctx.grad_v[d][i];
    f[d] = w * s;
  }
  return f;
}

EtaValues eta_diagnostics(const WaveField& u, const DiagnosticsContext& ctx, const PhasePoint& classical) {
  EtaValues eta;
  eta.eta1 = ctx.mass * classical.xi - momentum(u, ctx.eps);

  const double w = u.grid.cell_volume() / eps_pow(ctx.eps, u.grid, 0.0);
  double pot = 0.0, pot_cut = 0.0;
  Vec first(u.grid.dim);
  for_each_point(u.grid, [&](std::size_t i, const Vec& x) {
    const double density = std::norm(u.samples[i]);
    pot += ctx.potential.values[i] * density;
    pot_cut += ctx.potential.values[i] * ctx.chi_eps[i] * density;
    first += (ctx.chi[i] * density) * x;
  });
  const double v_classical = evaluate(ctx.model, classical.x);
  eta.eta2 = ctx.mass * v_classical - w * pot;
  eta.eta2_tilde = ctx.mass * v_classical - w * pot_cut;
  eta.cutoff_degenerate = ctx.cutoff_degenerate;
  eta.eta3 = w * first - ctx.mass * classical.x;
  return eta;
}

ObservableRow observe(const WaveField& u, double t, const DiagnosticsContext& ctx, const PhasePoint& classical,
                      EnergySplit* split_out) {
  ObservableRow row;
  row.t = t;
  row.mass = 0.0;
  for (const cplx& z : u.samples) row.mass += std::norm(z);
  row.mass *= u.grid.cell_volume() / eps_pow(ctx.eps, u.grid, 0.0);
  row.momentum = momentum(u, ctx.eps);
  const EnergySplit split = energy_split(u, ctx);
  if (split_out) *split_out = split;
  row.energy_total = split.total;
  row.energy_internal = split.internal;
  row.energy_kinetic = split.kinetic;
  row.h1eps = h1eps_norm_sq(u, ctx.eps);
  const EtaValues eta = eta_diagnostics(u, ctx, classical);
  row.eta1 = eta.eta1;
  row.eta2 = eta.eta2;
  row.eta2_tilde = eta.eta2_tilde;
  row.eta3 = eta.eta3;
  row.eta_total = eta.eta1.norm() + std::abs(eta.eta2) + eta.eta3.norm();
  const double h = 0.5 * classical.xi.norm2() + evaluate(ctx.model, classical.x);
  row.split_residual = std::abs(split.total - ctx.ground_energy - ctx.mass * h);
  row.fit_center = Vec(u.grid.dim);
  return row;
}

std::optional<double> stopping_time(std::span<const ObservableRow> rows, std::span<const double> speeds, double mu) {
  if (speeds.size() != rows.size()) throw DomainError("stopping_time: one speed per row required");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double drive = speeds[k] * rows[k].eta1.norm() + std::abs(rows[k].eta2);
    if (drive > mu || rows[k].shift_w > 1.0) return rows[k].t;
  }
  return std::nullopt;
}

}  // namespace nlslab
