#include "nlslab/nls_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlslab/cutoff.hpp"
#include "nlslab/error.hpp"

namespace nlslab {

void SolverConfig::validate() const {
  if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("solver.eps must lie in (0, 1]");
  if (!(p > 0.0)) throw ConfigError("solver.p must be positive");
  if (!(dt > 0.0) || !(T > 0.0)) throw ConfigError("solver.dt and solver.T must be positive");
  if (dt > T) throw ConfigError("solver.dt exceeds solver.T");
  if (snapshot_stride < 1) throw ConfigError("snapshot stride must be >= 1");
}

long SolverConfig::steps() const { return std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-9))); }

double SolverConfig::step_size() const { return T / static_cast<double>(steps()); }

WaveField soliton_ansatz(const GroundStateSolution& R, const Vec& center, const Vec& xi, double phase, double eps) {
  const GridSpec sim = simulation_grid(R.grid(), eps);
  const spectral::Fft fft(sim);
  WaveField out(sim, spectral::shifted(fft, R.field.samples, center));
  for_each_point(sim, [&](std::size_t i, const Vec& x) {
    out.samples[i] *= std::polar(1.0, xi.dot(x) / eps + phase);
  });
  return out;
}

double scaled_mass(const WaveField& u, double eps) {
  double s = 0.0;
  for (const cplx& z : u.samples) s += std::norm(z);
  return s * u.grid.cell_volume() / std::pow(eps, static_cast<double>(u.grid.dim));
}

WaveField build_initial_datum(const GroundStateSolution& R, const PotentialModel& model, const Vec& x0,
                              const Vec& xi0, double eps, std::optional<double> rho) {
  const GridSpec sim = simulation_grid(R.grid(), eps);
  if (x0.size() != sim.dim || xi0.size() != sim.dim) throw ConfigError("initial.x0/xi0 dimension mismatch");
  const double margin = 10.0 * eps;
  for (double c : x0)
    if (std::abs(c) > sim.half_width - margin)
      throw ConfigError("initial.x0 lies within 10 eps of the box boundary");

  WaveField v = soliton_ansatz(R, x0, xi0, 0.0, eps);
  if (rho) {
    const double r = *rho;
    if (!(r > 0.0)) throw ConfigError("(C3) violated: support radius rho must be positive");
    for (double c : x0)
      if (std::abs(c) + r > sim.half_width) throw ConfigError("support ball B(x0, rho) leaves the box");
    const ClosestApproach ca = closest_approach(model, x0, xi0);
    const double limit = x0.norm() - (ca.status == LevelSet::bounded ? ca.radius : 0.0);
    if (model.amplitude != 0.0 && !(r < limit))
      throw ConfigError("(C3) violated: rho = " + std::to_string(r) + " must be below |x0| - delta = " +
                        std::to_string(limit));
    for_each_point(sim, [&](std::size_t i, const Vec& x) {
      v.samples[i] *= radial_bump((x - x0).norm(), 0.5 * r, r);
    });
  }
  const double s = std::sqrt(R.mass / scaled_mass(v, eps));
  for (cplx& z : v.samples) z *= s;
  return v;
}

StrangStepper::StrangStepper(const GridSpec& grid, const PotentialModel& model, const SolverConfig& cfg)
    : grid_(grid), cfg_(cfg), fft_(grid), potential_(sample_on_grid(model, grid)) {
  cfg.validate();
  const double dt = cfg.step_size();
  double vmax = 0.0;
  for (double v : potential_.values) vmax = std::max(vmax, std::abs(v));
  if (vmax * dt / cfg.eps > std::numbers::pi / 4.0)
    throw ConfigError("phase guard violated: max|V| dt / eps = " + std::to_string(vmax * dt / cfg.eps) +
                      " exceeds pi/4");
  const auto k2 = spectral::wavenumber_squared(grid);
  kinetic_forward_.resize(k2.size());
  kinetic_backward_.resize(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) {
    kinetic_forward_[i] = std::polar(1.0, -0.5 * cfg.eps * k2[i] * dt);
    kinetic_backward_[i] = std::conj(kinetic_forward_[i]);
  }
  if (potential_.capped_points > 0)
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid.position(i).norm() < potential_.cap_radius) capped_.push_back(i);
}

void StrangStepper::step(WaveField& u, bool backward) const {
  const double dt = backward ? -cfg_.step_size() : cfg_.step_size();
  const double half = 0.5 * dt / cfg_.eps;
  const double p = cfg_.p;
  auto pointwise = [&] {
    for (std::size_t i = 0; i < u.samples.size(); ++i) {
      cplx& z = u.samples[i];
      const double density = std::norm(z);
      const double nonlinear = (p == 1.0) ? density : std::pow(density, p);
      z *= std::polar(1.0, -(potential_.values[i] - nonlinear) * half);
    }
  };
  pointwise();
  fft_.forward(u.samples);
  const auto& kin = backward ? kinetic_backward_ : kinetic_forward_;
  for (std::size_t i = 0; i < u.samples.size(); ++i) u.samples[i] *= kin[i];
  fft_.inverse(u.samples);
  pointwise();
}

void StrangStepper::check_finite(const WaveField& u, long step_index) const {
  if (!u.all_finite())
    throw BlowUpError("numerical blow-up: non-finite samples at step " + std::to_string(step_index), step_index);
}

double StrangStepper::cap_exposure(const WaveField& u) const {
  if (capped_.empty()) return 0.0;
  double peak = 0.0, capped = 0.0;
  for (const cplx& z : u.samples) peak = std::max(peak, std::norm(z));
  for (std::size_t i : capped_) capped = std::max(capped, std::norm(u.samples[i]));
  return peak > 0.0 ? capped / peak : 0.0;
}

WaveField strang_step(const WaveField& u, const PotentialModel& model, const SolverConfig& cfg) {
  const StrangStepper stepper(u.grid, model, cfg);
  WaveField out = u;
  stepper.step(out);
  stepper.check_finite(out, 1);
  return out;
}

namespace {

constexpr double kCapExposureLimit = 1e-10;

EvolveResult run(const WaveField& u0, const PotentialModel& model, const SolverConfig& cfg,
                 const std::vector<Observer>& observers, bool backward) {
  cfg.validate();
  const StrangStepper stepper(u0.grid, model, cfg);
  EvolveResult result{u0, {}, 0.0};
  if (stepper.potential().capped_points > 0)
    result.annotations.push_back("singular potential capped at r = " + std::to_string(stepper.potential().cap_radius) +
                                 " with value " + std::to_string(stepper.potential().cap_value));
  const long steps = cfg.steps();
  const double h = cfg.step_size();
  bool cap_reported = false;

  auto notify = [&](long k) {
    const double exposure = stepper.cap_exposure(result.final_field);
    result.max_cap_exposure = std::max(result.max_cap_exposure, exposure);
    if (exposure > kCapExposureLimit && !cap_reported) {
      result.annotations.push_back("potential cap active on a non-negligible field at step " + std::to_string(k) +
                                   "; results near the singularity are not trusted");
      cap_reported = true;
    }
    const FieldSample sample{k, (backward ? -1.0 : 1.0) * static_cast<double>(k) * h, &result.final_field};
    for (const Observer& obs : observers) {
      try {
        obs(sample);
      } catch (const std::exception& e) {
        result.annotations.push_back("observer failed at step " + std::to_string(k) + ": " + e.what());
      }
    }
  };

  notify(0);
  for (long k = 1; k <= steps; ++k) {
    stepper.step(result.final_field, backward);
    if (k % cfg.snapshot_stride == 0 || k == steps) {
      stepper.check_finite(result.final_field, k);
      notify(k);
    }
  }
  return result;
}

}  // namespace

EvolveResult evolve(const WaveField& u0, const PotentialModel& model, const SolverConfig& cfg,
                    const std::vector<Observer>& observers) {
  return run(u0, model, cfg, observers, false);
}

EvolveResult evolve_backward(const WaveField& u0, const PotentialModel& model, const SolverConfig& cfg) {
  return run(u0, model, cfg, {}, true);
}

}  // namespace nlslab
