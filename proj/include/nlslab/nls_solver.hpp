#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/groundstate.hpp"
#include "nlslab/grid.hpp"
#include "nlslab/potential.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

/// Parameters of one run of iε ∂t u + ε²/2 Δu - V u + |u|^(2p) u = 0.
struct SolverConfig {
  double eps = 0.1;
  double p = 1.0;
  double dt = 1e-4;
  double T = 1.0;
  long snapshot_stride = 100;

  /// Throws ConfigError for eps outside (0, 1], non-positive dt/T/stride.
  void validate() const;
  long steps() const;
  /// dt adjusted so that steps() * step_size() == T.
  double step_size() const;
};

/// Grid of the simulation whose unit-scale ground state lives on `unit`.
inline GridSpec simulation_grid(const GridSpec& unit, double eps) { return unit.scaled(eps); }

/// e^{i(ξ·x/ε + phase)} R((x - center)/ε) on the simulation grid. R must be
/// sampled on simulation_grid(...).scaled(1/eps).
WaveField soliton_ansatz(const GroundStateSolution& R, const Vec& center, const Vec& xi, double phase, double eps);

/// Initial datum: the ansatz at (x0, ξ0), optionally multiplied by a C³
/// radial cutoff (1 on B(x0, ρ/2), 0 outside B(x0, ρ)), rescaled so that
/// ε^{-N}‖v‖² = m. With ρ given, requires ρ < |x0| - δ(x0, ξ0) for the
/// model's closest-approach radius δ; violations raise ConfigError naming
/// the condition.
WaveField build_initial_datum(const GroundStateSolution& R, const PotentialModel& model, const Vec& x0,
                              const Vec& xi0, double eps, std::optional<double> rho = std::nullopt);

/// ε^{-N} ∫|u|².
double scaled_mass(const WaveField& u, double eps);

/// Strang splitting: half step of the pointwise flow
/// u ↦ e^{-i(V - |u|^(2p)) dt/(2ε)} u, exact kinetic flow e^{-iε|k|²dt/2}
/// in Fourier space, second half step. Every substep is unitary.
class StrangStepper {
public:
  StrangStepper(const GridSpec& grid, const PotentialModel& model, const SolverConfig& cfg);

  /// Advances by one step (dt = cfg.step_size(), negated when backward).
  void step(WaveField& u, bool backward = false) const;

  /// Throws BlowUpError when u has non-finite samples.
  void check_finite(const WaveField& u, long step_index) const;

  const SampledPotential& potential() const noexcept { return potential_; }
  /// Largest |u|² on capped points relative to max |u|², for singular runs.
  double cap_exposure(const WaveField& u) const;

private:
  GridSpec grid_;
  SolverConfig cfg_;
  spectral::Fft fft_;
  SampledPotential potential_;
  std::vector<cplx> kinetic_forward_;
  std::vector<cplx> kinetic_backward_;
  std::vector<std::size_t> capped_;
};

/// One step of StrangStepper (convenience for single-shot use).
WaveField strang_step(const WaveField& u, const PotentialModel& model, const SolverConfig& cfg);

/// Observer invoked at step 0, every snapshot_stride steps and at the end.
struct FieldSample {
  long step = 0;
  double t = 0.0;
  const WaveField* field = nullptr;
};
using Observer = std::function<void(const FieldSample&)>;

struct EvolveResult {
  WaveField final_field;
  std::vector<std::string> annotations;  ///< observer failures, cap warnings
  double max_cap_exposure = 0.0;
};

/// Steps u0 from 0 to T. Observer exceptions are recorded, not rethrown.
/// Throws ConfigError when the phase guard max|V| dt/ε <= π/4 fails.
EvolveResult evolve(const WaveField& u0, const PotentialModel& model, const SolverConfig& cfg,
                    const std::vector<Observer>& observers = {});

/// Same dynamics backwards in time (used for reversibility checks).
EvolveResult evolve_backward(const WaveField& u0, const PotentialModel& model, const SolverConfig& cfg);

}  // namespace nlslab
