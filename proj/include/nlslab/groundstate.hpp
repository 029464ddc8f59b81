#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "nlslab/grid.hpp"

namespace nlslab {

/// Positive radial solution R of -½ΔR + R = R^(2p+1) sampled on a grid
/// centered at the origin.
struct GroundStateSolution {
  WaveField field;  ///< real samples stored as complex with zero imaginary part
  double p = 1.0;
  double mass = 0.0;          ///< m = ‖R‖²_{L²}
  double residual_inf = 0.0;  ///< sup |-½ΔR + R - R^(2p+1)|
  double decay_rate = 0.0;    ///< fitted on the default tail window, 0 if unresolved
  double energy = 0.0;        ///< ℰ(R)
  double gradient_sq = 0.0;   ///< ∫|∇R|²
  int iterations = 0;
  /// ℰ after every iteration of the last fixed-mass phase.
  std::vector<double> energy_history;
  /// max relative mass deviation after renormalization, over all iterations.
  double max_mass_drift = 0.0;

  const GridSpec& grid() const noexcept { return field.grid; }
};

struct GroundStateOptions {
  double tol = 1e-8;
  int max_iter = 20000;
  double step = 0.5;  ///< preconditioned gradient step
};

/// Constrained minimization of ℰ on L² spheres (normalized gradient flow
/// with a Fourier preconditioner), with the sphere radius driven to the
/// value whose Lagrange multiplier is exactly -1.
///
/// Throws DomainError for p outside (0, 2/N) or spacing > 0.1, and
/// ConvergenceError (with the last residual) after max_iter iterations.
GroundStateSolution solve_ground_state(const GridSpec& grid, double p, double tol, int max_iter);
GroundStateSolution solve_ground_state(const GridSpec& grid, double p, const GroundStateOptions& opts);

/// ℰ(v) = ½∫|∇v|² - 1/(p+1) ∫|v|^(2p+2).
double ground_energy(const WaveField& v, double p);

/// sup-norm of -½ΔR + R - R^(2p+1).
double euler_lagrange_residual(const WaveField& r, double p);

/// Least-squares slope of -log(R r^((N-1)/2)) against r along the first
/// axis, for r in [lo, hi]. Throws DomainError if the window leaves the box,
/// contains fewer than 3 samples or samples below 1e-300.
double fit_decay_rate(const GroundStateSolution& sol, double lo, double hi);

/// Wraps externally supplied samples (e.g. a cached snapshot) and recomputes
/// mass, residual, energy and decay rate.
GroundStateSolution ground_state_from_field(WaveField field, double p);

/// Loads the cached solution for (N, p, grid) from `dir`, or solves and
/// stores it. The file is a binary field snapshot.
GroundStateSolution cached_ground_state(const std::filesystem::path& dir, const GridSpec& grid, double p,
                                        double tol, int max_iter);

}  // namespace nlslab
