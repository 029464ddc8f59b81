#pragma once

#include <optional>
#include <vector>

#include "nlslab/groundstate.hpp"
#include "nlslab/grid.hpp"
#include "nlslab/newton.hpp"

namespace nlslab {

/// Best probed member of the family e^{i(ξ·x/ε + φ₀)} R((x - x̃)/ε).
struct SolitonFit {
  Vec center;           ///< x̃
  double phase0 = 0.0;  ///< φ₀ in [0, 2π)
  double residual = 0.0;  ///< ‖u - ansatz‖_{H¹_ε}
  Vec shift;            ///< (x(t) - x̃)/ε, zero without a classical position
  double shift_w = 0.0;  ///< |shift|
  double theta = 0.0;    ///< ε·φ₀
  int probes = 0;
  std::vector<double> round_residuals;  ///< best residual per step size, shrink_rounds + 1 entries
};

struct FitOptions {
  std::optional<Vec> start_center;   ///< warm start (defaults to the centroid)
  std::optional<double> start_phase; ///< first probe only (defaults to the L² projection phase)
  std::optional<Vec> classical_x;    ///< x(t), for the shift
  double chi_radius = 0.0;           ///< centroid cutoff M; 0 disables the cutoff
  int shrink_rounds = 16;  ///< center step ends at spacing / 4^16
  int max_sweeps = 200;              ///< per round
};

/// Coordinate probe-and-shrink fit of x̃ with ξ fixed; the center step starts
/// at one grid spacing and shrinks by 4 each round. For each probed center
/// φ₀ is the closed-form optimum arg⟨e^{iξ·x/ε}R((x-x̃)/ε), u⟩_{H¹_ε}.
/// Throws DomainError when the scaled mass of u differs from m by more than
/// 1%, FitError when the starting centroid lies outside the box.
SolitonFit fit_modulation(const WaveField& u, const GroundStateSolution& R, const Vec& xi, double eps,
                          const FitOptions& opts = {});

/// ‖u - e^{i(ξ·x/ε + phase)} R((x - center)/ε)‖_{H¹_ε}.
double ansatz_residual(const WaveField& u, const GroundStateSolution& R, const Vec& center, const Vec& xi,
                       double phase, double eps);

/// Ψ(x) = u(x(t) + εx) e^{-iξ(t)·(x(t)+εx)/ε} on the unit-scale grid, by
/// Fourier shift. Throws FitError when x(t) lies outside the box.
WaveField comoving_frame(const WaveField& u, const PhasePoint& classical, double eps);

}  // namespace nlslab
