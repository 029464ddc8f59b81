#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nlslab/grid.hpp"
#include "nlslab/newton.hpp"
#include "nlslab/potential.hpp"

namespace nlslab {

/// One time sample of every tracked quantity. Vector entries have the
/// field's dimension. `h1eps` is the squared H¹_ε norm; `shift_w` is |w|.
struct ObservableRow {
  double t = 0.0;
  double mass = 0.0;
  Vec momentum;
  double energy_total = 0.0;
  double energy_internal = 0.0;
  double energy_kinetic = 0.0;
  double h1eps = 0.0;
  Vec eta1;
  double eta2 = 0.0;
  double eta2_tilde = 0.0;
  Vec eta3;
  double eta_total = 0.0;
  double split_residual = 0.0;
  Vec fit_center;
  double fit_phase0 = 0.0;
  double fit_residual = 0.0;
  double shift_w = 0.0;

  friend bool operator==(const ObservableRow&, const ObservableRow&) = default;
};

/// Squared H¹_ε norm ε^{2-N}∫|∇u|² + ε^{-N}∫|u|² (spectral gradient).
double h1eps_norm_sq(const WaveField& u, double eps);

/// P_ε = ε^{1-N} ∫ Im(ū ∇u).
Vec momentum(const WaveField& u, double eps);

/// Grid-dependent data shared by all diagnostics of one run.
struct DiagnosticsContext {
  GridSpec grid;
  double eps = 0.1;
  double p = 1.0;
  double mass = 0.0;           ///< m = ‖R‖²
  double ground_energy = 0.0;  ///< ℰ(R)
  PotentialModel model;
  double vacuum_floor = 1e-14;  ///< relative to max |u|²
  double chi_radius = 1.0;      ///< M: χ = 1 on |x| <= M, 0 on |x| >= 2M

  SampledPotential potential;
  std::vector<std::vector<double>> grad_v;  ///< ∂_i V samples (zero inside the cap)
  /// Singular-region cutoff χ_ε: 0 on |x| <= ρ'/2, 1 on |x| >= ρ' = ε^{4/(2-β)}.
  double rho_outer = 0.0;
  bool cutoff_degenerate = false;  ///< ρ' below the grid spacing; η̃₂ falls back to η₂
  std::vector<double> chi_eps;
  std::vector<double> chi;  ///< bounded-region cutoff of η₃
};

DiagnosticsContext make_diagnostics_context(const GridSpec& grid, double eps, double p, double mass,
                                            double ground_energy, const PotentialModel& model, double chi_radius,
                                            double vacuum_floor = 1e-14);

struct EnergySplit {
  double total = 0.0;
  double internal = 0.0;
  double kinetic = 0.0;
  /// Share of ∫|∇u|² carried by cells below the vacuum floor.
  double vacuum_gradient_share = 0.0;
  bool unreliable = false;       ///< vacuum share above 50%
  bool kinetic_bound_ok = true;  ///< K >= mass·V0 - 1e-8
};

/// E_ε = J_ε + K_ε with ∫|∇|u||² obtained from the Madelung identity
/// |∇u|² = |∇|u||² + |Im(ū∇u)|²/|u|² on cells with |u|² above the floor.
EnergySplit energy_split(const WaveField& u, const DiagnosticsContext& ctx);

struct EtaValues {
  Vec eta1;
  double eta2 = 0.0;
  double eta2_tilde = 0.0;
  Vec eta3;
  bool cutoff_degenerate = false;
};

/// η₁ = mξ - P_ε, η₂ = mV(x) - ε^{-N}∫V|u|², η̃₂ the same with Vχ_ε,
/// η₃ = ε^{-N}∫xχ|u|² - m x.
EtaValues eta_diagnostics(const WaveField& u, const DiagnosticsContext& ctx, const PhasePoint& classical);

/// -ε^{-N} ∫ |u|² ∇V, the right-hand side of the momentum law.
Vec potential_force(const WaveField& u, const DiagnosticsContext& ctx);

/// ε^{-N}∫ x χ |u|² / m, the cutoff mass centroid.
Vec centroid(const WaveField& u, const DiagnosticsContext& ctx);

/// Fills every non-fit column of a row.
ObservableRow observe(const WaveField& u, double t, const DiagnosticsContext& ctx, const PhasePoint& classical,
                      EnergySplit* split_out = nullptr);

/// First row time at which |ξ||η₁| + |η₂| > mu or shift_w > 1; `speeds`
/// holds |ξ(t)| per row.
std::optional<double> stopping_time(std::span<const ObservableRow> rows, std::span<const double> speeds, double mu);

}  // namespace nlslab
