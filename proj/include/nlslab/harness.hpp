#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlslab/config.hpp"
#include "nlslab/hypotheses.hpp"
#include "nlslab/modulation.hpp"
#include "nlslab/newton.hpp"
#include "nlslab/observables.hpp"

namespace nlslab {

/// Output of one (ε, δ) simulation.
struct RunResult {
  double eps = 0.0;
  double delta = 0.0;
  std::string config_hash;

  double mass = 0.0;           ///< m
  double ground_energy = 0.0;  ///< ℰ(R)
  double mu = 0.0;             ///< stopping threshold actually used
  double chi_radius = 0.0;     ///< M actually used

  std::vector<ObservableRow> rows;
  std::vector<PhasePoint> classical;  ///< classical state at each row
  std::vector<Vec> force;             ///< -ε^{-N}∫|u|²∇V at each row
  std::optional<SolitonFit> final_fit;
  ClassicalTrajectory trajectory;
  HypothesisReport hypotheses;

  double sup_residual = 0.0;
  double max_shift_w = 0.0;
  std::optional<double> stopped_at;   ///< first time the monitor triggers
  double mass_drift = 0.0;            ///< max relative deviation from the first row
  double momentum_law_residual = 0.0; ///< sup|P(t) - P(0) - ∫F| / max(|ΔP|, |∫F|, 1e-6|P|)
  bool kinetic_bound_ok = true;       ///< K >= mV0 - 1e-8 on every row
  bool internal_bound_ok = true;      ///< J >= ℰ(R) - 1e-6 on every row
  bool energy_split_reliable = true;
  double max_cap_exposure = 0.0;
  std::vector<std::string> annotations;
};

struct RunOptions {
  /// When set, the field is written here at every observed step.
  std::optional<std::filesystem::path> snapshot_dir;
};

/// Ground state (cached) -> initial datum -> classical and field evolution
/// on the same time step -> observables and modulation fit per snapshot.
/// Library errors are rethrown with the config hash prepended.
RunResult run_single(const ExperimentConfig& cfg, double eps, double delta, const RunOptions& opts = {});

/// Log-log least squares fit y = C·x^a.
struct ScalingReport {
  double exponent = 0.0;
  double intercept = 0.0;  ///< log C
  std::vector<double> x;
  std::vector<double> y;
  std::vector<bool> included;
  std::vector<double> residuals;  ///< log y - fit, on included points
  double r_squared = 0.0;
  bool below_floor = false;
  std::vector<std::string> flags;
};

/// Throws DomainError with fewer than 3 included points or non-positive data.
ScalingReport fit_power_law(std::span<const double> x, std::span<const double> y,
                            const std::vector<bool>& include = {});

struct SweepResult {
  std::vector<RunResult> runs;
  ScalingReport report;
  std::vector<double> phi;    ///< φ(δ) per run (appendix sweep only)
  std::vector<double> proxy;  ///< ε·φ(δ)² per run (appendix sweep only)
};

/// One run per ε at δ = potential.delta[0]; fits sup residual against ε.
/// Runs stopped by the monitor are flagged and excluded from the fit.
SweepResult run_epsilon_scaling(const ExperimentConfig& cfg, unsigned threads = 1);

/// (ε, δ) pairs: δ = ε^q with q = appendix.delta_exponent (default
/// 1/(2(β+3))), or potential.delta paired elementwise with solver.eps.
std::vector<std::pair<double, double>> appendix_pairs(const ExperimentConfig& cfg);

/// Fits sup residual against ε·φ(δ)². Rejects the set before any run when
/// ε²φ(δ) does not strictly decrease along it.
SweepResult run_appendix_scaling(const ExperimentConfig& cfg, unsigned threads = 1);

/// Caveat printed at the top of every report: the admissibility thresholds
/// are checked, but runs use the practically admissible regime.
extern const char* const kRegimeCaveat;

}  // namespace nlslab
