#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/grid.hpp"
#include "nlslab/nls_solver.hpp"
#include "nlslab/potential.hpp"

namespace nlslab {

/// Everything a run or sweep needs. Read from flat `key = value` text with
/// dotted sections; lists are comma separated, `#` starts a comment.
///
///   grid.dim, grid.points, grid.half_width
///   solver.eps (list), solver.p, solver.dt_scale, solver.dt, solver.T,
///   solver.gs_tol, solver.gs_max_iter
///   potential.v0, potential.amplitude, potential.beta, potential.delta (list)
///   initial.x0, initial.xi0 (vectors), initial.rho (or "none")
///   diagnostics.mu, diagnostics.snapshot_stride, diagnostics.vacuum_floor,
///   diagnostics.chi_radius, diagnostics.solver_tol, diagnostics.fit
///   output.dir, output.cache_dir, output.snapshots, output.plots
///   appendix.delta_exponent
struct ExperimentConfig {
  std::size_t dim = 1;
  std::size_t points = 4096;
  double half_width = 20.0;

  std::vector<double> eps_list{0.1};
  double p = 1.0;
  double dt_scale = 1e-3;       ///< dt = dt_scale·ε unless solver.dt is set
  std::optional<double> dt;
  double T = 1.0;
  double gs_tol = 1e-10;
  int gs_max_iter = 20000;

  double v0 = 1.0;
  double amplitude = 1.0;
  double beta = 0.5;
  std::vector<double> delta_list{0.5};

  Vec x0 = Vec{4.0};
  Vec xi0 = Vec{-0.1};
  std::optional<double> rho;

  std::optional<double> mu;          ///< default 0.1·|ℰ(R)|
  long snapshot_stride = 100;
  double vacuum_floor = 1e-14;
  std::optional<double> chi_radius;  ///< default sup|x(t)| + 1
  double solver_tol = 1e-6;          ///< residuals below 10× this are "below floor"
  bool fit = true;

  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> cache_dir;  ///< default out_dir/cache
  bool snapshots = false;
  bool plots = true;

  std::optional<double> delta_exponent;  ///< appendix coupling δ = ε^q

  GridSpec grid() const { return GridSpec{dim, points, half_width}; }
  double step_for(double eps) const { return dt ? *dt : dt_scale * eps; }
  SolverConfig solver_for(double eps) const;
  PotentialModel model_for(double delta) const;
  std::filesystem::path cache() const { return cache_dir ? *cache_dir : out_dir / "cache"; }

  /// Throws ConfigError naming the offending key.
  void validate() const;
  /// Canonical `key = value` text (every key, fixed order, %.17g numbers).
  std::string to_text() const;
  /// FNV-1a of to_text().
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

ExperimentConfig parse_config(const std::string& text);
/// Throws IoError when the file cannot be read, ConfigError on bad content.
ExperimentConfig load_config(const std::filesystem::path& path);
/// Applies one `key=value` assignment; unknown keys raise ConfigError.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

}  // namespace nlslab
