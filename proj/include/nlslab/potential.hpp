#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/grid.hpp"
#include "nlslab/vec.hpp"

namespace nlslab {

/// Radial external potential V_δ(x) = V0 + A (δ² + |x|²)^(-β/2).
///
/// δ = 0 is the singular model (one singularity at the origin, smooth
/// elsewhere); δ > 0 is its smooth truncation with bounded derivatives.
/// V ≥ V0 > 0 everywhere.
struct PotentialModel {
  double v0 = 1.0;
  double amplitude = 1.0;
  double beta = 0.5;
  double delta = 0.0;

  /// Throws DomainError unless v0 > 0, amplitude >= 0, 0 < beta < 1, delta >= 0.
  void validate() const;

  bool singular() const noexcept { return delta == 0.0 && amplitude != 0.0; }

  /// V as a function of the radius.
  double radial(double r) const;
  /// dV/dr.
  double radial_derivative(double r) const;

  friend bool operator==(const PotentialModel&, const PotentialModel&) = default;
};

/// V(x). Throws DomainError at x = 0 for the singular model.
double evaluate(const PotentialModel& model, const Vec& x);

/// ∇V(x) = -Aβ x (δ² + |x|²)^(-β/2 - 1).
Vec gradient(const PotentialModel& model, const Vec& x);

/// Mixed partial derivative D^alpha V at x, exact (no differencing).
/// Orders up to 3 per multi-index are supported; higher work too.
using MultiIndex = std::array<int, kMaxDim>;
double partial_derivative(const PotentialModel& model, const MultiIndex& alpha, const Vec& x);

/// All multi-indices of dimension `dim` with |alpha| <= max_order.
std::vector<MultiIndex> multi_indices(std::size_t dim, int max_order);

struct PhiEstimate {
  double analytic_bound = 0.0;  ///< closed-form majorant
  double sampled = 0.0;         ///< Σ_α sampled sup |D^α V|
};

/// φ(δ) = Σ_{|α|≤3} ‖D^α V_δ‖_∞ for the family member with truncation δ
/// (the model's own truncation is ignored). Throws DomainError for δ <= 0,
/// NumericalError if the sampled value exceeds the analytic bound.
PhiEstimate phi_of_delta(const PotentialModel& model, double delta, std::size_t dim);

/// Variant for the untruncated potential: Σ_{|α|≤3} sup_{|x|≥δ} |D^α V|.
PhiEstimate phi_exterior(const PotentialModel& model, double delta, std::size_t dim);

/// Per-order constant c_k(β) with |D^α (δ²+|x|²)^(-β/2)| ≤ c_k δ^(-β-k), |α| = k.
double derivative_constant(double beta, int order);

/// Potential sampled on a grid. For the singular model the value at radii
/// below `cap_radius` is replaced by V(cap_radius); `capped_points` reports
/// how many samples were affected.
struct SampledPotential {
  std::vector<double> values;
  double cap_value = 0.0;
  double cap_radius = 0.0;
  std::size_t capped_points = 0;
};
SampledPotential sample_on_grid(const PotentialModel& model, const GridSpec& grid);

/// Closest-approach radius δ(x0, ξ0) of the classical flow, from the level
/// set V(r) = ℋ(x0, ξ0).
enum class LevelSet { bounded, unbounded, no_barrier };
struct ClosestApproach {
  LevelSet status = LevelSet::bounded;
  double radius = 0.0;
  double hamiltonian = 0.0;
};
ClosestApproach closest_approach(const PotentialModel& model, const Vec& x0, const Vec& xi0);

/// Nested-interval quadrature of ∫_{|x|>1} (|∇V|² / sqrt(V - V0))^N dx over
/// shells [2^k, 2^(k+1)); returns the shell increments.
std::vector<double> integrability_increments(const PotentialModel& model, std::size_t dim, int shells);

}  // namespace nlslab
