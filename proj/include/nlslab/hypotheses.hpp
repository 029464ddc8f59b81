#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlslab/groundstate.hpp"
#include "nlslab/potential.hpp"

namespace nlslab {

/// Pass/fail state of every standing assumption for one initial datum.
/// Nothing here throws; failures are reported.
struct HypothesisReport {
  bool v1 = false;  ///< smooth off the origin, β in (0, 1), |∇V| <= A(β+1)|x|^{-(β+1)}
  bool v2 = false;  ///< V >= V0 > 0, decreasing tail increments of the integrability integral
  bool v3 = false;  ///< φ(δ) finite on the probed radii
  bool c1 = false;  ///< radial symmetry about x0
  bool c2 = false;  ///< γ finite and positive or zero
  bool c3 = false;  ///< supp v in B(x0, ρ) with ρ < |x0| - δ
  bool c4 = false;  ///< ε^{-N}‖v‖² = m to 1e-8 relative
  bool small_gamma = false;
  bool small_velocity = false;
  bool small_potential_mass = false;
  bool cond_small() const noexcept { return small_gamma && small_velocity && small_potential_mass; }

  ClosestApproach closest;      ///< δ(x0, ξ0) and its level-set status
  double gamma = 0.0;           ///< ‖v - R((x-x0)/ε)e^{iξ0·x/ε}‖²_{H¹_ε}
  double potential_mass = 0.0;  ///< ∫(V - V0)|v|²
  double threshold_exponent = 0.0;  ///< (17+β)/(1-β)
  std::vector<std::string> notes;
};

/// Evaluates (V1)-(V3), (C1)-(C4) and the three smallness inequalities for
/// the datum v on the simulation grid. `rho` empty means no support claim.
HypothesisReport check_hypotheses(const PotentialModel& model, const GroundStateSolution& R, const Vec& x0,
                                  const Vec& xi0, double eps, std::optional<double> rho, const WaveField& v);

}  // namespace nlslab
