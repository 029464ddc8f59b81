#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <ostream>
#include <string>
#include <vector>

#include "nlslab/error.hpp"
#include "nlslab/potential.hpp"
#include "nlslab/vec.hpp"

namespace nlslab {

/// Anything with free functions evaluate(p, x) and gradient(p, x).
template <class P>
concept ClassicalPotential = requires(const P& p, const Vec& x) {
  { evaluate(p, x) } -> std::convertible_to<double>;
  { gradient(p, x) } -> std::convertible_to<Vec>;
};

/// State of the guiding system ẋ = ξ, ξ̇ = -∇V(x).
struct PhasePoint {
  Vec x;
  Vec xi;
  double t = 0.0;
};

struct ClassicalTrajectory {
  std::vector<PhasePoint> samples;
  std::vector<double> hamiltonian;
  double min_radius = HUGE_VAL;
  double max_speed = 0.0;
  /// sup |ξ(t)| < sqrt(|ξ0|² + 2 V(x0)) held at every sample.
  bool speed_bound_ok = true;

  double hamiltonian_drift() const {
    double d = 0.0;
    for (double h : hamiltonian) d = std::max(d, std::abs(h - hamiltonian.front()));
    return d;
  }
};

inline constexpr double kDefaultGuardRadius = 1e-6;

template <ClassicalPotential P>
double hamiltonian(const P& model, const PhasePoint& s) {
  return 0.5 * s.xi.norm2() + evaluate(model, s.x);
}

/// One velocity-Verlet step; negative dt steps backwards in time.
/// Throws SingularityError if the new position is inside the guard radius.
template <ClassicalPotential P>
PhasePoint verlet_step(const PhasePoint& s, const P& model, double dt, double guard = kDefaultGuardRadius) {
  PhasePoint next = s;
  const Vec half = s.xi - (0.5 * dt) * gradient(model, s.x);
  next.x = s.x + dt * half;
  next.t = s.t + dt;
  if (next.x.norm() < guard || !next.x.finite())
    throw SingularityError("classical trajectory entered the singularity guard at t = " + std::to_string(next.t),
                           next.t);
  next.xi = half - (0.5 * dt) * gradient(model, next.x);
  return next;
}

/// Integrates from state0 over [0, T] with uniform steps (the step is
/// adjusted down so that an integer number of steps lands on T).
template <ClassicalPotential P>
ClassicalTrajectory integrate(const PhasePoint& state0, const P& model, double T, double dt,
                              double guard = kDefaultGuardRadius) {
  if (!(T > 0.0) || !(dt > 0.0) || dt > T) throw DomainError("integrate requires T > 0 and 0 < dt <= T");
  if (state0.x.size() != state0.xi.size()) throw DomainError("position/velocity dimension mismatch");
  const auto steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  const double h = T / static_cast<double>(steps);
  const double speed_cap = std::sqrt(state0.xi.norm2() + 2.0 * evaluate(model, state0.x));

  ClassicalTrajectory traj;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  auto record = [&](const PhasePoint& s) {
    traj.samples.push_back(s);
    traj.hamiltonian.push_back(hamiltonian(model, s));
    traj.min_radius = std::min(traj.min_radius, s.x.norm());
    const double speed = s.xi.norm();
    traj.max_speed = std::max(traj.max_speed, speed);
    if (!(speed < speed_cap)) traj.speed_bound_ok = false;
  };
  PhasePoint s = state0;
  record(s);
  for (long k = 1; k <= steps; ++k) {
    s = verlet_step(s, model, h, guard);
    s.t = state0.t + static_cast<double>(k) * h;
    record(s);
  }
  return traj;
}

/// Linear interpolation of the trajectory state at time t (clamped).
PhasePoint state_at(const ClassicalTrajectory& traj, double t);

/// CSV with columns t, x_1..x_N, xi_1..xi_N, H.
void write_trajectory_csv(std::ostream& out, const ClassicalTrajectory& traj);

}  // namespace nlslab
