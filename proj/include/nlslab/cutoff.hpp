#pragma once

namespace nlslab {

/// C³ polynomial blend from 0 (s <= 0) to 1 (s >= 1).
constexpr double smooth_step(double s) noexcept {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double s4 = s * s * s * s;
  return s4 * (35.0 + s * (-84.0 + s * (70.0 - 20.0 * s)));
}

/// 1 for r <= inner, 0 for r >= outer, C³ in between.
constexpr double radial_bump(double r, double inner, double outer) noexcept {
  return 1.0 - smooth_step((r - inner) / (outer - inner));
}

/// 0 for r <= inner, 1 for r >= outer, C³ in between.
constexpr double radial_hole(double r, double inner, double outer) noexcept {
  return smooth_step((r - inner) / (outer - inner));
}

}  // namespace nlslab
