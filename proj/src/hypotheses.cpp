#include "nlslab/hypotheses.hpp"

#include <algorithm>
#include <cmath>

#include "nlslab/modulation.hpp"
#include "nlslab/nls_solver.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {
namespace {

bool gradient_bound_holds(const PotentialModel& m, std::size_t dim) {
  for (double r = 1e-3; r <= 1e3; r *= 1.5) {
    Vec x(dim);
    x[0] = r;
    const double g = gradient(m, x).norm();
    if (!(g <= m.amplitude * (m.beta + 1.0) * std::pow(r, -(m.beta + 1.0)) * (1.0 + 1e-12))) return false;
  }
  return true;
}

bool phi_finite(const PotentialModel& m, std::size_t dim) {
  for (double d : {0.1, 1.0, 10.0}) {
    const PhiEstimate e = m.singular() ? phi_exterior(m, d, dim) : phi_of_delta(m, std::max(d, m.delta), dim);
    if (!std::isfinite(e.sampled) || !std::isfinite(e.analytic_bound)) return false;
  }
  return true;
}

}  // namespace

HypothesisReport check_hypotheses(const PotentialModel& model, const GroundStateSolution& R, const Vec& x0,
                                  const Vec& xi0, double eps, std::optional<double> rho, const WaveField& v) {
  HypothesisReport rep;
  const GridSpec& g = v.grid;
  const std::size_t n = g.dim;

  rep.v1 = model.beta > 0.0 && model.beta < 1.0 && model.amplitude >= 0.0 && gradient_bound_holds(model, n);
  const auto inc = integrability_increments(model, n, 12);
  bool decreasing = true;
  for (std::size_t k = 1; k < inc.size(); ++k) decreasing = decreasing && inc[k] <= inc[k - 1];
  rep.v2 = model.v0 > 0.0 && model.amplitude >= 0.0 && decreasing;
  rep.v3 = phi_finite(model, n);

  rep.closest = closest_approach(model, x0, xi0);
  if (rep.closest.status != LevelSet::bounded) rep.notes.push_back("unbounded level set: no closest-approach radius");
  const double delta = rep.closest.status == LevelSet::bounded ? rep.closest.radius : 0.0;

  // (C1): |v| symmetric under y -> -y about x0.
  {
    const spectral::Fft fft(g);
    const auto centered = spectral::shifted(fft, v.samples, x0 * -1.0);
    const auto mirrored = spectral::reflected(g, centered);
    double peak = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < centered.size(); ++i) {
      peak = std::max(peak, std::abs(centered[i]));
      diff = std::max(diff, std::abs(std::abs(centered[i]) - std::abs(mirrored[i])));
    }
    rep.c1 = peak > 0.0 && diff <= 1e-8 * peak;
  }

  const double dist = ansatz_residual(v, R, x0, xi0, 0.0, eps);
  rep.gamma = dist * dist;
  rep.c2 = std::isfinite(rep.gamma);

  if (rho) {
    double peak = 0.0, outside = 0.0;
    for_each_point(g, [&](std::size_t i, const Vec& x) {
      const double d2 = std::norm(v.samples[i]);
      peak = std::max(peak, d2);
      if ((x - x0).norm() > *rho) outside = std::max(outside, d2);
    });
    rep.c3 = *rho > 0.0 && *rho < x0.norm() - delta && outside <= 1e-30 * peak;
  } else {
    rep.notes.push_back("no support radius given: (C3) not claimed");
  }
  rep.c4 = std::abs(scaled_mass(v, eps) / R.mass - 1.0) <= 1e-8;

  double pm = 0.0;
  for_each_point(g, [&](std::size_t i, const Vec& x) {
    if (rho && (x - x0).norm() > *rho) return;
    if (model.singular() && x.norm() < g.spacing()) return;
    pm += (evaluate(model, x) - model.v0) * std::norm(v.samples[i]);
  });
  rep.potential_mass = pm * g.cell_volume();

  const double e = (17.0 + model.beta) / (1.0 - model.beta);
  rep.threshold_exponent = e;
  rep.small_gamma = rep.gamma <= std::pow(eps, 4.0 * e);
  rep.small_velocity = xi0.norm() <= std::pow(eps, e);
  rep.small_potential_mass = rep.potential_mass <= std::pow(eps, static_cast<double>(n) + 2.0 * e);
  return rep;
}

}  // namespace nlslab
