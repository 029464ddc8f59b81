#include "nlslab/modulation.hpp"

#include <cmath>
#include <numbers>

#include "nlslab/cutoff.hpp"
#include "nlslab/error.hpp"
#include "nlslab/nls_solver.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

// Evaluates the H¹_ε distance to the ansatz. For a fixed center the distance
// is a cosine in φ, so only center probes need transforms.
class Objective {
public:
  Objective(const WaveField& u, const GroundStateSolution& R, const Vec& xi, double eps)
      : grid_(u.grid), fft_(u.grid), xi_(xi), eps_(eps), rhat_(R.field.samples), uhat_(u.samples) {
    if (R.grid().dim != grid_.dim || R.grid().points != grid_.points ||
        std::abs(R.grid().half_width * eps - grid_.half_width) > 1e-12 * grid_.half_width)
      throw ConfigError("ground state grid is not the unit-scale image of the field grid");
    if (xi.size() != grid_.dim) throw DomainError("velocity dimension does not match the field");
    fft_.forward(rhat_);
    fft_.forward(uhat_);
    std::vector<double> k2(uhat_.size(), 0.0);
    for (std::size_t d = 0; d < grid_.dim; ++d) {
      const auto k = spectral::axis_wavenumbers(grid_, d);
      for (std::size_t i = 0; i < k2.size(); ++i) k2[i] += k[i] * k[i];
    }
    const double base = grid_.cell_volume() / static_cast<double>(grid_.size()) /
                        std::pow(eps, static_cast<double>(grid_.dim));
    weight_.resize(k2.size());
    for (std::size_t i = 0; i < k2.size(); ++i) weight_[i] = base * (1.0 + eps * eps * k2[i]);
    for (std::size_t i = 0; i < uhat_.size(); ++i) unorm_ += weight_[i] * std::norm(uhat_[i]);
  }

  struct Projection {
    cplx inner;      // ⟨B, u⟩_{H¹_ε}
    cplx inner_l2;   // ⟨B, u⟩_{L²}
    double norm_sq;  // ‖B‖²_{H¹_ε}
  };

  // B = e^{iξ·x/ε} R((x - c)/ε).
  Projection project(const Vec& c) const {
    std::vector<cplx> b = rhat_;
    spectral::apply_shift_phase(grid_, b, c);
    fft_.inverse(b);
    for_each_point(grid_, [&](std::size_t i, const Vec& x) { b[i] *= std::polar(1.0, xi_.dot(x) / eps_); });
    fft_.forward(b);
    Projection pr{{0.0, 0.0}, {0.0, 0.0}, 0.0};
    const double l2w = grid_.cell_volume() / static_cast<double>(grid_.size()) /
                       std::pow(eps_, static_cast<double>(grid_.dim));
    for (std::size_t i = 0; i < b.size(); ++i) {
      const cplx z = std::conj(b[i]) * uhat_[i];
      pr.inner += weight_[i] * z;
      pr.inner_l2 += l2w * z;
      pr.norm_sq += weight_[i] * std::norm(b[i]);
    }
    return pr;
  }

  double distance(const Projection& pr, double phase) const {
    const double d2 = unorm_ + pr.norm_sq - 2.0 * (std::polar(1.0, -phase) * pr.inner).real();
    return std::sqrt(std::max(d2, 0.0));
  }

private:
  GridSpec grid_;
  spectral::Fft fft_;
  Vec xi_;
  double eps_;
  std::vector<cplx> rhat_;
  std::vector<cplx> uhat_;
  std::vector<double> weight_;
  double unorm_ = 0.0;
};

Vec mass_centroid(const WaveField& u, double chi_radius) {
  Vec c(u.grid.dim);
  double total = 0.0;
  for_each_point(u.grid, [&](std::size_t i, const Vec& x) {
    const double w = std::norm(u.samples[i]) * (chi_radius > 0.0 ? radial_bump(x.norm(), chi_radius, 2 * chi_radius) : 1.0);
    c += w * x;
    total += w;
  });
  if (!(total > 0.0)) throw FitError("fit diverged: no mass inside the centroid cutoff");
  return c * (1.0 / total);
}

}  // namespace

double ansatz_residual(const WaveField& u, const GroundStateSolution& R, const Vec& center, const Vec& xi,
                       double phase, double eps) {
  const Objective obj(u, R, xi, eps);
  return obj.distance(obj.project(center), phase);
}

SolitonFit fit_modulation(const WaveField& u, const GroundStateSolution& R, const Vec& xi, double eps,
                          const FitOptions& opts) {
  const double mass = scaled_mass(u, eps);
  if (std::abs(mass / R.mass - 1.0) > 0.01)
    throw DomainError("fit precondition: field mass " + std::to_string(mass) + " differs from m = " +
                      std::to_string(R.mass) + " by more than 1%");
  const Objective obj(u, R, xi, eps);

  Vec center = opts.start_center ? *opts.start_center : mass_centroid(u, opts.chi_radius);
  if (center.size() != u.grid.dim) throw DomainError("start center dimension mismatch");
  for (double c : center)
    if (!(std::abs(c) < u.grid.half_width)) throw FitError("fit diverged: centroid outside the box");

  SolitonFit fit;
  // Initial phase from the L² projection; every probe afterwards takes the
  // exact optimum arg⟨B, u⟩_{H¹_ε} for its center.
  auto pr = obj.project(center);
  double phase = opts.start_phase ? wrap_phase(*opts.start_phase) : wrap_phase(std::arg(pr.inner_l2));
  double best = obj.distance(pr, phase);
  fit.probes = 1;
  auto improve_phase = [&] {
    const double opt = wrap_phase(std::arg(pr.inner));
    const double r = obj.distance(pr, opt);
    ++fit.probes;
    if (r < best) {
      best = r;
      phase = opt;
    }
  };
  improve_phase();

  double hx = u.grid.spacing();
  for (int round = 0; round <= opts.shrink_rounds; ++round, hx /= 4.0) {
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      bool improved = false;
      for (std::size_t d = 0; d < center.size(); ++d) {
        for (double sign : {1.0, -1.0}) {
          Vec trial = center;
          trial[d] += sign * hx;
          const auto tp = obj.project(trial);
          const double tphase = wrap_phase(std::arg(tp.inner));
          const double r = obj.distance(tp, tphase);
          ++fit.probes;
          if (r < best) {
            best = r;
            center = trial;
            phase = tphase;
            pr = tp;
            improved = true;
            break;
          }
        }
      }
      if (!improved) break;
    }
    fit.round_residuals.push_back(best);
  }

  fit.center = center;
  fit.phase0 = phase;
  fit.residual = best;
  fit.theta = eps * phase;
  fit.shift = Vec(center.size());
  if (opts.classical_x) {
    fit.shift = (*opts.classical_x - center) * (1.0 / eps);
    fit.shift_w = fit.shift.norm();
  }
  return fit;
}

WaveField comoving_frame(const WaveField& u, const PhasePoint& classical, double eps) {
  if (classical.x.size() != u.grid.dim || classical.xi.size() != u.grid.dim)
    throw DomainError("classical state dimension does not match the field");
  for (double c : classical.x)
    if (!(std::abs(c) < u.grid.half_width)) throw FitError("comoving frame centre leaves the box");
  const spectral::Fft fft(u.grid);
  std::vector<cplx> s = spectral::shifted(fft, u.samples, classical.x * -1.0);
  for_each_point(u.grid, [&](std::size_t i, const Vec& y) {
    s[i] *= std::polar(1.0, -classical.xi.dot(classical.x + y) / eps);
  });
  return WaveField(u.grid.scaled(1.0 / eps), std::move(s));
}

}  // namespace nlslab
