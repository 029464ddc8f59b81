#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nlslab/error.hpp"
#include "nlslab/groundstate.hpp"
#include "nlslab/modulation.hpp"
#include "nlslab/nls_solver.hpp"
#include "nlslab/observables.hpp"
#include "oracles.hpp"

using namespace nlslab;

namespace {

constexpr double kEps = 0.1;
const GridSpec kSim{1, 2048, 10.0};

const GroundStateSolution& ground() {
  static const GroundStateSolution R = solve_ground_state(kSim.scaled(1.0 / kEps), 1.0, 1e-11, 20000);
  return R;
}

double angle_gap(double a, double b) {
  const double d = std::remainder(a - b, 2.0 * std::numbers::pi);
  return std::abs(d);
}

}  // namespace

TEST_CASE("a pure ansatz is recovered between grid points") {
  const double c = 1.2345678, phase = 2.5;
  const auto u = soliton_ansatz(ground(), Vec{c}, Vec{0.3}, phase, kEps);
  FitOptions opts;
  opts.classical_x = Vec{1.25};
  const auto fit = fit_modulation(u, ground(), Vec{0.3}, kEps, opts);
  CHECK(fit.center[0] == doctest::Approx(c).epsilon(1e-9));
  CHECK(angle_gap(fit.phase0, phase) < 1e-6);
  CHECK(fit.phase0 >= 0.0);
  CHECK(fit.phase0 < 2.0 * std::numbers::pi);
  CHECK(fit.residual < 1e-5);
  CHECK(fit.theta == doctest::Approx(kEps * fit.phase0));
  CHECK(fit.shift[0] == doctest::Approx((1.25 - fit.center[0]) / kEps));
  CHECK(fit.shift_w == doctest::Approx(std::abs(fit.shift[0])));
  REQUIRE(fit.round_residuals.size() == 17);
  for (std::size_t i = 1; i < fit.round_residuals.size(); ++i)
    CHECK(fit.round_residuals[i] <= fit.round_residuals[i - 1]);
}

TEST_CASE("the fit never does worse than the generating parameters") {
  const double c = -0.73, phase = 0.9;
  auto u = soliton_ansatz(ground(), Vec{c}, Vec{-0.2}, phase, kEps);
  for_each_point(kSim, [&](std::size_t i, const Vec& x) {
    u.samples[i] += 1e-3 * std::exp(-std::pow((x[0] - c - 0.05) / kEps, 2)) * cplx(1.0, -0.5);
  });
  const double truth = ansatz_residual(u, ground(), Vec{c}, Vec{-0.2}, phase, kEps);
  const auto fit = fit_modulation(u, ground(), Vec{-0.2}, kEps);
  CHECK(fit.residual <= truth * (1.0 + 1e-9));
  CHECK(fit.residual == doctest::Approx(ansatz_residual(u, ground(), fit.center, Vec{-0.2}, fit.phase0, kEps)));
  CHECK(std::abs(fit.center[0] - c) < kEps);
}

TEST_CASE("a global phase rotates phase0 and leaves the center") {
  const auto u = soliton_ansatz(ground(), Vec{0.4}, Vec{0.1}, 1.0, kEps);
  auto v = u;
  const cplx rot = std::polar(1.0, 2.0);
  for (cplx& z : v.samples) z *= rot;
  const auto a = fit_modulation(u, ground(), Vec{0.1}, kEps);
  const auto b = fit_modulation(v, ground(), Vec{0.1}, kEps);
  CHECK(angle_gap(b.phase0, a.phase0 + 2.0) < 1e-8);
  CHECK(b.center[0] == doctest::Approx(a.center[0]).epsilon(1e-12));
  CHECK(b.residual == doctest::Approx(a.residual).epsilon(1e-6));
}

TEST_CASE("comoving frame of the ansatz is the ground state") {
  const double x0 = 0.61, xi = 0.45, phase = 0.3;
  const auto u = soliton_ansatz(ground(), Vec{x0}, Vec{xi}, phase, kEps);
  const auto psi = comoving_frame(u, PhasePoint{Vec{x0}, Vec{xi}}, kEps);
  CHECK(psi.grid.half_width == doctest::Approx(kSim.half_width / kEps));
  double err = 0.0, mass = 0.0;
  for_each_point(psi.grid, [&](std::size_t i, const Vec& y) {
    err = std::max(err, std::abs(psi.samples[i] - std::polar(oracle::ground_state_1d(y[0], 1.0), phase)));
    mass += std::norm(psi.samples[i]);
  });
  CHECK(err < 1e-8);
  CHECK(mass * psi.grid.cell_volume() == doctest::Approx(oracle::ground_mass_1d_cubic()).epsilon(1e-9));
}

TEST_CASE("preconditions") {
  auto u = soliton_ansatz(ground(), Vec{0.0}, Vec{0.0}, 0.0, kEps);
  for (cplx& z : u.samples) z *= 1.05;
  CHECK_THROWS_AS(fit_modulation(u, ground(), Vec{0.0}, kEps), DomainError);

  const auto v = soliton_ansatz(ground(), Vec{0.0}, Vec{0.0}, 0.0, kEps);
  FitOptions far;
  far.start_center = Vec{12.0};
  CHECK_THROWS_AS(fit_modulation(v, ground(), Vec{0.0}, kEps, far), FitError);
  CHECK_THROWS_AS(comoving_frame(v, PhasePoint{Vec{-11.0}, Vec{0.0}}, kEps), FitError);
  CHECK_THROWS_AS(fit_modulation(v, ground(), Vec{0.0, 0.0}, kEps), DomainError);
  const auto coarse = solve_ground_state(kSim.scaled(5.0), 1.0, 1e-10, 20000);
  CHECK_THROWS_AS(fit_modulation(v, coarse, Vec{0.0}, kEps), ConfigError);
}
