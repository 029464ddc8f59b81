#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "nlslab/error.hpp"
#include "nlslab/groundstate.hpp"
#include "oracles.hpp"

using namespace nlslab;

TEST_CASE("1D cubic ground state matches the sech profile") {
  const GridSpec g{1, 4096, 20.0};
  const auto sol = solve_ground_state(g, 1.0, 1e-10, 20000);
  double err = 0.0;
  for_each_point(g, [&](std::size_t i, const Vec& x) {
    err = std::max(err, std::abs(sol.field.samples[i].real() - oracle::ground_state_1d(x[0], 1.0)));
  });
  CHECK(err < 1e-6);
  CHECK(sol.mass == doctest::Approx(oracle::ground_mass_1d_cubic()).epsilon(1e-9));
  CHECK(sol.energy == doctest::Approx(oracle::ground_energy_1d_cubic()).epsilon(1e-9));
  CHECK(sol.residual_inf < 1e-8);
  CHECK(sol.decay_rate == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("1D p = 1/2 ground state is 1.5 sech^2(x/sqrt 2)") {
  const GridSpec g{1, 1024, 20.0};
  const auto sol = solve_ground_state(g, 0.5, 1e-10, 20000);
  double err = 0.0;
  for_each_point(g, [&](std::size_t i, const Vec& x) {
    err = std::max(err, std::abs(sol.field.samples[i].real() - oracle::ground_state_1d(x[0], 0.5)));
  });
  CHECK(err < 1e-6);
  CHECK(oracle::ground_state_1d(0.0, 0.5) == doctest::Approx(1.5));
}

TEST_CASE("energy decreases along the fixed-mass flow and mass is held") {
  const auto sol = solve_ground_state(GridSpec{1, 512, 16.0}, 1.0, 1e-9, 20000);
  REQUIRE(sol.energy_history.size() > 1);
  for (std::size_t k = 1; k < sol.energy_history.size(); ++k)
    CHECK(sol.energy_history[k] <= sol.energy_history[k - 1] + 1e-12);
  CHECK(sol.max_mass_drift < 1e-12);
}

TEST_CASE("2D ground state is radial and positive") {
  const GridSpec g{2, 256, 12.0};
  const auto sol = solve_ground_state(g, 0.5, 1e-8, 20000);
  double minv = HUGE_VAL, asym = 0.0;
  const std::size_t n = g.points;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      minv = std::min(minv, sol.field.samples[i * n + j].real());
      asym = std::max(asym, std::abs(sol.field.samples[i * n + j] - sol.field.samples[j * n + i]));
    }
  CHECK(minv > -1e-12);
  CHECK(asym < 1e-10);
  CHECK(sol.residual_inf < 1e-6);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(solve_ground_state(GridSpec{1, 256, 20.0}, 1.0, 1e-8, 100), DomainError);  // spacing 0.156
  CHECK_THROWS_AS(solve_ground_state(GridSpec{1, 1024, 20.0}, 2.5, 1e-8, 100), DomainError);
  CHECK_THROWS_AS(solve_ground_state(GridSpec{2, 512, 20.0}, 1.0, 1e-8, 100), DomainError);  // mass critical
  CHECK_THROWS_AS(solve_ground_state(GridSpec{1, 1024, 20.0}, 1.0, 1e-14, 3), ConvergenceError);
}

TEST_CASE("decay window checks") {
  const auto sol = solve_ground_state(GridSpec{1, 1024, 20.0}, 1.0, 1e-9, 20000);
  CHECK(fit_decay_rate(sol, 3.0, 8.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK_THROWS_AS(fit_decay_rate(sol, 15.0, 25.0), DomainError);
  CHECK_THROWS_AS(fit_decay_rate(sol, 3.0, 3.01), DomainError);
}

TEST_CASE("ground state cache round-trips") {
  const auto dir = std::filesystem::path("gs_cache_test");
  std::filesystem::remove_all(dir);
  const GridSpec g{1, 1024, 20.0};
  const auto a = cached_ground_state(dir, g, 1.0, 1e-9, 20000);
  REQUIRE(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
  const auto b = cached_ground_state(dir, g, 1.0, 1e-9, 20000);
  CHECK(a.field.samples == b.field.samples);
  CHECK(a.mass == b.mass);
  std::filesystem::remove_all(dir);
}
