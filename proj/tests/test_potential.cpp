#include <cmath>

#include "doctest.h"
#include "nlslab/error.hpp"
#include "nlslab/potential.hpp"
#include "oracles.hpp"

using namespace nlslab;

namespace {

const PotentialModel singular{1.0, 1.0, 0.5, 0.0};

// sup_x |d^k/dx^k V_δ| for k = 0..3 along a line, by nested central differences.
double brute_phi_1d(double v0, double a, double beta, double delta) {
  auto V = [&](double x) { return oracle::potential(std::abs(x), v0, a, beta, delta); };
  const double h = 1e-3;
  double s[4] = {0, 0, 0, 0};
  for (double x = -20.0; x <= 20.0; x += 1e-3) {
    s[0] = std::max(s[0], std::abs(V(x)));
    s[1] = std::max(s[1], std::abs((V(x + h) - V(x - h)) / (2 * h)));
    s[2] = std::max(s[2], std::abs((V(x + h) - 2 * V(x) + V(x - h)) / (h * h)));
    s[3] = std::max(s[3], std::abs((V(x + 2 * h) - 2 * V(x + h) + 2 * V(x - h) - V(x - 2 * h)) / (2 * h * h * h)));
  }
  return s[0] + s[1] + s[2] + s[3];
}

}  // namespace

TEST_CASE("closed-form values") {
  CHECK(evaluate(singular, Vec{1.0}) == doctest::Approx(2.0));
  CHECK(evaluate(singular, Vec{16.0}) == doctest::Approx(1.25));
  CHECK(evaluate(singular, Vec{0.0, 16.0}) == doctest::Approx(1.25));
  CHECK(evaluate(PotentialModel{1.0, 1.0, 0.5, 1e8}, Vec{3.0}) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(evaluate(singular, Vec{0.0}), DomainError);
  CHECK(evaluate(PotentialModel{1.0, 1.0, 0.5, 0.5}, Vec{0.0}) == doctest::Approx(1.0 + std::pow(0.5, -0.5)));
}

TEST_CASE("gradient closed form and finite differences") {
  const Vec g = gradient(singular, Vec{1.0, 0.0});
  CHECK(g[0] == doctest::Approx(-0.5));
  CHECK(g[1] == 0.0);
  CHECK(gradient(PotentialModel{1.0, 2.0, 0.7, 0.3}, Vec{0.0, 0.0}).norm() == 0.0);

  const PotentialModel m{1.0, 1.3, 0.6, 0.2};
  const double h = 1e-5;
  for (int k = 0; k < 10; ++k) {
    const Vec x{std::sin(1.3 * k + 0.2) * 3.0, std::cos(0.7 * k) * 2.0, 0.5 + 0.1 * k};
    const Vec g3 = gradient(m, x);
    for (std::size_t d = 0; d < 3; ++d) {
      Vec xp = x, xm = x;
      xp[d] += h;
      xm[d] -= h;
      const double fd = (evaluate(m, xp) - evaluate(m, xm)) / (2 * h);
      CHECK(std::abs(fd - g3[d]) <= 1e-6 * std::max(1.0, std::abs(g3[d])));
    }
  }
}

TEST_CASE("partial derivatives agree with differencing the gradient") {
  const PotentialModel m{1.0, 1.0, 0.5, 0.3};
  const Vec x{0.4, -0.7};
  const double h = 1e-5;
  Vec xp = x, xm = x;
  xp[1] += h;
  xm[1] -= h;
  const double fd = (gradient(m, xp)[0] - gradient(m, xm)[0]) / (2 * h);
  CHECK(partial_derivative(m, MultiIndex{1, 1, 0}, x) == doctest::Approx(fd).epsilon(1e-7));
  CHECK(partial_derivative(m, MultiIndex{0, 0, 0}, x) == doctest::Approx(evaluate(m, x)));
  CHECK(partial_derivative(m, MultiIndex{1, 0, 0}, x) == doctest::Approx(gradient(m, x)[0]));
  CHECK(multi_indices(1, 3).size() == 4);
  CHECK(multi_indices(2, 3).size() == 10);
  CHECK(multi_indices(3, 3).size() == 20);
}

TEST_CASE("translation covariance and delta continuity") {
  const PotentialModel m{1.0, 1.0, 0.5, 0.4};
  const Vec x{1.1, -0.3}, s{0.25, 0.5};
  CHECK(evaluate(m, (x + s) - s) == evaluate(m, x));
  double gap = 0.0;
  for (double r = 1.0; r < 10.0; r += 0.1)
    gap = std::max(gap, std::abs(evaluate(PotentialModel{1.0, 1.0, 0.5, 0.4 + 1e-6}, Vec{r}) - evaluate(m, Vec{r})));
  CHECK(gap < 1e-6);
}

TEST_CASE("phi: monotone, bracketed, brute-force agreement") {
  for (double d : {0.05, 0.1, 0.3, 1.0, 2.0}) {
    const auto a = phi_of_delta(singular, d, 2);
    const auto b = phi_of_delta(singular, 2 * d, 2);
    CHECK(a.sampled >= b.sampled);
    CHECK(a.sampled <= a.analytic_bound);
  }
  const auto e = phi_of_delta(singular, 1.0, 1);
  const double sup_v = 1.0 + 1.0;  // ‖V_1‖_∞ = V0 + A·1^{-β}
  CHECK(e.sampled >= sup_v);
  CHECK(e.sampled <= e.analytic_bound);
  CHECK(e.sampled == doctest::Approx(brute_phi_1d(1.0, 1.0, 0.5, 1.0)).epsilon(1e-4));
  CHECK_THROWS_AS(phi_of_delta(singular, 0.0, 1), DomainError);
}

TEST_CASE("phi blows up like delta^-(beta+3)") {
  const double b = singular.beta;
  const double c1 = phi_of_delta(singular, 1e-2, 1).sampled * std::pow(1e-2, b + 3);
  const double c2 = phi_of_delta(singular, 1e-3, 1).sampled * std::pow(1e-3, b + 3);
  const double c3 = phi_of_delta(singular, 1e-4, 1).sampled * std::pow(1e-4, b + 3);
  CHECK(c3 > 0.0);
  CHECK(std::abs(c2 - c3) < std::abs(c1 - c2));
  CHECK(c2 == doctest::Approx(c3).epsilon(1e-2));
}

TEST_CASE("closest approach from bisection") {
  const Vec x0{4.0, 0.0}, xi0{0.0, 0.1};
  const auto ca = closest_approach(singular, x0, xi0);
  REQUIRE(ca.status == LevelSet::bounded);
  const double h0 = 0.5 * 0.01 + 1.0 + 0.5;
  CHECK(ca.hamiltonian == doctest::Approx(h0));
  CHECK(std::abs(ca.radius - std::pow(h0 - 1.0, -2.0)) < 1e-10);

  const auto flat = closest_approach(PotentialModel{1.0, 0.0, 0.5, 0.0}, x0, Vec{0.0, 0.0});
  CHECK(flat.status != LevelSet::bounded);
}

TEST_CASE("sampling caps the singular model") {
  const GridSpec g{1, 64, 2.0};
  const auto s = sample_on_grid(singular, g);
  CHECK(s.capped_points == 1);  // only the origin node
  CHECK(s.cap_radius == doctest::Approx(g.spacing()));
  CHECK(s.cap_value == doctest::Approx(evaluate(singular, Vec{g.spacing()})));
  const auto t = sample_on_grid(PotentialModel{1.0, 1.0, 0.5, 0.5}, g);
  CHECK(t.capped_points == 0);
}

TEST_CASE("integrability tail increments decrease") {
  for (std::size_t dim : {1u, 2u, 3u}) {
    const auto inc = integrability_increments(singular, dim, 10);
    REQUIRE(inc.size() == 10);
    for (std::size_t k = 1; k < inc.size(); ++k) CHECK(inc[k] < inc[k - 1]);
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(PotentialModel({0.0, 1.0, 0.5, 0.0}).validate(), DomainError);
  CHECK_THROWS_AS(PotentialModel({1.0, 1.0, 1.5, 0.0}).validate(), DomainError);
  CHECK_THROWS_AS(PotentialModel({1.0, 1.0, 0.5, -1.0}).validate(), DomainError);
  CHECK_NOTHROW(PotentialModel({1.0, 1.0, 0.5, 0.0}).validate());
}
