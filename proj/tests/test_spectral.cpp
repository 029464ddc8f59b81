#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nlslab/error.hpp"
#include "nlslab/spectral.hpp"

using namespace nlslab;

namespace {

WaveField sample(const GridSpec& g, auto f) {
  WaveField w(g);
  for_each_point(g, [&](std::size_t i, const Vec& x) { w.samples[i] = f(x); });
  return w;
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("grid geometry") {
  const GridSpec g{1, 8, 2.0};
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.coordinate(0) == -2.0);
  CHECK(g.coordinate(7) == doctest::Approx(1.5));
  CHECK(g.wavenumber(1) == doctest::Approx(std::numbers::pi / 2.0));
  CHECK(g.wavenumber(7) == doctest::Approx(-std::numbers::pi / 2.0));

  const GridSpec g2{2, 4, 1.0};
  CHECK(g2.size() == 16);
  const Vec p = g2.position(1);  // last axis fastest
  CHECK(p[0] == -1.0);
  CHECK(p[1] == doctest::Approx(-0.5));
  CHECK(g2.cell_volume() == doctest::Approx(0.25));
}

TEST_CASE("grid validation and hashing") {
  CHECK_THROWS_AS(GridSpec({4, 8, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec({1, 12, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec({1, 8, -1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(WaveField(GridSpec{1, 8, 1.0}, std::vector<cplx>(7)), ConfigError);
  CHECK(GridSpec({1, 8, 1.0}).hash() == GridSpec({1, 8, 1.0}).hash());
  CHECK(GridSpec({1, 8, 1.0}).hash() != GridSpec({1, 8, 2.0}).hash());
  CHECK(GridSpec({1, 8, 1.0}).hash() != GridSpec({2, 8, 1.0}).hash());
}

TEST_CASE("spectral derivative of a resolved trigonometric field is exact") {
  const GridSpec g{1, 64, 3.0};
  const double k = 5.0 * std::numbers::pi / 3.0;
  const auto f = sample(g, [&](const Vec& x) { return cplx(std::sin(k * x[0]), 0.0); });
  const auto df = sample(g, [&](const Vec& x) { return cplx(k * std::cos(k * x[0]), 0.0); });
  const spectral::Fft fft(g);
  CHECK(max_diff(spectral::derivative(fft, f.samples, 0), df.samples) < 1e-11);
}

TEST_CASE("laplacian of a 2D Gaussian") {
  const GridSpec g{2, 64, 8.0};
  const auto f = sample(g, [](const Vec& x) { return cplx(std::exp(-x.norm2()), 0.0); });
  const auto lap = sample(g, [](const Vec& x) { return cplx((4.0 * x.norm2() - 4.0) * std::exp(-x.norm2()), 0.0); });
  const spectral::Fft fft(g);
  CHECK(max_diff(spectral::laplacian(fft, f.samples), lap.samples) < 1e-9);
}

TEST_CASE("Fourier shift reproduces a translated Gaussian") {
  const GridSpec g{2, 64, 10.0};
  const Vec s{0.37, -1.21};
  const auto f = sample(g, [](const Vec& x) { return cplx(std::exp(-x.norm2()), 0.0); });
  const auto expect = sample(g, [&](const Vec& x) { return cplx(std::exp(-(x - s).norm2()), 0.0); });
  const spectral::Fft fft(g);
  // spectral tail of the Gaussian at k_max = 3.2π is about e^{-k_max²/4} ~ 1e-11
  CHECK(max_diff(spectral::shifted(fft, f.samples, s), expect.samples) < 1e-10);
}

TEST_CASE("reflection about the origin node") {
  const GridSpec g{1, 16, 4.0};
  const auto f = sample(g, [](const Vec& x) { return cplx(x[0] + 0.1 * x[0] * x[0], 0.0); });
  const auto r = spectral::reflected(g, f.samples);
  for_each_point(g, [&](std::size_t i, const Vec& x) {
    if (i == 0) return;  // -L maps to +L, which is the same periodic node
    CHECK(r[i].real() == doctest::Approx(-x[0] + 0.1 * x[0] * x[0]));
  });
}

TEST_CASE("Parseval parts match direct sums") {
  const GridSpec g{1, 128, 10.0};
  const auto f = sample(g, [](const Vec& x) { return std::polar(std::exp(-x.norm2()), 0.3 * x[0]); });
  const spectral::Fft fft(g);
  std::vector<cplx> fh = f.samples;
  fft.forward(fh);
  const auto parts = spectral::sobolev_parts(g, fh, spectral::wavenumber_squared(g));
  const auto df = spectral::derivative(fft, f.samples, 0);
  double l2 = 0.0, grad = 0.0;
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    l2 += std::norm(f.samples[i]) * g.cell_volume();
    grad += std::norm(df[i]) * g.cell_volume();
  }
  CHECK(parts.l2 == doctest::Approx(l2).epsilon(1e-12));
  CHECK(parts.grad == doctest::Approx(grad).epsilon(1e-10));
  CHECK(l2 == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-12));
}

TEST_CASE("rectangle rule integral") {
  const GridSpec g{1, 256, 12.0};
  std::vector<double> v(g.size());
  for_each_point(g, [&](std::size_t i, const Vec& x) { v[i] = std::exp(-x[0] * x[0]); });
  CHECK(spectral::integrate(g, v) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("forward then inverse is the identity") {
  const GridSpec g{3, 16, 2.0};
  auto f = sample(g, [](const Vec& x) { return cplx(std::cos(x[0]) * x[1], x[2]); });
  const auto orig = f.samples;
  const spectral::Fft fft(g);
  fft.forward(f.samples);
  fft.inverse(f.samples);
  CHECK(max_diff(f.samples, orig) < 1e-13);
}
