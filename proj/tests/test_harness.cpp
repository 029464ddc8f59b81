#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "nlslab/config.hpp"
#include "nlslab/error.hpp"
#include "nlslab/groundstate.hpp"
#include "nlslab/harness.hpp"
#include "nlslab/hypotheses.hpp"
#include "nlslab/nls_solver.hpp"
#include "nlslab/output.hpp"
#include "nlslab/snapshot.hpp"
#include "oracles.hpp"

using namespace nlslab;
namespace fs = std::filesystem;

namespace {

const fs::path kOut = "harness_out";

// Constant potential, short horizon: every run is an exact travelling soliton.
ExperimentConfig free_config() {
  ExperimentConfig c = parse_config(R"(
    grid.points = 4096
    grid.half_width = 10
    solver.eps = 0.2, 0.1, 0.05
    solver.T = 0.1
    potential.amplitude = 0
    initial.x0 = -1
    initial.xi0 = 0.5
    diagnostics.snapshot_stride = 500
  )");
  c.out_dir = kOut;
  return c;
}

std::string rows_text(const RunResult& r) {
  std::ostringstream o;
  write_rows_csv(o, 1, r.rows);
  return o.str();
}

}  // namespace

TEST_CASE("config parsing, overrides and hashing") {
  const ExperimentConfig d;
  CHECK_NOTHROW(d.validate());
  const auto c = parse_config("# comment\nsolver.eps = 0.2, 0.1 # trailing\ninitial.x0 = 3\ninitial.rho = none\n");
  CHECK(c.eps_list == std::vector<double>{0.2, 0.1});
  CHECK(c.x0 == Vec{3.0});
  CHECK_FALSE(c.rho.has_value());

  auto e = c;
  apply_override(e, "potential.beta=0.25");
  CHECK(e.beta == 0.25);
  CHECK(e.hash() != c.hash());
  CHECK(parse_config(e.to_text()).hash() == e.hash());
  CHECK(e.hash_hex().size() == 16);

  CHECK_THROWS_AS(apply_override(e, "solver.nope=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(e, "solver.eps"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.points = many"), ConfigError);
  CHECK_THROWS_AS(load_config("no/such/file.cfg"), IoError);

  auto bad = d;
  bad.eps_list = {0.001};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = d;
  bad.p = 2.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = d;
  bad.dt = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("power-law fit") {
  const std::vector<double> x{0.4, 0.2, 0.1, 0.05};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.5));
  const auto rep = fit_power_law(x, y);
  CHECK(rep.exponent == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(std::exp(rep.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(rep.r_squared == doctest::Approx(1.0));

  y[0] = 100.0;
  const auto masked = fit_power_law(x, y, {false, true, true, true});
  CHECK(masked.exponent == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(masked.residuals.size() == 3);

  CHECK_THROWS_AS(fit_power_law(x, y, {false, false, true, true}), DomainError);
  const std::vector<double> neg{1.0, -1.0, 2.0, 3.0};
  CHECK_THROWS_AS(fit_power_law(x, neg), DomainError);
}

TEST_CASE("rows CSV round trip") {
  ObservableRow r;
  r.t = 0.1;
  r.mass = 2.8284271247461903;
  r.momentum = Vec{1.0 / 3.0};
  r.energy_total = -1e-300;
  r.eta1 = Vec{std::nextafter(1.0, 2.0)};
  r.eta3 = Vec{-0.0};
  r.fit_center = Vec{4.0};
  r.fit_residual = 1.2345e-7;
  std::ostringstream o;
  write_rows_csv(o, 1, {r, r});
  std::istringstream in(o.str());
  const auto back = read_rows_csv(in);
  CHECK(back.dim == 1);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0] == r);

  std::ostringstream empty;
  write_rows_csv(empty, 2, {});
  std::istringstream ein(empty.str());
  const auto e = read_rows_csv(ein);
  CHECK(e.dim == 2);
  CHECK(e.rows.empty());
  const std::string text = empty.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  CHECK(csv_header(2).front() == "t");

  std::istringstream broken(o.str() + "1,2,3\n");
  CHECK_THROWS_AS(read_rows_csv(broken), IoError);
}

TEST_CASE("snapshot round trip is bit exact") {
  WaveField f(GridSpec{2, 8, 3.0});
  for (std::size_t i = 0; i < f.samples.size(); ++i)
    f.samples[i] = cplx(std::sin(1.0 + i), std::nextafter(static_cast<double>(i), 0.0));
  std::stringstream s;
  write_snapshot(s, Snapshot{f, 0.07, 0.125});
  const Snapshot back = read_snapshot(s);
  CHECK(back.eps == 0.07);
  CHECK(back.time == 0.125);
  CHECK(back.field.grid.points == 8);
  CHECK(back.field.grid.half_width == 3.0);
  CHECK(back.field.samples == f.samples);

  std::stringstream junk("NLSX garbage");
  CHECK_THROWS_AS(read_snapshot(junk), IoError);
}

TEST_CASE("free transport run tracks the exact soliton") {
  fs::remove_all(kOut);
  const auto cfg = free_config();
  const RunResult a = run_single(cfg, 0.1, 0.5);
  REQUIRE(a.rows.size() == 3);
  CHECK(a.mass == doctest::Approx(oracle::ground_mass_1d_cubic()).epsilon(1e-10));
  CHECK(a.mass_drift < 1e-12);
  for (const auto& r : a.rows) {
    CHECK(r.fit_residual <= 1e-4 * std::sqrt(r.h1eps));
    CHECK(r.fit_center[0] == doctest::Approx(-1.0 + 0.5 * r.t).epsilon(1e-6));
    CHECK(r.split_residual < 1e-6);
  }
  CHECK(a.max_shift_w < 1e-4);
  CHECK_FALSE(a.stopped_at.has_value());
  CHECK(a.kinetic_bound_ok);
  CHECK(a.internal_bound_ok);
  CHECK(a.momentum_law_residual < 1e-6);
  CHECK(a.chi_radius == doctest::Approx(2.0));

  // identical input, identical bits
  const RunResult b = run_single(cfg, 0.1, 0.5);
  CHECK(rows_text(a) == rows_text(b));

  const auto paths = emit_run(kOut, cfg, a);
  for (const auto& p : paths) CHECK(fs::exists(p));
  const auto parsed = read_rows_csv(kOut / (run_stem(a) + ".csv"));
  CHECK(parsed.rows == a.rows);
}

TEST_CASE("run errors carry the config hash") {
  auto cfg = free_config();
  cfg.amplitude = 1.0;
  cfg.x0 = Vec{4.0};
  cfg.xi0 = Vec{-0.1};
  cfg.rho = 3.0;
  try {
    run_single(cfg, 0.1, 0.5);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(cfg.hash_hex()) != std::string::npos);
    CHECK(msg.find("(C3)") != std::string::npos);
  }
  cfg = free_config();
  cfg.T = 30.0;  // the soliton reaches the boundary
  CHECK_THROWS_AS(run_single(cfg, 0.1, 0.5), ConfigError);
}

TEST_CASE("sweeps: serial and threaded agree, bad appendix sets are rejected") {
  const auto cfg = free_config();
  const auto serial = run_epsilon_scaling(cfg, 1);
  const auto threaded = run_epsilon_scaling(cfg, 3);
  REQUIRE(serial.runs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(rows_text(serial.runs[i]) == rows_text(threaded.runs[i]));
  CHECK(serial.report.exponent == threaded.report.exponent);
  // exact solutions leave only the fit floor
  CHECK(serial.report.below_floor);

  auto bad = cfg;
  bad.amplitude = 1.0;
  bad.delta_list = {0.5, 1e-2, 1e-4};
  CHECK_THROWS_AS(run_appendix_scaling(bad), ConfigError);
  CHECK_THROWS_AS(run_epsilon_scaling(parse_config("solver.eps = 0.1, 0.05")), ConfigError);

  auto coupled = cfg;
  coupled.delta_exponent = 0.5;
  const auto pairs = appendix_pairs(coupled);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[1].second == doctest::Approx(std::sqrt(0.1)));
}

TEST_CASE("hypothesis report") {
  const double eps = 0.1;
  const GridSpec sim{1, 2048, 10.0};
  const auto R = solve_ground_state(sim.scaled(1.0 / eps), 1.0, 1e-11, 20000);
  const PotentialModel flat{1.0, 0.0, 0.5, 0.5};
  const auto v = build_initial_datum(R, flat, Vec{2.0}, Vec{0.3}, eps);
  const auto rep = check_hypotheses(flat, R, Vec{2.0}, Vec{0.3}, eps, std::nullopt, v);
  CHECK(rep.gamma < 1e-20);
  CHECK(rep.c1);
  CHECK(rep.c4);
  CHECK(rep.potential_mass == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rep.closest.status != LevelSet::bounded);
  CHECK(rep.threshold_exponent == doctest::Approx(17.5 / 0.5));

  const PotentialModel m{1.0, 1.0, 0.5, 0.5};
  const auto w = build_initial_datum(R, m, Vec{4.0}, Vec{-0.1}, eps, 0.05);
  const auto rw = check_hypotheses(m, R, Vec{4.0}, Vec{-0.1}, eps, 0.05, w);
  CHECK(rw.v1);
  CHECK(rw.v2);
  CHECK(rw.v3);
  CHECK(rw.c3);
  CHECK(rw.c4);
  CHECK(rw.closest.status == LevelSet::bounded);
  CHECK(rw.closest.radius == doctest::Approx(3.92).epsilon(0.01));
  CHECK(rw.potential_mass > 0.0);
}
