// Command-line front end: groundstate, run, sweep-eps, sweep-appendix, check, plot.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nlslab/config.hpp"
#include "nlslab/error.hpp"
#include "nlslab/groundstate.hpp"
#include "nlslab/harness.hpp"
#include "nlslab/hypotheses.hpp"
#include "nlslab/nls_solver.hpp"
#include "nlslab/output.hpp"

namespace {

using namespace nlslab;

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

struct Common {
  std::string config;
  std::string out;
  unsigned threads = 1;
  long stride = 0;
  std::vector<std::string> overrides;
  std::string input;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "experiment config file (key = value)");
  sub->add_option("--out", c.out, "output directory (overrides output.dir)");
  sub->add_option("--threads", c.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  sub->add_option("--snapshot-stride", c.stride, "steps between observed snapshots")->check(CLI::PositiveNumber);
  sub->add_option("--override", c.overrides, "key=value, repeatable");
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  for (const auto& o : c.overrides) apply_override(cfg, o);
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.stride > 0) cfg.snapshot_stride = c.stride;
  cfg.validate();
  return cfg;
}

void print_paths(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::printf("wrote %s\n", p.string().c_str());
}

int cmd_groundstate(const Common& c) {
  const ExperimentConfig cfg = load(c);
  for (double eps : cfg.eps_list) {
    const GridSpec unit = cfg.grid().scaled(1.0 / eps);
    const auto R = cached_ground_state(cfg.cache(), unit, cfg.p, cfg.gs_tol, cfg.gs_max_iter);
    std::printf("eps %.6g: unit half-width %.6g, spacing %.6g, m = %.12g, energy = %.12g, residual = %.3e, "
                "decay rate = %.6g\n",
                eps, unit.half_width, unit.spacing(), R.mass, R.energy, R.residual_inf, R.decay_rate);
    char name[64];
    std::snprintf(name, sizeof name, "groundstate_eps%.6g.csv", eps);
    std::ostringstream o;
    for (std::size_t d = 0; d < unit.dim; ++d) o << "x_" << d + 1 << ',';
    o << "R\n";
    for_each_point(unit, [&](std::size_t i, const Vec& x) {
      char buf[40];
      for (double v : x) {
        std::snprintf(buf, sizeof buf, "%.17g,", v);
        o << buf;
      }
      std::snprintf(buf, sizeof buf, "%.17g\n", R.field.samples[i].real());
      o << buf;
    });
    write_text(cfg.out_dir / name, o.str());
    std::printf("wrote %s\n", (cfg.out_dir / name).string().c_str());
  }
  return kOk;
}

int cmd_run(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const double eps = cfg.eps_list.front(), delta = cfg.delta_list.front();
  RunOptions opts;
  if (cfg.snapshots) {
    char dir[64];
    std::snprintf(dir, sizeof dir, "snapshots_eps%.6g_delta%.6g", eps, delta);
    opts.snapshot_dir = cfg.out_dir / dir;
  }
  const RunResult run = run_single(cfg, eps, delta, opts);
  std::fputs(run_summary(cfg, run).c_str(), stdout);
  print_paths(emit_run(cfg.out_dir, cfg, run));
  return kOk;
}

int cmd_sweep(const Common& c, bool appendix) {
  const ExperimentConfig cfg = load(c);
  const SweepResult sweep = appendix ? run_appendix_scaling(cfg, c.threads) : run_epsilon_scaling(cfg, c.threads);
  const auto paths = emit_sweep(cfg.out_dir, cfg, sweep, appendix ? "appendix" : "epsilon");
  std::ifstream rep(cfg.out_dir / "report.txt");
  std::cout << rep.rdbuf();
  print_paths(paths);
  return kOk;
}

int cmd_check(const Common& c) {
  const ExperimentConfig cfg = load(c);
  std::puts(kRegimeCaveat);
  for (double eps : cfg.eps_list)
    for (double delta : cfg.delta_list) {
      const auto R = cached_ground_state(cfg.cache(), cfg.grid().scaled(1.0 / eps), cfg.p, cfg.gs_tol,
                                         cfg.gs_max_iter);
      const PotentialModel model = cfg.model_for(delta);
      const WaveField v = build_initial_datum(R, model, cfg.x0, cfg.xi0, eps, cfg.rho);
      std::printf("eps %.6g, delta %.6g\n", eps, delta);
      std::fputs(hypothesis_summary(check_hypotheses(model, R, cfg.x0, cfg.xi0, eps, cfg.rho, v)).c_str(), stdout);
    }
  return kOk;
}

int cmd_plot(const Common& c) {
  if (c.input.empty()) throw ConfigError("plot needs --input <csv>");
  const std::filesystem::path in = c.input;
  const std::filesystem::path dir = c.out.empty() ? in.parent_path() : std::filesystem::path(c.out);
  std::ifstream f(in);
  if (!f) throw IoError("cannot read " + in.string());
  std::string header;
  std::getline(f, header);
  f.seekg(0);
  std::filesystem::path svg = dir / (in.stem().string() + ".svg");
  if (header.rfind("eps,delta,phi,proxy", 0) == 0) {
    Series eps_s{"sup residual vs eps", {}, {}}, proxy_s{"sup residual vs eps phi^2", {}, {}};
    std::string line;
    std::getline(f, line);
    while (std::getline(f, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (cells.size() < 5) throw IoError(in.string() + ": malformed scaling row");
      const double eps = std::stod(cells[0]), proxy = std::stod(cells[3]), sup = std::stod(cells[4]);
      eps_s.x.push_back(eps);
      eps_s.y.push_back(sup);
      if (std::isfinite(proxy)) {
        proxy_s.x.push_back(proxy);
        proxy_s.y.push_back(sup);
      }
    }
    std::vector<Series> s{eps_s};
    if (!proxy_s.x.empty()) s.push_back(proxy_s);
    write_text(svg, render_svg({"scaling", "abscissa", "sup residual", true, true, true}, s));
  } else {
    const ParsedRows rows = read_rows_csv(f, in.string());
    Series res{"fit residual", {}, {}}, eta{"eta total", {}, {}};
    for (const auto& r : rows.rows) {
      res.x.push_back(r.t);
      res.y.push_back(r.fit_residual);
      eta.x.push_back(r.t);
      eta.y.push_back(r.eta_total);
    }
    write_text(svg, render_svg({in.stem().string(), "t", "H1_eps residual", false, true, false}, {res, eta}));
  }
  std::printf("wrote %s\n", svg.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical NLS soliton dynamics experiments"};
  app.require_subcommand(1);
  Common c;
  auto* gs = app.add_subcommand("groundstate", "compute and cache the ground state for every eps");
  auto* run = app.add_subcommand("run", "single simulation at the first eps and delta");
  auto* se = app.add_subcommand("sweep-eps", "epsilon scaling sweep");
  auto* sa = app.add_subcommand("sweep-appendix", "coupled (eps, delta) scaling sweep");
  auto* ck = app.add_subcommand("check", "hypothesis report only");
  auto* pl = app.add_subcommand("plot", "re-render SVG from a CSV");
  for (auto* s : {gs, run, se, sa, ck, pl}) add_common(s, c);
  pl->add_option("--input", c.input, "rows CSV or scaling.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*gs) return cmd_groundstate(c);
    if (*run) return cmd_run(c);
    if (*se) return cmd_sweep(c, false);
    if (*sa) return cmd_sweep(c, true);
    if (*ck) return cmd_check(c);
    if (*pl) return cmd_plot(c);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  }
  return kOk;
}
