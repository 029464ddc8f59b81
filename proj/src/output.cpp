#include "nlslab/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nlslab/error.hpp"

namespace nlslab {
namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void indexed(std::vector<std::string>& h, const char* stem, std::size_t dim) {
  for (std::size_t i = 1; i <= dim; ++i) h.push_back(std::string(stem) + "_" + std::to_string(i));
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void check_written(std::ostream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::vector<std::string> csv_header(std::size_t dim) {
  std::vector<std::string> h{"t", "mass"};
  indexed(h, "P", dim);
  for (const char* c : {"E_total", "J", "K", "h1eps"}) h.emplace_back(c);
  indexed(h, "eta1", dim);
  h.emplace_back("eta2");
  h.emplace_back("eta2_tilde");
  indexed(h, "eta3", dim);
  h.emplace_back("eta_total");
  h.emplace_back("split_resid");
  indexed(h, "fit_center", dim);
  for (const char* c : {"fit_phase0", "fit_residual", "shift_w"}) h.emplace_back(c);
  return h;
}

void write_rows_csv(std::ostream& out, std::size_t dim, const std::vector<ObservableRow>& rows) {
  const auto header = csv_header(dim);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const ObservableRow& r : rows) {
    std::vector<double> v{r.t, r.mass};
    auto vec = [&](const Vec& x) {
      if (x.size() != dim) throw DomainError("row vector dimension does not match the CSV dimension");
      v.insert(v.end(), x.begin(), x.end());
    };
    vec(r.momentum);
    v.insert(v.end(), {r.energy_total, r.energy_internal, r.energy_kinetic, r.h1eps});
    vec(r.eta1);
    v.insert(v.end(), {r.eta2, r.eta2_tilde});
    vec(r.eta3);
    v.insert(v.end(), {r.eta_total, r.split_residual});
    vec(r.fit_center);
    v.insert(v.end(), {r.fit_phase0, r.fit_residual, r.shift_w});
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << num(v[i]);
    out << '\n';
  }
}

void write_rows_csv(const std::filesystem::path& path, std::size_t dim, const std::vector<ObservableRow>& rows) {
  auto out = open_out(path);
  write_rows_csv(out, dim, rows);
  check_written(out, path);
}

ParsedRows read_rows_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw IoError(origin + ": empty file, expected a header");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  const auto dim = static_cast<std::size_t>(std::count_if(cols.begin(), cols.end(), [](const std::string& c) {
    return c.rfind("P_", 0) == 0;
  }));
  if (dim < 1 || dim > kMaxDim || cols != csv_header(dim)) throw IoError(origin + ": unrecognized CSV header");

  ParsedRows out;
  out.dim = dim;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v;
    const char* p = line.c_str();
    while (*p) {
      char* end = nullptr;
      v.push_back(std::strtod(p, &end));
      if (end == p) throw IoError(origin + ":" + std::to_string(lineno) + ": malformed number");
      p = end;
      if (*p == ',') ++p;
      else if (*p) throw IoError(origin + ":" + std::to_string(lineno) + ": unexpected character");
    }
    if (v.size() != cols.size())
      throw IoError(origin + ":" + std::to_string(lineno) + ": expected " + std::to_string(cols.size()) + " fields");
    std::size_t k = 0;
    auto vec = [&] {
      Vec x(dim);
      for (std::size_t i = 0; i < dim; ++i) x[i] = v[k++];
      return x;
    };
    ObservableRow r;
    r.t = v[k++];
    r.mass = v[k++];
    r.momentum = vec();
    r.energy_total = v[k++];
    r.energy_internal = v[k++];
    r.energy_kinetic = v[k++];
    r.h1eps = v[k++];
    r.eta1 = vec();
    r.eta2 = v[k++];
    r.eta2_tilde = v[k++];
    r.eta3 = vec();
    r.eta_total = v[k++];
    r.split_residual = v[k++];
    r.fit_center = vec();
    r.fit_phase0 = v[k++];
    r.fit_residual = v[k++];
    r.shift_w = v[k++];
    out.rows.push_back(r);
  }
  return out;
}

ParsedRows read_rows_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return read_rows_csv(in, path.string());
}

std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series) {
  constexpr double W = 720, H = 480, left = 80, right = 160, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto tx = [&](double x) { return spec.log_x ? std::log10(x) : x; };
  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0) && (!spec.log_y || y > 0);
  };

  double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
  for (const Series& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (usable(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-300) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return left + (tx(x) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(spec.title)
    << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    const double gx = left + pw * i / 4.0, gy = top + ph * (1.0 - i / 4.0);
    const double lx = spec.log_x ? std::pow(10.0, fx) : fx, ly = spec.log_y ? std::pow(10.0, fy) : fy;
    o << "<line x1=\"" << gx << "\" y1=\"" << top + ph << "\" x2=\"" << gx << "\" y2=\"" << top + ph + 5
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << gx << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << short_num(lx)
      << "</text>\n";
    o << "<line x1=\"" << left - 5 << "\" y1=\"" << gy << "\" x2=\"" << left << "\" y2=\"" << gy
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << left - 8 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">" << short_num(ly)
      << "</text>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
    << escape(spec.x_label) << (spec.log_x ? " (log)" : "") << "</text>\n";
  o << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(spec.y_label) << (spec.log_y ? " (log)" : "") << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 6];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(series[s].x.size(), series[s].y.size()); ++i)
      if (usable(series[s].x[i], series[s].y[i])) o << px(series[s].x[i]) << ',' << py(series[s].y[i]) << ' ';
    o << "\"/>\n";
    if (spec.markers)
      for (std::size_t i = 0; i < std::min(series[s].x.size(), series[s].y.size()); ++i)
        if (usable(series[s].x[i], series[s].y[i]))
          o << "<circle cx=\"" << px(series[s].x[i]) << "\" cy=\"" << py(series[s].y[i]) << "\" r=\"3\" fill=\""
            << color << "\"/>\n";
    const double ly = top + 10 + 18.0 * static_cast<double>(s);
    o << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 32 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly + 4 << "\">" << escape(series[s].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  check_written(out, path);
}

std::string run_stem(const RunResult& run) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "run_eps%.6g_delta%.6g", run.eps, run.delta);
  return buf;
}

std::string hypothesis_summary(const HypothesisReport& rep) {
  auto flag = [](bool b) { return b ? "pass" : "FAIL"; };
  std::ostringstream o;
  o << "hypotheses: V1 " << flag(rep.v1) << ", V2 " << flag(rep.v2) << ", V3 " << flag(rep.v3) << "; C1 "
    << flag(rep.c1) << ", C2 " << flag(rep.c2) << ", C3 " << flag(rep.c3) << ", C4 " << flag(rep.c4) << "\n";
  o << "smallness (exponent " << short_num(rep.threshold_exponent) << "): gamma " << flag(rep.small_gamma)
    << ", |xi0| " << flag(rep.small_velocity) << ", potential mass " << flag(rep.small_potential_mass) << "\n";
  o << "closest approach: ";
  switch (rep.closest.status) {
    case LevelSet::bounded: o << "delta(x0, xi0) = " << short_num(rep.closest.radius); break;
    case LevelSet::unbounded: o << "unbounded level set"; break;
    case LevelSet::no_barrier: o << "no barrier"; break;
  }
  o << ", H0 = " << short_num(rep.closest.hamiltonian) << "\n";
  o << "gamma = " << short_num(rep.gamma) << ", potential mass = " << short_num(rep.potential_mass) << "\n";
  for (const std::string& n : rep.notes) o << "note: " << n << "\n";
  return o.str();
}

std::string run_summary(const ExperimentConfig& cfg, const RunResult& run) {
  std::ostringstream o;
  o << kRegimeCaveat << "\n";
  o << "config hash " << run.config_hash << "\n";
  o << "eps = " << short_num(run.eps) << ", delta = " << short_num(run.delta) << ", dt = " << short_num(cfg.solver_for(run.eps).step_size())
    << ", T = " << short_num(cfg.T) << "\n";
  o << "m = " << short_num(run.mass) << ", ground energy = " << short_num(run.ground_energy) << "\n";
  o << "mu = " << short_num(run.mu) << ", chi radius M = " << short_num(run.chi_radius) << "\n";
  o << hypothesis_summary(run.hypotheses);
  o << "sup fit residual = " << short_num(run.sup_residual) << ", max shift_w = " << short_num(run.max_shift_w) << "\n";
  o << "stopping monitor: " << (run.stopped_at ? "triggered at t = " + short_num(*run.stopped_at) : "never triggered")
    << "\n";
  o << "mass drift = " << short_num(run.mass_drift) << ", momentum law residual = " << short_num(run.momentum_law_residual)
    << "\n";
  o << "K >= m V0: " << (run.kinetic_bound_ok ? "yes" : "NO") << ", J >= ground energy: "
    << (run.internal_bound_ok ? "yes" : "NO") << ", energy split reliable: "
    << (run.energy_split_reliable ? "yes" : "NO") << "\n";
  o << "hamiltonian drift = " << short_num(run.trajectory.hamiltonian_drift()) << ", min |x| = "
    << short_num(run.trajectory.min_radius) << ", max |xi| = " << short_num(run.trajectory.max_speed) << "\n";
  for (const std::string& a : run.annotations) o << "annotation: " << a << "\n";
  return o.str();
}

std::vector<std::filesystem::path> emit_run(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                                            const RunResult& run) {
  const std::string stem = run_stem(run);
  std::vector<std::filesystem::path> written;
  const auto csv = dir / (stem + ".csv");
  write_rows_csv(csv, cfg.dim, run.rows);
  written.push_back(csv);

  const auto traj = dir / (stem + "_trajectory.csv");
  {
    auto out = open_out(traj);
    write_trajectory_csv(out, run.trajectory);
    check_written(out, traj);
  }
  written.push_back(traj);

  const auto summary = dir / (stem + "_summary.txt");
  write_text(summary, run_summary(cfg, run));
  written.push_back(summary);

  if (cfg.plots) {
    Series res{"fit residual", {}, {}}, eta{"eta total", {}, {}};
    for (const ObservableRow& r : run.rows) {
      res.x.push_back(r.t);
      res.y.push_back(r.fit_residual);
      eta.x.push_back(r.t);
      eta.y.push_back(r.eta_total);
    }
    const auto svg = dir / (stem + "_residual.svg");
    write_text(svg, render_svg({"eps = " + short_num(run.eps) + ", delta = " + short_num(run.delta), "t",
                                "H1_eps residual", false, true, false},
                               {res, eta}));
    written.push_back(svg);
  }
  return written;
}

std::vector<std::filesystem::path> emit_sweep(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                                              const SweepResult& sweep, const std::string& kind) {
  std::vector<std::filesystem::path> written;
  for (const RunResult& r : sweep.runs) {
    const auto w = emit_run(dir, cfg, r);
    written.insert(written.end(), w.begin(), w.end());
  }
  const bool appendix = !sweep.proxy.empty();

  const auto csv = dir / "scaling.csv";
  {
    auto out = open_out(csv);
    out << "eps,delta,phi,proxy,sup_residual,max_shift_w,stopped,included\n";
    for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
      const RunResult& r = sweep.runs[i];
      out << num(r.eps) << ',' << num(r.delta) << ',' << (appendix ? num(sweep.phi[i]) : "nan") << ','
          << (appendix ? num(sweep.proxy[i]) : "nan") << ',' << num(r.sup_residual) << ',' << num(r.max_shift_w)
          << ',' << (r.stopped_at ? num(*r.stopped_at) : "none") << ','
          << (sweep.report.included[i] ? "yes" : "no") << '\n';
    }
    check_written(out, csv);
  }
  written.push_back(csv);

  std::ostringstream rep;
  rep << kRegimeCaveat << "\n";
  rep << kind << " sweep, config hash " << cfg.hash_hex() << "\n";
  rep << "abscissa: " << (appendix ? "eps * phi(delta)^2" : "eps") << "\n";
  rep << "fitted exponent = " << num(sweep.report.exponent) << ", intercept (log C, measured) = "
      << num(sweep.report.intercept) << ", R^2 = " << num(sweep.report.r_squared) << "\n";
  for (const std::string& f : sweep.report.flags) rep << "flag: " << f << "\n";
  for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
    const RunResult& r = sweep.runs[i];
    rep << "eps " << short_num(r.eps) << ", delta " << short_num(r.delta);
    if (appendix) rep << ", phi " << short_num(sweep.phi[i]) << ", proxy " << short_num(sweep.proxy[i]);
    rep << ": sup residual " << short_num(r.sup_residual) << ", max shift_w " << short_num(r.max_shift_w)
        << ", monitor " << (r.stopped_at ? "triggered" : "quiet") << "\n";
  }
  const auto report = dir / "report.txt";
  write_text(report, rep.str());
  written.push_back(report);

  if (cfg.plots) {
    Series measured{"sup residual", sweep.report.x, sweep.report.y};
    std::vector<Series> panels{measured};
    if (std::isfinite(sweep.report.exponent)) {
      Series fit{"fit, slope " + short_num(sweep.report.exponent), sweep.report.x, {}};
      for (double x : sweep.report.x) fit.y.push_back(std::exp(sweep.report.intercept) * std::pow(x, sweep.report.exponent));
      panels.push_back(fit);
    }
    const auto svg = dir / "scaling.svg";
    write_text(svg, render_svg({kind + " scaling", appendix ? "eps phi(delta)^2" : "eps", "sup residual", true, true,
                                true},
                               panels));
    written.push_back(svg);
  }
  return written;
}

}  // namespace nlslab
