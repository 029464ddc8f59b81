#include "nlslab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "nlslab/error.hpp"

namespace nlslab {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

bool is_none(const std::string& v) { return v == "none" || v.empty(); }

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string list(const auto& xs) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : ", ") + num(x);
  return out;
}

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "none";
  if constexpr (std::is_same_v<T, std::filesystem::path>) return v->string();
  else return num(*v);
}

struct Key {
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<Key>& keys() {
  using C = ExperimentConfig;
  using S = const std::string&;
  static const std::vector<Key> table = {
      {"grid.dim", [](C& c, S v) { c.dim = static_cast<std::size_t>(to_long("grid.dim", v)); },
       [](const C& c) { return std::to_string(c.dim); }},
      {"grid.points", [](C& c, S v) { c.points = static_cast<std::size_t>(to_long("grid.points", v)); },
       [](const C& c) { return std::to_string(c.points); }},
      {"grid.half_width", [](C& c, S v) { c.half_width = to_double("grid.half_width", v); },
       [](const C& c) { return num(c.half_width); }},
      {"solver.eps", [](C& c, S v) { c.eps_list = to_list("solver.eps", v); },
       [](const C& c) { return list(c.eps_list); }},
      {"solver.p", [](C& c, S v) { c.p = to_double("solver.p", v); }, [](const C& c) { return num(c.p); }},
      {"solver.dt_scale", [](C& c, S v) { c.dt_scale = to_double("solver.dt_scale", v); },
       [](const C& c) { return num(c.dt_scale); }},
      {"solver.dt",
       [](C& c, S v) { c.dt = is_none(v) ? std::nullopt : std::optional(to_double("solver.dt", v)); },
       [](const C& c) { return opt(c.dt); }},
      {"solver.T", [](C& c, S v) { c.T = to_double("solver.T", v); }, [](const C& c) { return num(c.T); }},
      {"solver.gs_tol", [](C& c, S v) { c.gs_tol = to_double("solver.gs_tol", v); },
       [](const C& c) { return num(c.gs_tol); }},
      {"solver.gs_max_iter", [](C& c, S v) { c.gs_max_iter = static_cast<int>(to_long("solver.gs_max_iter", v)); },
       [](const C& c) { return std::to_string(c.gs_max_iter); }},
      {"potential.v0", [](C& c, S v) { c.v0 = to_double("potential.v0", v); }, [](const C& c) { return num(c.v0); }},
      {"potential.amplitude", [](C& c, S v) { c.amplitude = to_double("potential.amplitude", v); },
       [](const C& c) { return num(c.amplitude); }},
      {"potential.beta", [](C& c, S v) { c.beta = to_double("potential.beta", v); },
       [](const C& c) { return num(c.beta); }},
      {"potential.delta", [](C& c, S v) { c.delta_list = to_list("potential.delta", v); },
       [](const C& c) { return list(c.delta_list); }},
      {"initial.x0",
       [](C& c, S v) {
         const auto xs = to_list("initial.x0", v);
         if (xs.size() > kMaxDim) throw ConfigError("initial.x0: more than 3 components");
         c.x0 = Vec(xs.size());
         for (std::size_t i = 0; i < xs.size(); ++i) c.x0[i] = xs[i];
       },
       [](const C& c) { return list(c.x0); }},
      {"initial.xi0",
       [](C& c, S v) {
         const auto xs = to_list("initial.xi0", v);
         if (xs.size() > kMaxDim) throw ConfigError("initial.xi0: more than 3 components");
         c.xi0 = Vec(xs.size());
         for (std::size_t i = 0; i < xs.size(); ++i) c.xi0[i] = xs[i];
       },
       [](const C& c) { return list(c.xi0); }},
      {"initial.rho",
       [](C& c, S v) { c.rho = is_none(v) ? std::nullopt : std::optional(to_double("initial.rho", v)); },
       [](const C& c) { return opt(c.rho); }},
      {"diagnostics.mu",
       [](C& c, S v) { c.mu = is_none(v) ? std::nullopt : std::optional(to_double("diagnostics.mu", v)); },
       [](const C& c) { return opt(c.mu); }},
      {"diagnostics.snapshot_stride",
       [](C& c, S v) { c.snapshot_stride = to_long("diagnostics.snapshot_stride", v); },
       [](const C& c) { return std::to_string(c.snapshot_stride); }},
      {"diagnostics.vacuum_floor", [](C& c, S v) { c.vacuum_floor = to_double("diagnostics.vacuum_floor", v); },
       [](const C& c) { return num(c.vacuum_floor); }},
      {"diagnostics.chi_radius",
       [](C& c, S v) {
         c.chi_radius = is_none(v) ? std::nullopt : std::optional(to_double("diagnostics.chi_radius", v));
       },
       [](const C& c) { return opt(c.chi_radius); }},
      {"diagnostics.solver_tol", [](C& c, S v) { c.solver_tol = to_double("diagnostics.solver_tol", v); },
       [](const C& c) { return num(c.solver_tol); }},
      {"diagnostics.fit", [](C& c, S v) { c.fit = to_bool("diagnostics.fit", v); },
       [](const C& c) { return std::string(c.fit ? "true" : "false"); }},
      {"output.dir", [](C& c, S v) { c.out_dir = v; }, [](const C& c) { return c.out_dir.string(); }},
      {"output.cache_dir",
       [](C& c, S v) {
         c.cache_dir = is_none(v) ? std::nullopt : std::optional<std::filesystem::path>(v);
       },
       [](const C& c) { return opt(c.cache_dir); }},
      {"output.snapshots", [](C& c, S v) { c.snapshots = to_bool("output.snapshots", v); },
       [](const C& c) { return std::string(c.snapshots ? "true" : "false"); }},
      {"output.plots", [](C& c, S v) { c.plots = to_bool("output.plots", v); },
       [](const C& c) { return std::string(c.plots ? "true" : "false"); }},
      {"appendix.delta_exponent",
       [](C& c, S v) {
         c.delta_exponent =
             is_none(v) ? std::nullopt : std::optional(to_double("appendix.delta_exponent", v));
       },
       [](const C& c) { return opt(c.delta_exponent); }},
  };
  return table;
}

void assign(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const Key& k : keys())
    if (key == k.name) {
      k.set(cfg, value);
      return;
    }
  throw ConfigError("unknown configuration key '" + key + "'");
}

}  // namespace

SolverConfig ExperimentConfig::solver_for(double eps) const {
  return SolverConfig{eps, p, step_for(eps), T, snapshot_stride};
}

PotentialModel ExperimentConfig::model_for(double delta) const { return PotentialModel{v0, amplitude, beta, delta}; }

void ExperimentConfig::validate() const {
  grid().validate();
  if (eps_list.empty()) throw ConfigError("solver.eps: list must not be empty");
  if (delta_list.empty()) throw ConfigError("potential.delta: list must not be empty");
  if (!(p > 0.0 && p < 2.0 / static_cast<double>(dim)))
    throw ConfigError("solver.p must lie in (0, 2/N) for the ground state to exist");
  if (!(dt_scale > 0.0)) throw ConfigError("solver.dt_scale must be positive");
  if (!(T > 0.0)) throw ConfigError("solver.T must be positive");
  if (!(gs_tol > 0.0) || gs_max_iter < 1) throw ConfigError("solver.gs_tol/gs_max_iter must be positive");
  if (snapshot_stride < 1) throw ConfigError("diagnostics.snapshot_stride must be >= 1");
  if (!(vacuum_floor >= 0.0)) throw ConfigError("diagnostics.vacuum_floor must be non-negative");
  if (!(solver_tol > 0.0)) throw ConfigError("diagnostics.solver_tol must be positive");
  if (mu && !(*mu > 0.0)) throw ConfigError("diagnostics.mu must be positive");
  if (chi_radius && !(*chi_radius > 0.0)) throw ConfigError("diagnostics.chi_radius must be positive");
  if (x0.size() != dim || xi0.size() != dim) throw ConfigError("initial.x0/initial.xi0 must have grid.dim components");
  if (x0.norm() == 0.0) throw ConfigError("initial.x0 must not be the origin");
  if (rho && !(*rho > 0.0)) throw ConfigError("(C3) violated: initial.rho must be positive");
  for (double d : delta_list) {
    if (!(d >= 0.0)) throw ConfigError("potential.delta entries must be >= 0");
    try {
      model_for(d).validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("potential: ") + e.what());
    }
  }
  const double h = grid().spacing();
  for (double eps : eps_list) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("solver.eps entries must lie in (0, 1]");
    if (h > eps / 4.0)
      throw ConfigError("grid spacing " + num(h) + " does not resolve eps = " + num(eps) + " (need spacing <= eps/4)");
    if (step_for(eps) > eps * dt_scale * (1.0 + 1e-12))
      throw ConfigError("solver.dt exceeds eps * dt_scale for eps = " + num(eps));
    if (step_for(eps) > T) throw ConfigError("time step exceeds solver.T");
  }
  if (delta_exponent && !(*delta_exponent > 0.0)) throw ConfigError("appendix.delta_exponent must be positive");
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const Key& k : keys()) out += std::string(k.name) + " = " + k.get(*this) + "\n";
  return out;
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : to_text()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string ExperimentConfig::hash_hex() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    assign(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  assign(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

}  // namespace nlslab
