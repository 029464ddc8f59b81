#include "nlslab/newton.hpp"

#include <cstdio>

namespace nlslab {

PhasePoint state_at(const ClassicalTrajectory& traj, double t) {
  const auto& s = traj.samples;
  if (s.empty()) throw DomainError("state_at: empty trajectory");
  if (t <= s.front().t) return s.front();
  if (t >= s.back().t) return s.back();
  const double h = (s.back().t - s.front().t) / static_cast<double>(s.size() - 1);
  auto k = static_cast<std::size_t>((t - s.front().t) / h);
  k = std::min(k, s.size() - 2);
  const double w = (t - s[k].t) / (s[k + 1].t - s[k].t);
  if (w <= 1e-12) return s[k];
  if (w >= 1.0 - 1e-12) return s[k + 1];
  PhasePoint out;
  out.x = (1.0 - w) * s[k].x + w * s[k + 1].x;
  out.xi = (1.0 - w) * s[k].xi + w * s[k + 1].xi;
  out.t = t;
  return out;
}

void write_trajectory_csv(std::ostream& out, const ClassicalTrajectory& traj) {
  if (traj.samples.empty()) return;
  const std::size_t n = traj.samples.front().x.size();
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",xi_" << i;
  out << ",H\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const PhasePoint& s = traj.samples[k];
    put(s.t);
    for (double v : s.x) out << ',', put(v);
    for (double v : s.xi) out << ',', put(v);
    out << ',';
    put(traj.hamiltonian[k]);
    out << '\n';
  }
}

}  // namespace nlslab
