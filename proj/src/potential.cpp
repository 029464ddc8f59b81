#include "nlslab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlslab/error.hpp"

namespace nlslab {

void PotentialModel::validate() const {
  if (!(v0 > 0.0)) throw DomainError("potential.v0 must be positive");
  if (!(amplitude >= 0.0)) throw DomainError("potential.amplitude must be non-negative");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("potential.beta must lie in (0, 1)");
  if (!(delta >= 0.0)) throw DomainError("potential.delta must be non-negative");
}

double PotentialModel::radial(double r) const {
  if (amplitude == 0.0) return v0;
  const double q = delta * delta + r * r;
  if (q == 0.0) throw DomainError("potential evaluated at the singularity x = 0");
  return v0 + amplitude * std::pow(q, -0.5 * beta);
}

double PotentialModel::radial_derivative(double r) const {
  if (amplitude == 0.0) return 0.0;
  const double q = delta * delta + r * r;
  if (q == 0.0) throw DomainError("potential gradient evaluated at the singularity x = 0");
  return -amplitude * beta * r * std::pow(q, -0.5 * beta - 1.0);
}

double evaluate(const PotentialModel& model, const Vec& x) { return model.radial(x.norm()); }

Vec gradient(const PotentialModel& model, const Vec& x) {
  Vec g(x.size());
  if (model.amplitude == 0.0) return g;
  const double q = model.delta * model.delta + x.norm2();
  if (q == 0.0) throw DomainError("potential gradient evaluated at the singularity x = 0");
  const double s = -model.amplitude * model.beta * std::pow(q, -0.5 * model.beta - 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = s * x[i];
  return g;
}

namespace {

// One term c * q^(-a-j) * x^gamma of a derivative of q^(-a), q = δ² + |x|².
struct Term {
  double coeff;
  int j;
  MultiIndex gamma;
};

std::vector<Term> differentiate(const std::vector<Term>& terms, double a, std::size_t axis) {
  std::vector<Term> out;
  out.reserve(2 * terms.size());
  for (const Term& t : terms) {
    Term chain = t;
    chain.coeff *= -2.0 * (a + t.j);
    chain.j += 1;
    chain.gamma[axis] += 1;
    out.push_back(chain);
    if (t.gamma[axis] > 0) {
      Term mono = t;
      mono.coeff *= t.gamma[axis];
      mono.gamma[axis] -= 1;
      out.push_back(mono);
    }
  }
  return out;
}

std::vector<Term> derivative_terms(const MultiIndex& alpha, double a) {
  std::vector<Term> terms{{1.0, 0, {0, 0, 0}}};
  for (std::size_t axis = 0; axis < kMaxDim; ++axis)
    for (int k = 0; k < alpha[axis]; ++k) terms = differentiate(terms, a, axis);
  return terms;
}

int order(const MultiIndex& alpha) { return alpha[0] + alpha[1] + alpha[2]; }

std::vector<Vec> probe_directions(std::size_t dim) {
  std::vector<Vec> dirs;
  // All non-zero vectors with entries in {-1, 0, 1}, normalized.
  int total = 1;
  for (std::size_t d = 0; d < dim; ++d) total *= 3;
  for (int code = 0; code < total; ++code) {
    Vec v(dim);
    int c = code;
    for (std::size_t d = 0; d < dim; ++d) {
      v[d] = static_cast<double>(c % 3) - 1.0;
      c /= 3;
    }
    const double n = v.norm();
    if (n > 0.0) dirs.push_back(v * (1.0 / n));
  }
  return dirs;
}

PhiEstimate phi_impl(const PotentialModel& model, double delta, std::size_t dim, bool exterior) {
  if (!(delta > 0.0)) throw DomainError("phi requires delta > 0");
  if (dim < 1 || dim > kMaxDim) throw DomainError("phi: dimension must be 1..3");
  PotentialModel member = model;
  member.delta = exterior ? 0.0 : delta;

  PhiEstimate est;
  est.analytic_bound = model.v0 + model.amplitude * std::pow(delta, -model.beta);
  for (int k = 1; k <= 3; ++k) {
    const auto all = multi_indices(dim, k);
    const auto count =
        static_cast<double>(std::count_if(all.begin(), all.end(), [k](const MultiIndex& a) { return order(a) == k; }));
    est.analytic_bound += count * derivative_constant(model.beta, k) * model.amplitude *
                          std::pow(delta, -model.beta - static_cast<double>(k));
  }

  // Log-spaced radii; the truncated member also gets the origin.
  std::vector<double> radii;
  const double r_lo = exterior ? delta : delta * 1e-3;
  const double r_hi = std::max(delta, 1.0) * 1e3;
  const int samples = 4000;
  for (int i = 0; i <= samples; ++i)
    radii.push_back(r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / samples));
  if (!exterior) radii.push_back(0.0);

  const auto dirs = probe_directions(dim);
  for (const MultiIndex& alpha : multi_indices(dim, 3)) {
    double sup = 0.0;
    for (const Vec& e : dirs)
      for (double r : radii) sup = std::max(sup, std::abs(partial_derivative(member, alpha, e * r)));
    est.sampled += sup;
  }
  if (est.sampled > est.analytic_bound * (1.0 + 1e-12))
    throw NumericalError("phi: sampled sup exceeds analytic majorant (" + std::to_string(est.sampled) +
                         " > " + std::to_string(est.analytic_bound) + ")");
  return est;
}

}  // namespace

double partial_derivative(const PotentialModel& model, const MultiIndex& alpha, const Vec& x) {
  const int k = order(alpha);
  for (std::size_t d = x.size(); d < kMaxDim; ++d)
    if (alpha[d] != 0) throw DomainError("multi-index exceeds point dimension");
  if (k == 0) return evaluate(model, x);
  if (model.amplitude == 0.0) return 0.0;
  const double q = model.delta * model.delta + x.norm2();
  if (q == 0.0) throw DomainError("potential derivative evaluated at the singularity x = 0");
  const double a = 0.5 * model.beta;
  double s = 0.0;
  for (const Term& t : derivative_terms(alpha, a)) {
    double mono = 1.0;
    for (std::size_t d = 0; d < x.size(); ++d) mono *= std::pow(x[d], t.gamma[d]);
    s += t.coeff * std::pow(q, -a - t.j) * mono;
  }
  return model.amplitude * s;
}

std::vector<MultiIndex> multi_indices(std::size_t dim, int max_order) {
  std::vector<MultiIndex> out;
  const int hi0 = max_order;
  const int hi1 = dim >= 2 ? max_order : 0;
  const int hi2 = dim >= 3 ? max_order : 0;
  for (int k = 0; k <= max_order; ++k)
    for (int a = 0; a <= hi0; ++a)
      for (int b = 0; b <= hi1; ++b)
        for (int c = 0; c <= hi2; ++c)
          if (a + b + c == k) out.push_back({a, b, c});
  return out;
}

double derivative_constant(double beta, int order_k) {
  // Each differentiation multiplies the absolute coefficient sum of the
  // terms c q^(-a-j) x^γ (j, |γ| ≤ l after l steps) by at most 2(a+l) + l.
  double c = 1.0;
  for (int l = 0; l < order_k; ++l) c *= beta + 3.0 * l;
  return c;
}

PhiEstimate phi_of_delta(const PotentialModel& model, double delta, std::size_t dim) {
  return phi_impl(model, delta, dim, false);
}

PhiEstimate phi_exterior(const PotentialModel& model, double delta, std::size_t dim) {
  return phi_impl(model, delta, dim, true);
}

SampledPotential sample_on_grid(const PotentialModel& model, const GridSpec& grid) {
  SampledPotential out;
  out.values.resize(grid.size());
  if (model.singular()) {
    out.cap_radius = grid.spacing();
    out.cap_value = model.radial(out.cap_radius);
  }
  for_each_point(grid, [&](std::size_t i, const Vec& x) {
    const double r = x.norm();
    if (model.singular() && r < out.cap_radius) {
      out.values[i] = out.cap_value;
      ++out.capped_points;
    } else {
      out.values[i] = model.radial(r);
    }
  });
  return out;
}

ClosestApproach closest_approach(const PotentialModel& model, const Vec& x0, const Vec& xi0) {
  ClosestApproach out;
  const double r0 = x0.norm();
  if (r0 == 0.0 && model.singular()) throw DomainError("closest_approach: x0 at the singularity");
  out.hamiltonian = 0.5 * xi0.norm2() + model.radial(r0);
  if (model.amplitude == 0.0) {
    out.status = LevelSet::unbounded;
    return out;
  }
  if (!model.singular() && out.hamiltonian >= model.radial(0.0)) {
    out.status = LevelSet::no_barrier;
    return out;
  }
  // V is strictly decreasing in r: bisect V(r) = H on (0, r0].
  double lo = 0.0, hi = r0;
  while (hi - lo > 1e-12 * std::max(1.0, r0)) {
    const double mid = 0.5 * (lo + hi);
    const double v = (mid == 0.0) ? HUGE_VAL : model.radial(mid);
    if (v > out.hamiltonian) lo = mid;
    else hi = mid;
  }
  out.radius = 0.5 * (lo + hi);
  return out;
}

std::vector<double> integrability_increments(const PotentialModel& model, std::size_t dim, int shells) {
  const double n = static_cast<double>(dim);
  // |S^{N-1}|: 2, 2π, 4π.
  const double sphere = dim == 1 ? 2.0 : (dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi);
  auto integrand = [&](double r) {
    const double excess = model.radial(r) - model.v0;
    if (excess <= 0.0) return 0.0;
    const double g = model.radial_derivative(r);
    return sphere * std::pow(r, n - 1.0) * std::pow(g * g / std::sqrt(excess), n);
  };
  std::vector<double> inc;
  for (int k = 0; k < shells; ++k) {
    const double a = std::ldexp(1.0, k), b = 2.0 * a;
    const int m = 512;  // composite Simpson, even panel count
    const double h = (b - a) / m;
    double s = integrand(a) + integrand(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * integrand(a + i * h);
    inc.push_back(s * h / 3.0);
  }
  return inc;
}

}  // namespace nlslab
