#include "pep/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pep/errors.hpp"

namespace pep {

namespace {

std::vector<double> centered_difference(const std::vector<double>& x,
                                        const std::vector<double>& f) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d.front() = (f[1] - f[0]) / (x[1] - x[0]);
  d.back() = (f[n - 1] - f[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t g = 1; g + 1 < n; ++g) {
    d[g] = (f[g + 1] - f[g - 1]) / (x[g + 1] - x[g - 1]);
  }
  return d;
}

}  // namespace

double FieldSlice::total_mass() const {
  double m = 0.0;
  for (std::size_t g = 0; g + 1 < x.size(); ++g) m += 0.5 * (rho[g] + rho[g + 1]) * (x[g + 1] - x[g]);
  for (const auto& a : atoms) m += a.mass;
  return m;
}

FieldSlice differentiate(const SolutionSlice& slice) {
  FieldSlice f;
  f.t = slice.t;
  f.x = slice.x;
  f.potentials = slice;
  const std::size_t n = slice.x.size();

  std::vector<double> r_ac(n), m_ac(n);
  std::size_t next = 0;
  double atom_mass = 0.0, atom_momentum = 0.0;
  for (std::size_t g = 0; g < n; ++g) {
    while (next < slice.atoms.size() && slice.atoms[next].position <= slice.x[g]) {
      atom_mass += slice.atoms[next].mass;
      atom_momentum += slice.atoms[next].momentum;
      ++next;
    }
    r_ac[g] = slice.R_smooth[g] - atom_mass;
    m_ac[g] = slice.M_smooth[g] - atom_momentum;
  }
  f.rho = centered_difference(slice.x, r_ac);
  for (double& r : f.rho) r = std::max(r, 0.0);
  f.m = centered_difference(slice.x, m_ac);

  const double length = n >= 2 ? slice.x.back() - slice.x.front() : 1.0;
  const double floor = 1e-12 * slice.total_mass / length;
  f.u.resize(n);
  for (std::size_t g = 0; g < n; ++g) {
    f.u[g] = f.rho[g] > floor ? f.m[g] / f.rho[g] : std::numeric_limits<double>::quiet_NaN();
  }

  f.E = slice.R_smooth;
  for (const auto& a : slice.atoms) {
    FieldAtom fa;
    fa.position = a.position;
    fa.mass = a.mass;
    fa.momentum = a.momentum;
    fa.velocity = a.momentum / a.mass;
    fa.field = a.R_left + 0.5 * a.mass;
    f.atoms.push_back(fa);
    const double tol = 1e-12 * (1.0 + std::abs(a.position));
    auto it = std::lower_bound(f.x.begin(), f.x.end(), a.position - tol);
    if (it != f.x.end() && std::abs(*it - a.position) <= tol) {
      f.E[static_cast<std::size_t>(it - f.x.begin())] = fa.field;
    }
  }
  return f;
}

namespace {

struct BumpParts {
  double b, db, ddb;
};

BumpParts bump_1d(double s) {
  if (!(std::abs(s) < 1.0)) return {0.0, 0.0, 0.0};
  const double d = 1.0 - s * s;
  const double b = std::exp(-1.0 / d);
  const double g1 = -2.0 * s / (d * d);
  const double g2 = -2.0 / (d * d) - 8.0 * s * s / (d * d * d);
  return {b, b * g1, b * (g2 + g1 * g1)};
}

}  // namespace

double Bump::value(double x, double t) const {
  return bump_1d((x - xc) / rx).b * bump_1d((t - tc) / rt).b;
}

double Bump::dxt(double x, double t) const {
  return bump_1d((x - xc) / rx).db * bump_1d((t - tc) / rt).db / (rx * rt);
}

double Bump::dxx(double x, double t) const {
  return bump_1d((x - xc) / rx).ddb * bump_1d((t - tc) / rt).b / (rx * rx);
}

WeakResiduals space_integrals(const SolutionSlice& slice, const Bump& phi) {
  struct Node {
    double x, R, M, W, F;
  };
  const std::size_t n = slice.x.size();
  std::vector<Node> nodes;
  nodes.reserve(n + 2 * slice.atoms.size());
  std::size_t next = 0;
  for (std::size_t g = 0; g < n; ++g) {
    while (next < slice.atoms.size() && slice.atoms[next].position <= slice.x[g]) {
      const ShockAtom& a = slice.atoms[next++];
      nodes.push_back({a.position, a.R_left, a.M_left, a.W_left, a.F_left});
      nodes.push_back({a.position, a.R_left + a.mass, a.M_left + a.momentum,
                       a.W_left + a.momentum * a.momentum / a.mass,
                       a.F_left + slice.kappa * a.field_sum});
    }
    nodes.push_back({slice.x[g], slice.R_smooth[g], slice.M_smooth[g], slice.W_smooth[g],
                     slice.F_smooth[g]});
  }

  WeakResiduals out;
  double z = 0.0;
  double prev_mass = 0.0, prev_mom = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Node& nd = nodes[k];
    if (k > 0) z += 0.5 * (nodes[k - 1].F + nd.F) * (nd.x - nodes[k - 1].x);
    const double pxt = phi.dxt(nd.x, slice.t);
    const double pxx = phi.dxx(nd.x, slice.t);
    const double fm = nd.R * pxt + nd.M * pxx;
    const double fp = nd.M * pxt + (nd.W - z) * pxx;
    if (k > 0) {
      const double h = nd.x - nodes[k - 1].x;
      out.mass += 0.5 * (prev_mass + fm) * h;
      out.momentum += 0.5 * (prev_mom + fp) * h;
    }
    prev_mass = fm;
    prev_mom = fp;
  }
  return out;
}

WeakResiduals weak_residual(const std::vector<FieldSlice>& fields, const Bump& phi) {
  if (fields.size() < 2) throw SolverError("weak residual needs at least two time slices");
  const auto& x = fields.front().x;
  if (x.size() < 2) throw SolverError("weak residual needs at least two grid points");
  const double dt = fields[1].t - fields[0].t;
  if (!(dt > 0.0)) throw SolverError("time grid must be increasing");
  for (std::size_t k = 1; k < fields.size(); ++k) {
    if (std::abs(fields[k].t - fields[k - 1].t - dt) > 1e-9 * dt) {
      throw SolverError("time grid must be uniform");
    }
    if (fields[k].x.size() != x.size()) throw SolverError("slices must share the space grid");
  }
  if (phi.xc - phi.rx < x.front() || phi.xc + phi.rx > x.back() ||
      phi.tc - phi.rt < fields.front().t || phi.tc + phi.rt > fields.back().t) {
    throw SolverError("test function does not vanish at the grid boundary");
  }

  WeakResiduals total;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const WeakResiduals s = space_integrals(fields[k].potentials, phi);
    const double w = (k == 0 || k + 1 == fields.size()) ? 0.5 * dt : dt;
    total.mass += w * s.mass;
    total.momentum += w * s.momentum;
  }
  return total;
}

}  // namespace pep
