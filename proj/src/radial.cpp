#include "pep/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pep/errors.hpp"
#include "quadrature.hpp"

namespace pep {

void validate(const RadialData& data) {
  if (data.n < 1) throw DataError("dimension must be at least 1");
  const auto& d = data.density;
  if (d.empty()) throw DataError("radial data needs a density");
  if (d.breakpoints.size() != d.values.size()) {
    throw DataError("density breakpoints and values differ in length");
  }
  if (d.support_begin() < 0.0) throw DataError("radial density must live on r >= 0");
  for (std::size_t k = 0; k < d.breakpoints.size(); ++k) {
    if (d.values[k] < 0.0) throw DataError("negative density sample");
    if (k > 0 && !(d.breakpoints[k] > d.breakpoints[k - 1])) {
      throw DataError("density breakpoints not increasing");
    }
  }
  if (std::abs(data.velocity.right_limit(0.0)) > 1e-14) {
    throw DataError("radial velocity must vanish at the origin");
  }
}

double WeightedRadialMeasure::weighted_density(double s) const {
  return std::pow(s, n - 1) * density(s);
}

double WeightedRadialMeasure::field(double r) const {
  double e = 0.0;
  for (const auto& p : detail::linear_pieces(density, velocity, {})) {
    const double hi = std::min(p.b, r);
    if (!(hi > p.a)) continue;
    e += detail::cell_integrals(p, p.a, hi, n - 1).mass;
  }
  return e;
}

double WeightedRadialMeasure::total_mass() const {
  return density.empty() ? 0.0 : field(density.support_end());
}

WeightedRadialMeasure reduce(const RadialData& data) {
  validate(data);
  return {data.n, data.density, data.velocity};
}

ParticleSystem discretize_radial(const RadialData& data, std::size_t n_quad) {
  validate(data);
  if (n_quad == 0) throw DataError("n_quad must be at least 1");
  return detail::discretize_weighted(
      {}, detail::linear_pieces(data.density, data.velocity, {}), n_quad, data.n - 1);
}

namespace {

std::vector<double> centered_difference(const std::vector<double>& x,
                                        const std::vector<double>& f) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d.front() = (f[1] - f[0]) / (x[1] - x[0]);
  d.back() = (f[n - 1] - f[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t g = 1; g + 1 < n; ++g) d[g] = (f[g + 1] - f[g - 1]) / (x[g + 1] - x[g - 1]);
  return d;
}

}  // namespace

RadialSlice solve_radial(const RadialData& data, double kappa, double t,
                         const std::vector<double>& r_grid, std::size_t n_quad) {
  if (!(t >= 0.0)) throw SolverError("time must be nonnegative");
  if (!r_grid.empty() && r_grid.front() < 0.0) throw SolverError("radial grid must be r >= 0");
  const ParticleSystem half = discretize_radial(data, n_quad);
  const std::size_t N = half.size();

  ParticleSystem full;
  for (std::size_t i = N; i-- > 0;) {
    full.push_back(-half.positions[i], half.masses[i], -half.velocities[i], -half.fields[i],
                   false);
  }
  for (std::size_t i = 0; i < N; ++i) {
    full.push_back(half.positions[i], half.masses[i], half.velocities[i], half.fields[i], false);
  }
  const PrefixTables tables = build_tables(full, kappa);
  const auto groups = partition_groups(tables, t);
  const SolutionSlice sl = slice_from_groups(tables, t, r_grid, groups);

  auto momentum_prefix = [&](std::size_t k) {
    return tables.B[k] + kappa * t * tables.C[k];
  };
  const double m_neg = N > 0 ? tables.M[N - 1] : 0.0;
  const double p_neg = N > 0 ? momentum_prefix(N - 1) : 0.0;

  RadialSlice out;
  out.t = t;
  out.n = data.n;
  out.r = r_grid;
  out.y = sl.y;
  out.label = sl.label;
  out.total_mass = tables.total_mass() - m_neg;
  const std::size_t n = r_grid.size();
  out.R.resize(n);
  out.M.resize(n);
  out.R_smooth.resize(n);
  out.M_smooth.resize(n);
  for (std::size_t g = 0; g < n; ++g) {
    out.R[g] = sl.R[g] - m_neg;
    out.M[g] = sl.M[g] - p_neg;
    out.R_smooth[g] = sl.R_smooth[g] - m_neg;
    out.M_smooth[g] = sl.M_smooth[g] - p_neg;
  }

  // A group straddling the mirror sits at the origin up to rounding; grid points left of
  // its computed position still see its positive half.
  for (const auto& gr : groups) {
    if (!(gr.first < N && gr.last >= N)) continue;
    const double r_mass = tables.M[gr.last] - m_neg;
    const double r_mom = momentum_prefix(gr.last) - p_neg;
    for (std::size_t g = 0; g < n && r_grid[g] < gr.position; ++g) {
      out.y[g] = out.label[g] = full.positions[gr.last];
      out.R[g] = out.R_smooth[g] = r_mass;
      out.M[g] = out.M_smooth[g] = r_mom;
    }
  }

  const double rmax = n > 0 ? r_grid.back() : 0.0;
  out.varsigma = centered_difference(r_grid, out.R_smooth);
  for (double& v : out.varsigma) v = std::max(v, 0.0);
  const auto dm = centered_difference(r_grid, out.M_smooth);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double floor = 1e-12 * out.total_mass / (rmax > 0.0 ? rmax : 1.0);
  out.rho.resize(n);
  out.w.resize(n);
  for (std::size_t g = 0; g < n; ++g) {
    const double r = r_grid[g];
    out.rho[g] = r > 1e-6 * rmax ? out.varsigma[g] / std::pow(r, data.n - 1) : nan;
    out.w[g] = out.varsigma[g] > floor ? dm[g] / out.varsigma[g] : nan;
  }

  const double thr = kAtomThreshold * out.total_mass;
  const double tol = 1e-12 * (1.0 + rmax);
  for (const auto& gr : groups) {
    if (!gr.atom || gr.position < -tol || gr.position > rmax) continue;
    const std::size_t lo = std::max(gr.first, N);
    if (lo > gr.last) continue;
    const double mass = tables.M[gr.last] - tables.M[lo - 1];
    if (!(mass > thr)) continue;
    out.atoms.push_back({std::max(gr.position, 0.0), mass,
                         momentum_prefix(gr.last) - momentum_prefix(lo - 1)});
  }
  return out;
}

MeasureData1D symmetrized(const RadialData& data) {
  validate(data);
  const auto& d = data.density;
  if (d.support_begin() != 0.0) {
    throw DataError("symmetric extension needs the density to start at the origin");
  }
  MeasureData1D out;
  for (std::size_t k = d.breakpoints.size(); k-- > 1;) {
    out.ac_density.breakpoints.push_back(-d.breakpoints[k]);
    out.ac_density.values.push_back(d.values[k]);
  }
  out.ac_density.breakpoints.insert(out.ac_density.breakpoints.end(), d.breakpoints.begin(),
                                    d.breakpoints.end());
  out.ac_density.values.insert(out.ac_density.values.end(), d.values.begin(), d.values.end());

  const auto& v = data.velocity;
  auto& ov = out.velocity;
  for (std::size_t k = v.breakpoints.size(); k-- > 0;) {
    if (v.breakpoints[k] <= 0.0) continue;
    ov.breakpoints.push_back(-v.breakpoints[k]);
    ov.left_values.push_back(-v.right_values[k]);
    ov.right_values.push_back(-v.left_values[k]);
  }
  ov.breakpoints.push_back(0.0);
  ov.left_values.push_back(0.0);
  ov.right_values.push_back(0.0);
  for (std::size_t k = 0; k < v.breakpoints.size(); ++k) {
    if (v.breakpoints[k] <= 0.0) continue;
    ov.breakpoints.push_back(v.breakpoints[k]);
    ov.left_values.push_back(v.left_values[k]);
    ov.right_values.push_back(v.right_values[k]);
  }
  return normalize(out);
}

}  // namespace pep
