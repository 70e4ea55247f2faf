#include "pep/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <tuple>

#include "format.hpp"
#include "pep/errors.hpp"
#include "pep/sticky.hpp"
#include "pep/variational.hpp"

namespace pep {

std::optional<double> fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 3) return std::nullopt;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const auto n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(err[i] > 0.0)) return std::nullopt;
    const double lx = std::log(h[i]);
    const double ly = std::log(err[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

std::pair<double, double> space_box(const MeasureData1D& data, double kappa, double t_end) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double vmax = 0.0;
  for (const auto& a : data.atoms) {
    lo = std::min(lo, a.position);
    hi = std::max(hi, a.position);
    vmax = std::max(vmax, std::abs(a.velocity));
  }
  if (!data.ac_density.empty()) {
    lo = std::min(lo, data.ac_density.support_begin());
    hi = std::max(hi, data.ac_density.support_end());
    for (double s : {data.ac_density.support_begin(), data.ac_density.support_end()}) {
      vmax = std::max({vmax, std::abs(data.velocity.left_limit(s)),
                       std::abs(data.velocity.right_limit(s))});
    }
    const auto& v = data.velocity;
    for (std::size_t k = 0; k < v.breakpoints.size(); ++k) {
      vmax = std::max({vmax, std::abs(v.left_values[k]), std::abs(v.right_values[k])});
    }
  }
  const double reach = vmax * t_end + 0.5 * std::abs(kappa) * data.total_mass() * t_end * t_end;
  const double margin = reach + 0.1 * (hi - lo) + 0.5;
  return {lo - margin, hi + margin};
}

namespace {

std::vector<double> uniform_grid(double lo, double hi, double step) {
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::round((hi - lo) / step)));
  std::vector<double> x(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
  }
  return x;
}

}  // namespace

WeakResiduals max_weak_residuals(const PrefixTables& tables, double t_end, double x_min,
                                 double x_max, double dx, double dt,
                                 const std::vector<Bump>& bumps) {
  for (const auto& b : bumps) {
    if (b.xc - b.rx < x_min || b.xc + b.rx > x_max || b.tc - b.rt < 0.0 || b.tc + b.rt > t_end) {
      throw SolverError("test function does not vanish at the grid boundary");
    }
  }
  const auto x = uniform_grid(x_min, x_max, dx);
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::round(t_end / dt)));
  const double h = t_end / static_cast<double>(steps);

  struct Sample {
    double t;
    std::vector<Group> groups;
    std::vector<WeakResiduals> values;
  };
  auto sample = [&](double t) {
    Sample s{t, partition_groups(tables, t), {}};
    const SolutionSlice sl = slice_from_groups(tables, t, x, s.groups);
    for (const auto& b : bumps) {
      s.values.push_back(std::abs(t - b.tc) < b.rt ? space_integrals(sl, b) : WeakResiduals{});
    }
    return s;
  };
  auto same_partition = [](const Sample& a, const Sample& b) {
    if (a.groups.size() != b.groups.size()) return false;
    for (std::size_t k = 0; k < a.groups.size(); ++k) {
      if (a.groups[k].last != b.groups[k].last) return false;
    }
    return true;
  };

  // W jumps in time whenever particles merge, so cells whose partition changes are split
  // by bisection until the change is pinned down.
  std::vector<WeakResiduals> acc(bumps.size());
  const double pin = 1e-7 * h;
  auto add = [&](const Sample& a, const Sample& b) {
    const double w = 0.5 * (b.t - a.t);
    for (std::size_t j = 0; j < bumps.size(); ++j) {
      acc[j].mass += w * (a.values[j].mass + b.values[j].mass);
      acc[j].momentum += w * (a.values[j].momentum + b.values[j].momentum);
    }
  };
  auto integrate = [&](auto&& self, const Sample& a, const Sample& b) -> void {
    if (same_partition(a, b) || b.t - a.t <= pin) {
      add(a, b);
      return;
    }
    const Sample m = sample(0.5 * (a.t + b.t));
    self(self, a, m);
    self(self, m, b);
  };

  Sample left = sample(0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = t_end * static_cast<double>(k) / static_cast<double>(steps);
    bool active = false;
    for (const auto& b : bumps) active = active || (b.tc - b.rt < t && b.tc + b.rt > t - h);
    if (!active) {
      left.t = -1.0;
      continue;
    }
    if (left.t < 0.0) left = sample(t - h);
    Sample right = sample(t);
    integrate(integrate, left, right);
    left = std::move(right);
  }
  WeakResiduals out;
  for (const auto& a : acc) {
    out.mass = std::max(out.mass, std::abs(a.mass));
    out.momentum = std::max(out.momentum, std::abs(a.momentum));
  }
  return out;
}

ConvergenceReport convergence_study(const MeasureData1D& data, double kappa, double t_end,
                                    const std::vector<Resolution>& resolutions,
                                    std::uint64_t seed, std::size_t n_bumps) {
  if (resolutions.size() < 2) throw SolverError("convergence study needs two resolutions");
  if (!(t_end > 0.0)) throw SolverError("convergence study needs a positive end time");
  for (std::size_t i = 1; i < resolutions.size(); ++i) {
    const auto& a = resolutions[i - 1];
    const auto& b = resolutions[i];
    if (b.n_quad < a.n_quad || b.dx > a.dx || b.dt > a.dt ||
        (b.n_quad == a.n_quad && b.dx == a.dx && b.dt == a.dt)) {
      throw SolverError("resolutions must refine monotonically");
    }
  }

  ConvergenceReport rep;
  rep.seed = seed;
  rep.kappa = kappa;
  rep.t_end = t_end;
  rep.oracle = kappa <= 0.0 ? "sticky" : "entropy-vs-sticky";
  std::tie(rep.x_min, rep.x_max) = space_box(data, kappa, t_end);

  std::mt19937_64 rng(seed);
  const double rx = 0.25 * (rep.x_max - rep.x_min);
  const double rt = 0.25 * t_end;
  std::uniform_real_distribution<double> ux(rep.x_min + rx, rep.x_max - rx);
  std::uniform_real_distribution<double> ut(rt, t_end - rt);
  for (std::size_t k = 0; k < n_bumps; ++k) {
    Bump b;
    b.xc = ux(rng);
    b.tc = ut(rng);
    b.rx = rx;
    b.rt = rt;
    rep.bumps.push_back(b);
  }

  const std::vector<double> sample_times{0.25 * t_end, 0.5 * t_end, 0.75 * t_end, t_end};
  for (const auto& res : resolutions) {
    ConvergenceRow row;
    row.resolution = res;
    const PrefixTables tables = build_tables(discretize(data, res.n_quad), kappa);
    const WeakResiduals wr =
        max_weak_residuals(tables, t_end, rep.x_min, rep.x_max, res.dx, res.dt, rep.bumps);
    row.mass_residual = wr.mass;
    row.momentum_residual = wr.momentum;

    const auto x = uniform_grid(rep.x_min, rep.x_max, res.dx);
    const auto sticky = run(data, kappa, t_end, res.n_quad, sample_times);
    ExclusionSet history;
    for (std::size_t k = 0; k < sample_times.size(); ++k) {
      const double t = sample_times[k];
      SolutionSlice var;
      if (kappa <= 0.0) {
        var = evaluate_slice(tables, t, x);
      } else {
        auto [sl, next] = evaluate_entropy_slice(tables, t, x, history, res.dt);
        var = std::move(sl);
        history = std::move(next);
      }
      const SolutionSlice st = sticky_slice(sticky[k], x);
      for (std::size_t g = 0; g < x.size(); ++g) {
        row.oracle_distance = std::max(row.oracle_distance, std::abs(var.R[g] - st.R[g]));
      }
    }
    rep.rows.push_back(row);
  }

  std::vector<double> h, em, ep, eo;
  for (const auto& r : rep.rows) {
    h.push_back(r.resolution.dx);
    em.push_back(r.mass_residual);
    ep.push_back(r.momentum_residual);
    eo.push_back(r.oracle_distance);
  }
  rep.mass_order = fitted_order(h, em);
  rep.momentum_order = fitted_order(h, ep);
  // distances at roundoff carry no order
  const double floor = 1e-12 * (1.0 + data.total_mass());
  if (*std::max_element(eo.begin(), eo.end()) > floor) rep.oracle_order = fitted_order(h, eo);
  return rep;
}

std::string ConvergenceReport::to_text() const {
  using detail::full;
  auto order = [](const std::optional<double>& o) { return o ? full(*o) : std::string("none"); };
  std::ostringstream os;
  os << "seed=" << seed << '\n'
     << "kappa=" << full(kappa) << '\n'
     << "t_end=" << full(t_end) << '\n'
     << "oracle=" << oracle << '\n'
     << "x_min=" << full(x_min) << '\n'
     << "x_max=" << full(x_max) << '\n'
     << "levels=" << rows.size() << '\n';
  for (std::size_t k = 0; k < bumps.size(); ++k) {
    os << "bump" << k << '=' << full(bumps[k].xc) << ',' << full(bumps[k].tc) << ','
       << full(bumps[k].rx) << ',' << full(bumps[k].rt) << '\n';
  }
  os << "mass_order=" << order(mass_order) << '\n'
     << "momentum_order=" << order(momentum_order) << '\n'
     << "oracle_order=" << order(oracle_order) << '\n';
  return os.str();
}

std::string ConvergenceReport::to_csv() const {
  using detail::full;
  std::ostringstream os;
  os << "n_quad,dx,dt,mass_residual,momentum_residual,oracle_distance\n";
  for (const auto& r : rows) {
    os << r.resolution.n_quad << ',' << full(r.resolution.dx) << ',' << full(r.resolution.dt)
       << ',' << full(r.mass_residual) << ',' << full(r.momentum_residual) << ','
       << full(r.oracle_distance) << '\n';
  }
  return os.str();
}

}  // namespace pep
