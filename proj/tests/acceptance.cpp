// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is the number
// of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "oracles.hpp"
#include "pep/characteristics.hpp"
#include "pep/convergence.hpp"
#include "pep/fields.hpp"
#include "pep/radial.hpp"
#include "pep/sticky.hpp"
#include "pep/variational.hpp"

using namespace pep;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string data_file(const std::string& name) { return std::string(PEP_DATA_DIR) + "/" + name; }

// Bisection for the time in (a, b) at which pred flips from pred(a) to !pred(a).
double flip_time(const std::function<bool(double)>& pred, double a, double b) {
  const bool left = pred(a);
  while (b - a > 1e-13 * std::max(1.0, b)) {
    const double m = 0.5 * (a + b);
    (pred(m) == left ? a : b) = m;
  }
  return 0.5 * (a + b);
}

std::size_t entropy_atoms_at(const PrefixTables& tab, double t, const std::vector<double>& x,
                             double dt) {
  ExclusionSet hist;
  SolutionSlice sl;
  for (double s = dt; s < t + 0.5 * dt; s += dt) {
    auto [next_sl, next_hist] = evaluate_entropy_slice(tab, std::min(s, t), x, hist, dt);
    sl = std::move(next_sl);
    hist = std::move(next_hist);
  }
  return sl.atoms.size();
}

Verdict split_example() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const double t1 = 2.0 - std::sqrt(2.0), t2 = 2.0 + std::sqrt(2.0);
  const auto data = oracle::split_example();
  const auto tab = build_tables(discretize(data, 1), 1.0);
  const auto x = oracle::linspace(-1.0, 14.0, 1501);

  // trajectories before the collision
  double traj = 0.0;
  for (double t : oracle::linspace(0.0, 0.99 * t1, 50)) {
    const auto sl = evaluate_slice(tab, t, x);
    if (sl.atoms.size() != 2) {
      traj = INFINITY;
      break;
    }
    traj = std::max({traj, std::abs(sl.atoms[0].position - oracle::split_y1(t)),
                     std::abs(sl.atoms[1].position - oracle::split_y2(t))});
  }
  v.require(traj < 1e-12, fmt::format("trajectory error {:.3g}", traj));

  auto groups = [&](double t) { return partition_groups(tab, t).size(); };
  const double t1_var = flip_time([&](double t) { return groups(t) == 2; }, 0.3, 1.0);
  const double t2_var = flip_time([&](double t) { return groups(t) == 1; }, 1.0, 4.0);
  StickyState st(tab.particles, 1.0);
  step_to_next_event(st);
  v.require(std::abs(t1_var - t1) < 1e-9, fmt::format("t1 {:.17g}", t1_var));
  v.require(std::abs(st.time - t1) < 1e-9, fmt::format("sticky t1 {:.17g}", st.time));
  v.require(std::abs(t2_var - t2) < 1e-9, fmt::format("t2 {:.17g}", t2_var));

  std::vector<std::size_t> solve, entropy;
  for (double t : {0.3, 1.0, 4.0}) {
    solve.push_back(evaluate_slice(tab, t, x).atoms.size());
    entropy.push_back(entropy_atoms_at(tab, t, x, 1e-3));
  }
  v.require(solve == std::vector<std::size_t>{2, 1, 2},
            fmt::format("solve atoms {} {} {}", solve[0], solve[1], solve[2]));
  v.require(entropy == std::vector<std::size_t>{2, 1, 1},
            fmt::format("entropy atoms {} {} {}", entropy[0], entropy[1], entropy[2]));
  const double elapsed = seconds_since(start);
  v.require(elapsed < 1.0, fmt::format("runtime {:.3g}s", elapsed));
  if (v.pass) {
    v.detail = fmt::format("t1 err {:.2g}, t2 err {:.2g}, atoms 2-1-2 / 2-1-1, {:.3f}s",
                           std::abs(t1_var - t1), std::abs(t2_var - t2), elapsed);
  }
  return v;
}

Verdict sticky_equivalence() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const double kappas[] = {-1.0, -0.3, 0.0};
  double worst_r = 0.0, worst_m = 0.0;
  for (int seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::uniform_int_distribution<int> count(5, 50);
    const double kappa = kappas[seed % 3];
    const auto data = oracle::random_data(rng, static_cast<std::size_t>(count(rng)), seed % 2);
    const std::size_t n_quad = 40;
    const auto tab = build_tables(discretize(data, n_quad), kappa);
    const double mass = tab.total_mass();
    const auto times = oracle::linspace(0.3, 3.0, 10);
    const auto snaps = run(data, kappa, times.back(), n_quad, times);
    const auto x = oracle::linspace(-20.0, 20.0, 4001);
    for (const auto& s : snaps) {
      const auto a = sticky_slice(s, x);
      const auto b = evaluate_slice(tab, s.time, x);
      for (std::size_t g = 0; g < x.size(); ++g) {
        worst_r = std::max(worst_r, std::abs(a.R[g] - b.R[g]) / mass);
        worst_m = std::max(worst_m, std::abs(a.M[g] - b.M[g]) / mass);
      }
    }
  }
  const double bound = 2.0 * kAtomThreshold;
  v.require(worst_r < bound, fmt::format("sup |dR|/M = {:.3g}", worst_r));
  v.require(worst_m < bound, fmt::format("sup |dM|/M = {:.3g}", worst_m));
  const double elapsed = seconds_since(start);
  v.require(elapsed < 30.0, fmt::format("runtime {:.3g}s", elapsed));
  if (v.pass) {
    v.detail = fmt::format("sup |dR|/M {:.2g}, sup |dM|/M {:.2g}, {:.2f}s", worst_r, worst_m,
                           elapsed);
  }
  return v;
}

Verdict smooth_regime() {
  Verdict v;
  const auto data = load_initial_data(data_file("subcritical_repulsive.dat"));
  const double kappa = 1.0, t = 1.0;
  const auto ct = critical_times(data, kappa);
  v.require(std::isinf(ct.t_c1), "data is not sub-critical");
  if (!v.pass) return v;

  // Centered quotients of R against the exact window average of rho0 / Gamma, which is
  // the difference of E0 over the label images of the window ends.
  const double lo = data.ac_density.support_begin(), hi = data.ac_density.support_end();
  const double x0 = lo + data.velocity(lo) * t + 0.5 * kappa * initial_field(data, lo) * t * t;
  const double x1 = hi + data.velocity(hi) * t + 0.5 * kappa * initial_field(data, hi) * t * t;
  const auto x = oracle::linspace(x0, x1, 201);
  const double dx = x[1] - x[0];
  std::vector<double> exact(x.size());
  for (std::size_t g = 0; g < x.size(); ++g) {
    exact[g] = initial_field(data, characteristic_label(data, kappa, t, x[g]));
  }

  std::vector<double> h, err;
  for (std::size_t n : {250u, 500u, 1000u, 2000u}) {
    const auto tab = build_tables(discretize(data, n), kappa);
    const auto sl = evaluate_slice(tab, t, x);
    double e = 0.0;
    // windows touching the support edges are left out
    for (std::size_t g = 2; g + 2 < x.size(); ++g) {
      const double rho = (sl.R_smooth[g + 1] - sl.R_smooth[g - 1]) / (2.0 * dx);
      e = std::max(e, std::abs(rho - (exact[g + 1] - exact[g - 1]) / (2.0 * dx)));
    }
    h.push_back(1.0 / static_cast<double>(n));
    err.push_back(e);
  }
  const auto order = fitted_order(h, err);
  v.require(order && *order >= 1.0, fmt::format("fitted order {:.3g}", order.value_or(NAN)));
  v.require(err.back() < err.front(), "error does not decrease");
  v.detail = fmt::format("sup err {:.2g} .. {:.2g}, order {:.3g}{}", err.front(), err.back(),
                         order.value_or(NAN), v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

Verdict lax_oleinik() {
  Verdict v;
  const double t = 2.0;
  const auto x = oracle::linspace(-4.0, 6.0, 2001);
  const double dx = x[1] - x[0];

  const auto shock = load_initial_data(data_file("riemann_shock.dat"));
  const auto tab_s = build_tables(discretize(shock, 1000), 0.0);
  const auto sl = evaluate_slice(tab_s, t, x);
  v.require(sl.atoms.size() == 1, fmt::format("{} shocks", sl.atoms.size()));
  double shock_err = INFINITY;
  if (sl.atoms.size() == 1) {
    shock_err = std::abs(sl.atoms[0].position - 0.5 * t);
    v.require(shock_err <= dx, fmt::format("shock at {:.6g}", sl.atoms[0].position));
    v.require(std::abs(sl.atoms[0].mass - t) < 1e-9, "shock mass");
  }

  const auto fan = load_initial_data(data_file("rarefaction.dat"));
  // the fan is vacuum for the gas; the Lax-Oleinik velocity is (x - y) / t
  const auto f = evaluate_slice(build_tables(discretize(fan, 1000), 0.0), t, x);
  double fan_err = 0.0;
  for (std::size_t g = 0; g < x.size(); ++g) {
    if (x[g] <= 0.0 || x[g] >= t) continue;
    fan_err = std::max(fan_err, std::abs((x[g] - f.y[g]) / t - x[g] / t));
  }
  v.require(fan_err < 0.01, fmt::format("fan sup err {:.3g}", fan_err));
  if (v.pass) {
    v.detail = fmt::format("shock offset {:.2g} (dx {:.2g}), fan sup err {:.2g}", shock_err, dx,
                           fan_err);
  }
  return v;
}

Verdict conservation() {
  Verdict v;
  const char* files[] = {"two_particle_repulsive.dat", "attractive_atoms.dat",
                         "subcritical_repulsive.dat",  "riemann_shock.dat",
                         "rarefaction.dat",            "mixed_attractive.dat",
                         "uniform_ball.dat"};
  double worst_mass = 0.0, worst_mom = 0.0;
  for (const char* name : files) {
    const auto data = load_initial_data(data_file(name));
    for (double kappa : {-1.0, 0.0, 1.0}) {
      const std::size_t n_quad = 400;
      const auto tab = build_tables(discretize(data, n_quad), kappa);
      const double m0 = data.total_mass();
      const double p0 = data.total_momentum();
      const double scale = std::abs(p0) + 0.5 * std::abs(kappa) * m0 * m0 * 4.0 + m0;
      const std::vector<double> times{0.5, 1.0, 2.0, 4.0};
      auto check = [&](double t, double mass, double momentum) {
        worst_mass = std::max(worst_mass, std::abs(mass - m0) / m0);
        worst_mom = std::max(worst_mom,
                             std::abs(momentum - oracle::momentum_law(p0, m0, kappa, t)) / scale);
      };
      // potentials at a point right of every particle give the totals
      const double far = 1e6;
      for (double t : times) {
        const auto sl = evaluate_slice(tab, t, {far});
        check(t, sl.R[0], sl.M[0]);
      }
      ExclusionSet hist;
      for (double t : times) {
        auto [sl, next] = evaluate_entropy_slice(tab, t, {far}, hist, 0.01);
        hist = std::move(next);
        check(t, sl.R[0], sl.M[0]);
      }
      for (const auto& s : run(data, kappa, times.back(), n_quad, times)) {
        check(s.time, s.total_mass(), s.total_momentum());
      }
    }
  }
  v.require(worst_mass < 1e-10, fmt::format("mass drift {:.3g}", worst_mass));
  v.require(worst_mom < 1e-8, fmt::format("momentum drift {:.3g}", worst_mom));
  if (v.pass) v.detail = fmt::format("mass {:.2g}, momentum {:.2g}", worst_mass, worst_mom);
  return v;
}

Verdict monotonicity() {
  Verdict v;
  std::size_t violations = 0, resplits = 0, queries = 0;
  const double kappas[] = {-1.0, -0.3, 0.0, 0.5, 1.0};
  for (int seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(1000 + seed));
    const double kappa = kappas[seed % 5];
    const auto data = oracle::random_data(rng, 10 + static_cast<std::size_t>(seed), seed % 2);
    const auto tab = build_tables(discretize(data, 20), kappa);
    std::uniform_real_distribution<double> ux(-10.0, 10.0), ut(0.0, 4.0);
    for (int q = 0; q < 1000; ++q) {
      double a = ux(rng), b = ux(rng);
      if (a > b) std::swap(a, b);
      const double t = ut(rng);
      const auto ra = minimize(tab, a, t), rb = minimize(tab, b, t);
      ++queries;
      if (ra.index > rb.index) ++violations;
    }
    if (kappa >= 0.0) continue;

    // every label strictly inside an old jump interval stays swallowed
    const auto times = oracle::linspace(0.1, 4.0, 40);
    std::vector<std::pair<std::size_t, std::size_t>> swallowed;
    for (double t : times) {
      for (const auto& g : partition_groups(tab, t)) {
        for (auto [first, last] : swallowed) {
          if (g.last >= first && g.last < last) ++resplits;
        }
      }
      std::uniform_real_distribution<double> xs(-15.0, 15.0);
      for (int q = 0; q < 50; ++q) {
        const auto r = minimize(tab, xs(rng), t);
        if (r.index < 0) continue;
        const auto i = static_cast<std::size_t>(r.index);
        for (auto [first, last] : swallowed) {
          if (i >= first && i < last) ++resplits;
        }
      }
      for (const auto& g : partition_groups(tab, t)) {
        if (g.last > g.first) swallowed.emplace_back(g.first, g.last);
      }
    }
  }
  v.require(violations == 0, fmt::format("{} order violations", violations));
  v.require(resplits == 0, fmt::format("{} re-split labels", resplits));
  if (v.pass) v.detail = fmt::format("{} queries, no violations, no re-splits", queries);
  return v;
}

Verdict weak_form() {
  Verdict v;
  struct Case {
    std::string name;
    MeasureData1D data;
    double kappa;
    double t_end;
  };
  std::mt19937_64 rng(77);
  std::vector<Case> cases{{"split", oracle::split_example(), 1.0, 4.0},
                          {"attractive", oracle::random_data(rng, 5, false), -1.0, 2.0}};
  std::string summary;
  for (const auto& c : cases) {
    const auto tab = build_tables(discretize(c.data, 1), c.kappa);
    const auto [x_min, x_max] = space_box(c.data, c.kappa, c.t_end);
    const double rx = 0.3 * (x_max - x_min), rt = 0.3 * c.t_end;
    std::vector<Bump> bumps;
    for (double f : {0.35, 0.5, 0.65}) {
      bumps.push_back({x_min + f * (x_max - x_min), 0.5 * c.t_end, rx, rt});
    }
    std::vector<WeakResiduals> res;
    for (double h : {0.02, 0.01, 0.005}) {
      res.push_back(max_weak_residuals(tab, c.t_end, x_min, x_max, h, h, bumps));
    }
    for (std::size_t k = 1; k < res.size(); ++k) {
      const double rm = res[k - 1].mass / res[k].mass;
      const double rp = res[k - 1].momentum / res[k].momentum;
      v.require(rm >= 2.0, fmt::format("{} mass ratio {:.3g}", c.name, rm));
      v.require(rp >= 2.0, fmt::format("{} momentum ratio {:.3g}", c.name, rp));
    }
    summary += fmt::format("{}{} mass {:.2g}->{:.2g} momentum {:.2g}->{:.2g}",
                           summary.empty() ? "" : ", ", c.name, res.front().mass, res.back().mass,
                           res.front().momentum, res.back().momentum);
  }
  if (v.pass) v.detail = summary;
  return v;
}

Verdict radial() {
  Verdict v;
  RadialData d;
  d.n = 1;
  d.density.breakpoints = {0.0, 0.6, 1.5};
  d.density.values = {1.0, 2.0, 0.5};
  d.velocity.breakpoints = {0.0, 0.7, 1.5};
  d.velocity.left_values = {0.0, -0.9, 0.4};
  d.velocity.right_values = {0.0, -0.9, 0.4};
  const auto full = symmetrized(d);
  const double m_half = reduce(d).total_mass();
  const std::size_t n_quad = 300;
  const auto r = oracle::linspace(0.0, 4.0, 801);

  // The mirrored field is E0 - M/2 of the full-line field, so radial x = r sits at
  // r + kappa M_half t^2 / 2 on the line.
  double worst_y = 0.0, worst_R = 0.0;
  for (double kappa : {-1.0, 1.0}) {
    const auto tab = build_tables(discretize(full, n_quad), kappa);
    for (double t : {0.3, 0.8, 1.6}) {
      const double shift = 0.5 * kappa * m_half * t * t;
      std::vector<double> x;
      for (double ri : r) x.push_back(ri + shift);
      const auto line = evaluate_slice(tab, t, x);
      const auto rad = solve_radial(d, kappa, t, r, n_quad);
      for (std::size_t g = 0; g < r.size(); ++g) {
        if (line.atoms.empty() || std::abs(x[g] - line.atoms.front().position) > 1e-9) {
          worst_y = std::max(worst_y, std::abs(line.y[g] - rad.y[g]));
        }
        if (line.y[g] > 0.0) worst_R = std::max(worst_R, std::abs(line.R[g] - m_half - rad.R[g]));
      }
    }
  }
  v.require(worst_y < 1e-12, fmt::format("n=1 label gap {:.3g}", worst_y));
  v.require(worst_R < 1e-12, fmt::format("n=1 mass gap {:.3g}", worst_R));

  // uniform unit ball at rest, n = 3: label solves y + kappa y^3 t^2 / 6 = r
  RadialData ball;
  ball.n = 3;
  ball.density.breakpoints = {0.0, 1.0};
  ball.density.values = {1.0, 1.0};
  ball.velocity.breakpoints = {0.0, 1.0};
  ball.velocity.left_values = {0.0, 0.0};
  ball.velocity.right_values = {0.0, 0.0};
  double worst_ball = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    const double kappa = 1.0;
    const double edge = 1.0 + kappa * t * t / 6.0;
    const auto rr = oracle::linspace(0.0, 0.999 * edge, 400);
    const auto s = solve_radial(ball, kappa, t, rr, 4000);
    for (std::size_t g = 0; g < rr.size(); ++g) {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 200; ++it) {
        const double y = 0.5 * (lo + hi);
        (y + kappa * y * y * y * t * t / 6.0 < rr[g] ? lo : hi) = y;
      }
      worst_ball = std::max(worst_ball, std::abs(s.label[g] - 0.5 * (lo + hi)));
    }
  }
  v.require(worst_ball < 1e-6, fmt::format("n=3 ball label err {:.3g}", worst_ball));
  if (v.pass) {
    v.detail = fmt::format("n=1 label gap {:.2g}, mass gap {:.2g}; n=3 ball err {:.2g}",
                           worst_y, worst_R, worst_ball);
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"two-particle split example", split_example},
      {"sticky equivalence for kappa <= 0", sticky_equivalence},
      {"smooth regime against characteristics", smooth_regime},
      {"Lax-Oleinik recovery at kappa = 0", lax_oleinik},
      {"mass and momentum conservation", conservation},
      {"monotone labels and no re-splitting", monotonicity},
      {"weak-form residual refinement", weak_form},
      {"radial reduction sanity", radial}};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failures += v.pass ? 0 : 1;
    std::printf("criterion %zu %s: %s (%s)\n", k + 1, v.pass ? "PASS" : "FAIL",
                criteria[k].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
