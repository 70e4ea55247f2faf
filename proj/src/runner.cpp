#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "format.hpp"
#include "pep/characteristics.hpp"
#include "pep/config.hpp"
#include "pep/convergence.hpp"
#include "pep/errors.hpp"
#include "pep/fields.hpp"
#include "pep/radial.hpp"
#include "pep/sticky.hpp"
#include "pep/variational.hpp"

namespace pep {

namespace {

using detail::full;
namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw SolverError("cannot write '" + path.string() + "'");
  return out;
}

std::string label(double t) { return detail::shortest(t); }

void write_slice(const fs::path& dir, const FieldSlice& f) {
  const SolutionSlice& s = f.potentials;
  auto out = open_out(dir / ("slice_" + label(f.t) + ".csv"));
  out << "x,y,R,M,rho_ac,m_ac,u,E\n";
  for (std::size_t g = 0; g < f.x.size(); ++g) {
    out << full(f.x[g]) << ',' << full(s.y[g]) << ',' << full(s.R[g]) << ',' << full(s.M[g])
        << ',' << full(f.rho[g]) << ',' << full(f.m[g]) << ',' << full(f.u[g]) << ','
        << full(f.E[g]) << '\n';
  }
  auto atoms = open_out(dir / ("atoms_" + label(f.t) + ".csv"));
  atoms << "z,mass,momentum,velocity\n";
  for (const auto& a : f.atoms) {
    atoms << full(a.position) << ',' << full(a.mass) << ',' << full(a.momentum) << ','
          << full(a.velocity) << '\n';
  }
}

void report_slice(std::ostream& log, const FieldSlice& f) {
  log << "t=" << label(f.t) << " atoms=" << f.atoms.size()
      << " mass=" << full(f.potentials.total_mass) << '\n';
}

RadialData radial_from(const MeasureData1D& data, int n) {
  if (!data.atoms.empty()) throw DataError("radial mode does not take atoms");
  RadialData r;
  r.n = n;
  r.density = data.ac_density;
  r.velocity = data.velocity;
  validate(r);
  return r;
}

void run_solve(const RunConfig& cfg, const MeasureData1D& data, const fs::path& dir,
               std::ostream& log) {
  const auto tables = build_tables(discretize(data, cfg.n_quad), cfg.kappa);
  const auto x = cfg.grid->points();
  for (double t : cfg.times) {
    const FieldSlice f = differentiate(evaluate_slice(tables, t, x));
    write_slice(dir, f);
    report_slice(log, f);
  }
}

void run_entropy(const RunConfig& cfg, const MeasureData1D& data, const fs::path& dir,
                 std::ostream& log) {
  const auto tables = build_tables(discretize(data, cfg.n_quad), cfg.kappa);
  const auto x = cfg.grid->points();
  ExclusionSet history;
  for (double t : cfg.times) {
    auto [slice, next] = evaluate_entropy_slice(tables, t, x, history, cfg.time_step());
    history = std::move(next);
    const FieldSlice f = differentiate(slice);
    write_slice(dir, f);
    report_slice(log, f);
  }
}

void run_sticky(const RunConfig& cfg, const MeasureData1D& data, const fs::path& dir,
                std::ostream& log) {
  const auto snaps = run(data, cfg.kappa, cfg.t_max(), cfg.n_quad, cfg.times);
  const auto x = cfg.grid->points();
  auto traj = open_out(dir / "trajectory.csv");
  traj << "t,particle_id,x,mass,u\n";
  for (const auto& s : snaps) {
    const FieldSlice f = differentiate(sticky_slice(s, x));
    write_slice(dir, f);
    report_slice(log, f);
    for (const auto& p : s.particles()) {
      traj << full(s.time) << ',' << p.id << ',' << full(p.position(s.time, s.kappa)) << ','
           << full(p.mass) << ',' << full(p.velocity(s.time, s.kappa)) << '\n';
    }
  }
  auto events = open_out(dir / "events.csv");
  events << "t,particle_id,x,mass,u,merged\n";
  if (!snaps.empty()) {
    for (const auto& e : snaps.back().events()) {
      events << full(e.time) << ',' << e.id << ',' << full(e.position) << ',' << full(e.mass)
             << ',' << full(e.velocity) << ',' << e.merged << '\n';
    }
    log << "events=" << snaps.back().events().size() << '\n';
  }
}

void run_characteristics(const RunConfig& cfg, const MeasureData1D& data, const fs::path& dir,
                         std::ostream& log) {
  const CriticalTimes ct = critical_times(data, cfg.kappa);
  auto report = open_out(dir / "report.txt");
  const std::string text = "t_c1=" + full(ct.t_c1) + "\nt_c2=" + full(ct.t_c2) + "\n";
  report << text;
  log << text;
  for (double t : cfg.times) {
    if (!data.atoms.empty() || !(t < ct.t_c1)) {
      log << "t=" << label(t) << " skipped: no smooth solution\n";
      continue;
    }
    const auto fan = evolve_smooth(data, cfg.kappa, t);
    auto out = open_out(dir / ("fan_" + label(t) + ".csv"));
    out << "label,x,u,gamma,rho\n";
    for (std::size_t i = 0; i < fan.labels.size(); ++i) {
      out << full(fan.labels[i]) << ',' << full(fan.x[i]) << ',' << full(fan.u[i]) << ','
          << full(fan.gamma[i]) << ',' << full(fan.rho[i]) << '\n';
    }
  }
}

void run_radial(const RunConfig& cfg, const MeasureData1D& data, const fs::path& dir,
                std::ostream& log) {
  const RadialData rd = radial_from(data, cfg.dimension);
  const auto r = cfg.grid->points();
  for (double t : cfg.times) {
    const RadialSlice s = solve_radial(rd, cfg.kappa, t, r, cfg.n_quad);
    auto out = open_out(dir / ("radial_" + label(t) + ".csv"));
    out << "r,y,R,M,varsigma,rho,w\n";
    for (std::size_t g = 0; g < r.size(); ++g) {
      out << full(r[g]) << ',' << full(s.y[g]) << ',' << full(s.R[g]) << ',' << full(s.M[g])
          << ',' << full(s.varsigma[g]) << ',' << full(s.rho[g]) << ',' << full(s.w[g]) << '\n';
    }
    auto shells = open_out(dir / ("shells_" + label(t) + ".csv"));
    shells << "radius,mass,momentum\n";
    for (const auto& a : s.atoms) {
      shells << full(a.radius) << ',' << full(a.mass) << ',' << full(a.momentum) << '\n';
    }
    log << "t=" << label(t) << " shells=" << s.atoms.size() << " mass=" << full(s.total_mass)
        << '\n';
  }
}

void run_compare(const RunConfig& cfg, const MeasureData1D& data, const fs::path& dir,
                 std::ostream& log) {
  const auto tables = build_tables(discretize(data, cfg.n_quad), cfg.kappa);
  const auto snaps = run(data, cfg.kappa, cfg.t_max(), cfg.n_quad, cfg.times);
  const auto x = cfg.grid->points();
  auto out = open_out(dir / "compare.csv");
  out << "t,max_abs_dR,max_abs_dM,atoms_variational,atoms_sticky\n";
  for (std::size_t k = 0; k < cfg.times.size(); ++k) {
    const double t = cfg.times[k];
    const SolutionSlice v = evaluate_slice(tables, t, x);
    const SolutionSlice s = sticky_slice(snaps[k], x);
    double dr = 0.0, dm = 0.0;
    for (std::size_t g = 0; g < x.size(); ++g) {
      dr = std::max(dr, std::abs(v.R[g] - s.R[g]));
      dm = std::max(dm, std::abs(v.M[g] - s.M[g]));
    }
    out << full(t) << ',' << full(dr) << ',' << full(dm) << ',' << v.atoms.size() << ','
        << s.atoms.size() << '\n';
    log << "t=" << label(t) << " max_abs_dR=" << full(dr) << " max_abs_dM=" << full(dm) << '\n';
  }
}

void run_converge(const RunConfig& cfg, const MeasureData1D& data, const fs::path& dir,
                  std::ostream& log) {
  const double t_end = cfg.t_max();
  const auto box = space_box(data, cfg.kappa, t_end);
  const double dx = cfg.grid ? cfg.grid->step() : (box.second - box.first) / 400.0;
  const double dt = cfg.dt ? *cfg.dt : t_end / 100.0;
  std::vector<Resolution> ladder;
  for (std::size_t i = 0; i < cfg.levels; ++i) {
    const double coarsen = std::ldexp(1.0, static_cast<int>(cfg.levels - 1 - i));
    Resolution r;
    r.n_quad = std::max<std::size_t>(1, static_cast<std::size_t>(
                                            static_cast<double>(cfg.n_quad) / coarsen));
    r.dx = dx * coarsen;
    r.dt = dt * coarsen;
    ladder.push_back(r);
  }
  const auto rep = convergence_study(data, cfg.kappa, t_end, ladder, cfg.seed);
  auto report = open_out(dir / "report.txt");
  report << rep.to_text();
  auto csv = open_out(dir / "convergence.csv");
  csv << rep.to_csv();
  log << rep.to_text();
}

}  // namespace

int run(const RunConfig& config, const MeasureData1D& data, const std::string& out_dir,
        std::ostream& log) {
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw SolverError("cannot create output directory '" + out_dir + "'");
  switch (config.mode) {
    case Mode::solve: run_solve(config, data, dir, log); break;
    case Mode::entropy: run_entropy(config, data, dir, log); break;
    case Mode::sticky: run_sticky(config, data, dir, log); break;
    case Mode::characteristics: run_characteristics(config, data, dir, log); break;
    case Mode::radial: run_radial(config, data, dir, log); break;
    case Mode::compare: run_compare(config, data, dir, log); break;
    case Mode::converge: run_converge(config, data, dir, log); break;
  }
  return 0;
}

}  // namespace pep
