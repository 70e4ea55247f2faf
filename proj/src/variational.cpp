#include "pep/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pep/errors.hpp"

namespace pep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_time(double t) {
  if (!(t >= 0.0)) throw SolverError("time must be nonnegative");
}

}  // namespace

double PrefixTables::phi(std::ptrdiff_t i, double x, double t) const {
  if (i < 0) return 0.0;
  const auto k = static_cast<std::size_t>(i);
  return A[k] + t * B[k] + 0.5 * kappa * t * t * C[k] - x * M[k];
}

double PrefixTables::arrival(std::size_t i, double t) const {
  return particles.positions[i] + t * particles.velocities[i] +
         0.5 * kappa * particles.fields[i] * t * t;
}

PrefixTables build_tables(const ParticleSystem& ps, double kappa) {
  PrefixTables tab;
  tab.particles = ps;
  tab.kappa = kappa;
  const std::size_t n = ps.size();
  tab.M.resize(n);
  tab.A.resize(n);
  tab.B.resize(n);
  tab.C.resize(n);
  double m = 0.0, a = 0.0, b = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = ps.masses[i];
    m += w;
    a += w * ps.positions[i];
    b += w * ps.velocities[i];
    c += w * ps.fields[i];
    tab.M[i] = m;
    tab.A[i] = a;
    tab.B[i] = b;
    tab.C[i] = c;
  }
  return tab;
}

MinimizerResult minimize(const PrefixTables& tables, double x, double t) {
  require_time(t);
  const auto n = static_cast<std::ptrdiff_t>(tables.size());
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  double lo = 0.0, hi = 0.0;
  for (std::ptrdiff_t i = -1; i < n; ++i) {
    const double v = tables.phi(i, x, t);
    values[static_cast<std::size_t>(i + 1)] = v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double tol = kTieTolerance * (hi - lo + std::numeric_limits<double>::min());
  std::ptrdiff_t left = n, right = -2;
  for (std::ptrdiff_t i = -1; i < n; ++i) {
    if (values[static_cast<std::size_t>(i + 1)] <= lo + tol) {
      left = std::min(left, i);
      right = i;
    }
  }
  MinimizerResult r;
  r.index = right;
  r.functional_value = values[static_cast<std::size_t>(right + 1)];
  const auto& s = tables.particles.positions;
  r.y = right >= 0 ? s[static_cast<std::size_t>(right)] : -kInf;
  r.y_left = left >= 0 ? s[static_cast<std::size_t>(left)] : -kInf;
  r.q_at_y = right >= 0 ? tables.arrival(static_cast<std::size_t>(right), t) - x : -kInf;
  return r;
}

std::pair<double, double> potentials_at(const PrefixTables& tables, const MinimizerResult& r,
                                        double t) {
  std::ptrdiff_t k = r.index;
  if (k >= 0 && r.q_at_y > 0.0) --k;
  if (k < 0) return {0.0, 0.0};
  const auto i = static_cast<std::size_t>(k);
  return {tables.M[i], tables.B[i] + tables.kappa * t * tables.C[i]};
}

std::vector<Group> partition_groups(const PrefixTables& tables, double t,
                                    const std::vector<char>* glue) {
  require_time(t);
  const std::size_t n = tables.size();
  const auto& ps = tables.particles;

  struct Block {
    std::size_t first, last;
    double w, wq;
    double mean() const { return wq / w; }
  };
  std::vector<Block> stack;
  stack.reserve(n);

  double qmax = 0.0;
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = tables.arrival(i, t);
    qmax = std::max(qmax, std::abs(q[i]));
  }
  const double tol = 1e-12 * (1.0 + qmax);

  std::size_t i = 0;
  while (i < n) {
    Block b{i, i, ps.masses[i], ps.masses[i] * q[i]};
    while (glue && b.last + 1 < n && (*glue)[b.last]) {
      ++b.last;
      b.w += ps.masses[b.last];
      b.wq += ps.masses[b.last] * q[b.last];
    }
    i = b.last + 1;
    stack.push_back(b);
    while (stack.size() >= 2 &&
           stack[stack.size() - 2].mean() >= stack.back().mean() - tol) {
      Block top = stack.back();
      stack.pop_back();
      Block& prev = stack.back();
      prev.last = top.last;
      prev.w += top.w;
      prev.wq += top.wq;
    }
  }

  std::vector<Group> groups;
  groups.reserve(stack.size());
  for (const auto& b : stack) {
    Group g;
    g.first = b.first;
    g.last = b.last;
    g.position = b.mean();
    for (std::size_t j = b.first; j <= b.last; ++j) {
      const double w = ps.masses[j];
      g.mass += w;
      g.momentum += w * (ps.velocities[j] + tables.kappa * ps.fields[j] * t);
      g.field_sum += w * ps.fields[j];
    }
    g.atom = b.last > b.first || ps.from_atom[b.first];
    groups.push_back(g);
  }
  return groups;
}

SolutionSlice slice_from_groups(const PrefixTables& tables, double t,
                                const std::vector<double>& x_grid,
                                const std::vector<Group>& groups) {
  SolutionSlice sl;
  sl.t = t;
  sl.kappa = tables.kappa;
  sl.total_mass = tables.total_mass();
  sl.x = x_grid;
  const std::size_t G = groups.size();
  const auto& s = tables.particles.positions;
  const double kappa = tables.kappa;

  // cumulative potentials after each group, and the increment of each group
  std::vector<double> Ra(G), Ma(G), Wa(G), Fa(G), dR(G), dM(G), dW(G), dF(G);
  double w_run = 0.0;
  for (std::size_t g = 0; g < G; ++g) {
    const Group& gr = groups[g];
    const std::size_t k = gr.last;
    Ra[g] = tables.M[k];
    Ma[g] = tables.B[k] + kappa * t * tables.C[k];
    w_run += gr.momentum * gr.momentum / gr.mass;
    Wa[g] = w_run;
    Fa[g] = kappa * tables.C[k];
    dR[g] = gr.mass;
    dM[g] = gr.momentum;
    dW[g] = gr.momentum * gr.momentum / gr.mass;
    dF[g] = kappa * gr.field_sum;
  }

  if (!x_grid.empty()) {
    const double lo = x_grid.front();
    const double hi = x_grid.back();
    const double thr = kAtomThreshold * sl.total_mass;
    for (std::size_t g = 0; g < G; ++g) {
      const Group& gr = groups[g];
      if (!gr.atom || !(gr.mass > thr) || gr.position < lo || gr.position > hi) continue;
      ShockAtom a;
      a.position = gr.position;
      a.mass = gr.mass;
      a.momentum = gr.momentum;
      a.first = gr.first;
      a.last = gr.last;
      a.R_left = Ra[g] - dR[g];
      a.M_left = Ma[g] - dM[g];
      a.W_left = Wa[g] - dW[g];
      a.F_left = Fa[g] - dF[g];
      a.field_sum = gr.field_sum;
      sl.atoms.push_back(a);
    }
  }

  const std::size_t n = x_grid.size();
  for (auto* v : {&sl.y, &sl.R, &sl.M, &sl.W, &sl.F, &sl.R_smooth, &sl.M_smooth, &sl.W_smooth,
                  &sl.F_smooth, &sl.label}) {
    v->resize(n);
  }
  std::ptrdiff_t j = -1;  // last group with position <= x
  for (std::size_t p = 0; p < n; ++p) {
    const double x = x_grid[p];
    while (j + 1 < static_cast<std::ptrdiff_t>(G) &&
           groups[static_cast<std::size_t>(j + 1)].position <= x) {
      ++j;
    }
    if (j < 0) {
      sl.y[p] = -kInf;
      sl.label[p] = -kInf;
      sl.R[p] = sl.M[p] = sl.W[p] = sl.F[p] = 0.0;
      sl.R_smooth[p] = sl.M_smooth[p] = sl.W_smooth[p] = sl.F_smooth[p] = 0.0;
      continue;
    }
    const auto L = static_cast<std::size_t>(j);
    sl.y[p] = s[groups[L].last];
    sl.R[p] = Ra[L];
    sl.M[p] = Ma[L];
    sl.W[p] = Wa[L];
    sl.F[p] = Fa[L];
    if (L + 1 == G) {
      sl.R_smooth[p] = Ra[L];
      sl.M_smooth[p] = Ma[L];
      sl.W_smooth[p] = Wa[L];
      sl.F_smooth[p] = Fa[L];
      sl.label[p] = sl.y[p];
      continue;
    }
    const std::size_t R = L + 1;
    const double theta = (x - groups[L].position) / (groups[R].position - groups[L].position);
    const double hl = groups[L].atom ? 0.0 : 0.5;
    const double hr = groups[R].atom ? 0.0 : 0.5;
    auto blend = [&](double after, double dl, double dr) {
      const double left = after - hl * dl;
      const double right = after + hr * dr;
      return left + theta * (right - left);
    };
    sl.R_smooth[p] = blend(Ra[L], dR[L], dR[R]);
    sl.M_smooth[p] = blend(Ma[L], dM[L], dM[R]);
    sl.W_smooth[p] = blend(Wa[L], dW[L], dW[R]);
    sl.F_smooth[p] = blend(Fa[L], dF[L], dF[R]);
    if (!groups[L].atom && !groups[R].atom) {
      const double sl_ = s[groups[L].last];
      const double sr = s[groups[R].first];
      sl.label[p] = sl_ + theta * (sr - sl_);
    } else {
      sl.label[p] = sl.y[p];
    }
  }
  return sl;
}

SolutionSlice evaluate_slice(const PrefixTables& tables, double t,
                             const std::vector<double>& x_grid) {
  require_time(t);
  if (!std::is_sorted(x_grid.begin(), x_grid.end())) throw SolverError("x grid must be sorted");
  return slice_from_groups(tables, t, x_grid, partition_groups(tables, t));
}

double refine_jump(const PrefixTables& tables, double t, double x_lo, double x_hi, double tol) {
  std::ptrdiff_t k_lo = minimize(tables, x_lo, t).index;
  while (x_hi - x_lo > tol) {
    const double mid = 0.5 * (x_lo + x_hi);
    if (mid <= x_lo || mid >= x_hi) break;
    if (minimize(tables, mid, t).index == k_lo) {
      x_lo = mid;
    } else {
      x_hi = mid;
    }
  }
  return 0.5 * (x_lo + x_hi);
}

void ExclusionSet::add(double a, double b) {
  if (!(a < b)) return;
  std::vector<std::pair<double, double>> out;
  out.reserve(intervals.size() + 1);
  bool placed = false;
  for (const auto& iv : intervals) {
    if (iv.second <= a) {
      out.push_back(iv);
    } else if (iv.first >= b) {
      if (!placed) {
        out.emplace_back(a, b);
        placed = true;
      }
      out.push_back(iv);
    } else {
      a = std::min(a, iv.first);
      b = std::max(b, iv.second);
    }
  }
  if (!placed) out.emplace_back(a, b);
  intervals = std::move(out);
}

bool ExclusionSet::contains(double s) const {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), s,
                             [](double v, const std::pair<double, double>& iv) {
                               return v < iv.second;
                             });
  return it != intervals.end() && it->first < s && s < it->second;
}

namespace {

std::vector<char> glue_from(const PrefixTables& tables, const ExclusionSet& D) {
  const std::size_t n = tables.size();
  std::vector<char> glue(n, 0);
  if (D.intervals.empty()) return glue;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    glue[i] = D.contains(tables.particles.positions[i]) ? 1 : 0;
  }
  return glue;
}

void absorb(const PrefixTables& tables, const std::vector<Group>& groups, ExclusionSet& D) {
  const auto& s = tables.particles.positions;
  for (const auto& g : groups) {
    if (g.last == g.first) continue;
    D.add(g.first > 0 ? s[g.first - 1] : -kInf, s[g.last]);
  }
}

}  // namespace

std::pair<SolutionSlice, ExclusionSet> evaluate_entropy_slice(const PrefixTables& tables,
                                                              double t,
                                                              const std::vector<double>& x_grid,
                                                              const ExclusionSet& history,
                                                              double dt) {
  require_time(t);
  if (t < history.time) throw SolverError("entropy slice cannot go back in time");
  if (!(dt > 0.0)) throw SolverError("time step must be positive");
  if (!std::is_sorted(x_grid.begin(), x_grid.end())) throw SolverError("x grid must be sorted");

  ExclusionSet D = history;
  const double t0 = history.time;
  const auto steps = static_cast<std::size_t>(std::ceil((t - t0) / dt - 1e-12));
  for (std::size_t j = 1; j < steps; ++j) {
    const double tau = t0 + (t - t0) * static_cast<double>(j) / static_cast<double>(steps);
    const auto glue = glue_from(tables, D);
    absorb(tables, partition_groups(tables, tau, &glue), D);
    D.time = tau;
  }
  const auto glue = glue_from(tables, D);
  const auto groups = partition_groups(tables, t, &glue);
  absorb(tables, groups, D);
  D.time = t;
  return {slice_from_groups(tables, t, x_grid, groups), D};
}

double shock_speed(const PrefixTables& tables, double z, double t) {
  const double thr = kAtomThreshold * tables.total_mass();
  for (const auto& g : partition_groups(tables, t)) {
    if (g.atom && g.mass > thr && std::abs(g.position - z) <= 1e-9 * (1.0 + std::abs(z))) {
      return g.momentum / g.mass;
    }
  }
  throw SolverError("no delta shock at the requested position");
}

}  // namespace pep
