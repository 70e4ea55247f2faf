#include "pep/sticky.hpp"

#include <algorithm>
#include <cmath>

#include "pep/errors.hpp"

namespace pep {

double StickyParticle::position(double t, double kappa) const {
  const double tau = t - birth_time;
  return birth_position + birth_velocity * tau + 0.5 * kappa * field * tau * tau;
}

double StickyParticle::velocity(double t, double kappa) const {
  return birth_velocity + kappa * field * (t - birth_time);
}

std::optional<double> collision_time(const StickyParticle& p, const StickyParticle& q,
                                     double now, double kappa) {
  const double gap = q.position(now, kappa) - p.position(now, kappa);
  if (gap <= 0.0) return 0.0;
  const double a = 0.5 * kappa * (q.field - p.field);
  const double b = q.velocity(now, kappa) - p.velocity(now, kappa);
  if (a == 0.0) {
    if (b < 0.0) return -gap / b;
    return std::nullopt;
  }
  const double disc = b * b - 4.0 * a * gap;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double qq = b >= 0.0 ? -0.5 * (b + sq) : -0.5 * (b - sq);
  double best = std::numeric_limits<double>::infinity();
  for (double r : {qq / a, qq != 0.0 ? gap / qq : -1.0}) {
    if (r > 0.0) best = std::min(best, r);
  }
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

StickyState::StickyState(const ParticleSystem& ps, double kappa_) : kappa(kappa_) {
  const std::size_t n = ps.size();
  labels_ = ps.positions;
  pool_.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    StickyParticle p;
    p.id = i;
    p.birth_position = ps.positions[i];
    p.birth_velocity = ps.velocities[i];
    p.mass = ps.masses[i];
    p.field = ps.fields[i];
    p.first = p.last = i;
    p.atom = ps.from_atom[i] != 0;
    pool_.push_back(p);
    is_alive_.push_back(1);
    prev_.push_back(i == 0 ? npos : i - 1);
    next_.push_back(i + 1 == n ? npos : i + 1);
  }
  head_ = n == 0 ? npos : 0;
  alive_ = n;
  for (std::size_t i = 0; i + 1 < n; ++i) schedule(i, i + 1);
}

std::vector<StickyParticle> StickyState::particles() const {
  std::vector<StickyParticle> out;
  out.reserve(alive_);
  for (std::size_t i = head_; i != npos; i = next_[i]) out.push_back(pool_[i]);
  return out;
}

double StickyState::total_mass() const {
  double m = 0.0;
  for (std::size_t i = head_; i != npos; i = next_[i]) m += pool_[i].mass;
  return m;
}

double StickyState::total_momentum() const {
  double p = 0.0;
  for (std::size_t i = head_; i != npos; i = next_[i]) {
    p += pool_[i].mass * pool_[i].velocity(time, kappa);
  }
  return p;
}

void StickyState::schedule(std::size_t left, std::size_t right) {
  if (auto tau = collision_time(pool_[left], pool_[right], time, kappa)) {
    queue_.push({time + *tau, left, right});
  }
}

bool StickyState::valid(const Event& e) const { return is_alive_[e.left] && is_alive_[e.right]; }

bool step_to_next_event(StickyState& s, double horizon) {
  while (!s.queue_.empty() && !s.valid(s.queue_.top())) s.queue_.pop();
  if (s.queue_.empty() || s.queue_.top().time > horizon) {
    if (std::isfinite(horizon)) s.time = std::max(s.time, horizon);
    return false;
  }
  const double t_event = std::max(s.time, s.queue_.top().time);

  // every valid event within the tolerance; each names an adjacent pair
  std::vector<std::size_t> lefts;
  while (!s.queue_.empty() && s.queue_.top().time <= t_event + kSimultaneousTolerance) {
    const auto e = s.queue_.top();
    s.queue_.pop();
    if (s.valid(e)) lefts.push_back(e.left);
  }
  s.time = t_event;

  std::vector<char> joins_next(s.pool_.size(), 0);
  for (std::size_t l : lefts) joins_next[l] = 1;

  std::vector<std::size_t> created;
  std::size_t i = s.head_;
  while (i != StickyState::npos) {
    if (!joins_next[i]) {
      i = s.next_[i];
      continue;
    }
    // chain i -> ... while joins_next
    const std::size_t start = i;
    std::size_t end = i;
    while (joins_next[end] && s.next_[end] != StickyState::npos) end = s.next_[end];

    StickyParticle merged;
    merged.id = s.pool_.size();
    merged.birth_time = t_event;
    merged.first = s.pool_[start].first;
    merged.last = s.pool_[end].last;
    merged.atom = true;
    double mass = 0.0, momentum = 0.0, moment = 0.0;
    std::size_t count = 0;
    for (std::size_t j = start;; j = s.next_[j]) {
      const StickyParticle& p = s.pool_[j];
      mass += p.mass;
      momentum += p.mass * p.velocity(t_event, s.kappa);
      moment += p.mass * p.position(t_event, s.kappa);
      s.is_alive_[j] = 0;
      ++count;
      if (j == end) break;
    }
    merged.mass = mass;
    merged.birth_velocity = momentum / mass;
    merged.birth_position = moment / mass;
    merged.field = (s.pool_[start].field - 0.5 * s.pool_[start].mass) + 0.5 * mass;

    const std::size_t before = s.prev_[start];
    const std::size_t after = s.next_[end];
    s.pool_.push_back(merged);
    s.is_alive_.push_back(1);
    s.prev_.push_back(before);
    s.next_.push_back(after);
    joins_next.push_back(0);
    if (before == StickyState::npos) {
      s.head_ = merged.id;
    } else {
      s.next_[before] = merged.id;
    }
    if (after != StickyState::npos) s.prev_[after] = merged.id;
    s.alive_ -= count - 1;
    created.push_back(merged.id);
    s.log_.push_back({t_event, merged.id, count, merged.birth_position, mass,
                      merged.birth_velocity});
    i = after;
  }

  for (std::size_t id : created) {
    if (s.prev_[id] != StickyState::npos) s.schedule(s.prev_[id], id);
    if (s.next_[id] != StickyState::npos && s.is_alive_[s.next_[id]]) s.schedule(id, s.next_[id]);
  }
  return true;
}

std::vector<StickyState> run(const MeasureData1D& data, double kappa, double t_end,
                             std::size_t n_quad, std::vector<double> snapshot_times) {
  if (!(t_end >= 0.0)) throw SolverError("end time must be nonnegative");
  if (snapshot_times.empty()) snapshot_times.push_back(t_end);
  std::sort(snapshot_times.begin(), snapshot_times.end());
  for (double t : snapshot_times) {
    if (t < 0.0 || t > t_end) throw SolverError("snapshot time outside [0, t_end]");
  }
  StickyState state(discretize(data, n_quad), kappa);
  std::vector<StickyState> out;
  for (double t : snapshot_times) {
    while (step_to_next_event(state, t)) {
    }
    state.time = t;
    out.push_back(state);
  }
  return out;
}

SolutionSlice sticky_slice(const StickyState& state, const std::vector<double>& x_grid) {
  SolutionSlice sl;
  sl.t = state.time;
  sl.kappa = state.kappa;
  sl.x = x_grid;
  const auto ps = state.particles();
  sl.total_mass = state.total_mass();
  const double thr = kAtomThreshold * sl.total_mass;
  const double kappa = state.kappa;
  const double t = state.time;

  double R = 0.0, M = 0.0, W = 0.0, F = 0.0;
  std::size_t j = 0;
  const std::size_t n = x_grid.size();
  for (auto* v : {&sl.y, &sl.R, &sl.M, &sl.W, &sl.F}) v->resize(n);
  for (std::size_t g = 0; g < n; ++g) {
    while (j < ps.size() && ps[j].position(t, kappa) <= x_grid[g]) {
      const StickyParticle& p = ps[j];
      const double v = p.velocity(t, kappa);
      if (p.atom && p.mass > thr && p.position(t, kappa) >= x_grid.front()) {
        ShockAtom a;
        a.position = p.position(t, kappa);
        a.mass = p.mass;
        a.momentum = p.mass * v;
        a.first = p.first;
        a.last = p.last;
        a.R_left = R;
        a.M_left = M;
        a.W_left = W;
        a.F_left = F;
        a.field_sum = p.mass * p.field;
        sl.atoms.push_back(a);
      }
      R += p.mass;
      M += p.mass * v;
      W += p.mass * v * v;
      F += kappa * p.mass * p.field;
      ++j;
    }
    sl.y[g] = j == 0 ? -std::numeric_limits<double>::infinity() : state.labels()[ps[j - 1].last];
    sl.R[g] = R;
    sl.M[g] = M;
    sl.W[g] = W;
    sl.F[g] = F;
  }
  sl.R_smooth = sl.R;
  sl.M_smooth = sl.M;
  sl.W_smooth = sl.W;
  sl.F_smooth = sl.F;
  sl.label = sl.y;
  return sl;
}

}  // namespace pep
