#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "pep/measure_data.hpp"
#include "pep/variational.hpp"

namespace pep {

// Collisions closer together than this are processed as one event.
inline constexpr double kSimultaneousTolerance = 1e-12;

struct StickyParticle {
  std::size_t id = 0;
  double birth_time = 0.0;
  double birth_position = 0.0;
  double birth_velocity = 0.0;
  double mass = 0.0;
  double field = 0.0;  // mass strictly left plus half its own mass
  std::size_t first = 0;  // range of initial particles it contains
  std::size_t last = 0;
  bool atom = false;

  double position(double t, double kappa) const;
  double velocity(double t, double kappa) const;
};

// Smallest positive time, measured from `now`, at which q catches up with p (p left of q).
// Zero if they already touch.
std::optional<double> collision_time(const StickyParticle& p, const StickyParticle& q,
                                     double now, double kappa);

struct StickyEventRecord {
  double time = 0.0;
  std::size_t id = 0;  // particle created by the merge
  std::size_t merged = 0;
  double position = 0.0;
  double mass = 0.0;
  double velocity = 0.0;
};

class StickyState {
 public:
  StickyState() = default;
  StickyState(const ParticleSystem& ps, double kappa);

  double time = 0.0;
  double kappa = 0.0;

  // Alive particles in position order.
  std::vector<StickyParticle> particles() const;
  std::size_t alive_count() const { return alive_; }
  const std::vector<double>& labels() const { return labels_; }
  const std::vector<StickyEventRecord>& events() const { return log_; }
  double total_mass() const;
  double total_momentum() const;

  friend bool step_to_next_event(StickyState& state, double horizon);

 private:
  struct Event {
    double time;
    std::size_t left;
    std::size_t right;
    bool operator>(const Event& o) const {
      return time != o.time ? time > o.time : left > o.left;
    }
  };

  void schedule(std::size_t left, std::size_t right);
  bool valid(const Event& e) const;

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::vector<StickyParticle> pool_;
  std::vector<char> is_alive_;
  std::vector<std::size_t> prev_;
  std::vector<std::size_t> next_;
  std::size_t head_ = npos;
  std::size_t alive_ = 0;
  std::vector<double> labels_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::vector<StickyEventRecord> log_;
};

// Advances to the earliest collision and merges every chain colliding within
// kSimultaneousTolerance of it. Returns false, with the state moved to the horizon,
// when no collision happens before the horizon.
bool step_to_next_event(StickyState& state,
                        double horizon = std::numeric_limits<double>::infinity());

// Snapshots at the given times (or only t_end when none are given).
std::vector<StickyState> run(const MeasureData1D& data, double kappa, double t_end,
                             std::size_t n_quad, std::vector<double> snapshot_times = {});

// Right-continuous potentials of a sticky state on a grid.
SolutionSlice sticky_slice(const StickyState& state, const std::vector<double>& x_grid);

}  // namespace pep
