#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pep/measure_data.hpp"

namespace pep {

// Mass jumps above this fraction of the total mass are reported as delta shocks.
inline constexpr double kAtomThreshold = 1e-9;
// Relative tolerance for ties in the discrete functional.
inline constexpr double kTieTolerance = 1e-11;

// Inclusive prefix sums over the particle list, anchored at the leftmost particle.
struct PrefixTables {
  ParticleSystem particles;
  double kappa = 0.0;
  std::vector<double> M;  // sum w
  std::vector<double> A;  // sum w s
  std::vector<double> B;  // sum w u
  std::vector<double> C;  // sum w e

  std::size_t size() const { return M.size(); }
  double total_mass() const { return M.empty() ? 0.0 : M.back(); }
  // sum_{j<=i} w_j Q_{x,t}(s_j); i = -1 is the empty prefix.
  double phi(std::ptrdiff_t i, double x, double t) const;
  // s_i + t u_i + kappa e_i t^2 / 2
  double arrival(std::size_t i, double t) const;
};

PrefixTables build_tables(const ParticleSystem& ps, double kappa);

struct MinimizerResult {
  std::ptrdiff_t index = -1;  // -1: the empty prefix wins, y = -inf
  double y = 0.0;
  double y_left = 0.0;
  double q_at_y = 0.0;
  double functional_value = 0.0;
};

// Exhaustive scan over all prefixes, rightmost minimizer within the tie tolerance.
MinimizerResult minimize(const PrefixTables& tables, double x, double t);

// R and M from a minimizer, with the one-sided rule: prefix k if Q(y) <= 0, else k-1.
std::pair<double, double> potentials_at(const PrefixTables& tables, const MinimizerResult& r,
                                        double t);

// Maximal runs of particles that arrive together at time t (lower convex hull of the
// cumulative arrival profile). Each run sits at the mass-weighted mean arrival.
struct Group {
  std::size_t first = 0;
  std::size_t last = 0;
  double position = 0.0;
  double mass = 0.0;
  double momentum = 0.0;   // sum w (u + kappa e t)
  double field_sum = 0.0;  // sum w e
  bool atom = false;       // more than one particle, or an initial atom
};

// glue[i] != 0 forces particles i and i+1 into the same group.
std::vector<Group> partition_groups(const PrefixTables& tables, double t,
                                    const std::vector<char>* glue = nullptr);

struct ShockAtom {
  double position = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  std::size_t first = 0;
  std::size_t last = 0;
  // left limits of the potentials; right limits add mass, momentum, momentum^2/mass
  // and kappa * sum(w e) respectively
  double R_left = 0.0;
  double M_left = 0.0;
  double W_left = 0.0;
  double F_left = 0.0;
  double field_sum = 0.0;
};

struct SolutionSlice {
  double t = 0.0;
  double kappa = 0.0;
  double total_mass = 0.0;
  std::vector<double> x;
  // right-continuous discrete values
  std::vector<double> y;
  std::vector<double> R;
  std::vector<double> M;
  std::vector<double> W;  // integral of rho u^2
  std::vector<double> F;  // integral of kappa rho E
  // potentials with each quadrature particle spread over its neighborhood
  std::vector<double> R_smooth;
  std::vector<double> M_smooth;
  std::vector<double> W_smooth;
  std::vector<double> F_smooth;
  std::vector<double> label;
  std::vector<ShockAtom> atoms;
};

SolutionSlice evaluate_slice(const PrefixTables& tables, double t,
                             const std::vector<double>& x_grid);

// Builds a slice from a precomputed partition.
SolutionSlice slice_from_groups(const PrefixTables& tables, double t,
                                const std::vector<double>& x_grid,
                                const std::vector<Group>& groups);

// Bisection on x for the jump of y between x_lo and x_hi, using the exhaustive minimizer.
double refine_jump(const PrefixTables& tables, double t, double x_lo, double x_hi,
                   double tol = 1e-10);

// Labels swallowed by shocks up to `time`, as sorted disjoint open intervals.
struct ExclusionSet {
  double time = 0.0;
  std::vector<std::pair<double, double>> intervals;

  void add(double a, double b);
  bool contains(double s) const;
};

std::pair<SolutionSlice, ExclusionSet> evaluate_entropy_slice(const PrefixTables& tables,
                                                              double t,
                                                              const std::vector<double>& x_grid,
                                                              const ExclusionSet& history,
                                                              double dt);

// Velocity of the delta shock at z: momentum over mass of its label interval.
double shock_speed(const PrefixTables& tables, double z, double t);

}  // namespace pep
