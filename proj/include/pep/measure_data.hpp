#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pep {

// Positions closer than this are the same point when atoms are merged.
inline constexpr double kAtomMergeTolerance = 1e-14;

struct DiracAtom {
  double position = 0.0;
  double mass = 0.0;
  double velocity = 0.0;
};

// Continuous piecewise-linear density on [breakpoints.front(), breakpoints.back()],
// zero outside. An empty breakpoint list is the zero density.
struct PiecewiseDensity {
  std::vector<double> breakpoints;
  std::vector<double> values;

  bool empty() const { return breakpoints.size() < 2; }
  double support_begin() const { return breakpoints.front(); }
  double support_end() const { return breakpoints.back(); }

  double operator()(double x) const;
  double integral() const;
  // Integral of the density over (-inf, x].
  double cumulative(double x) const;
};

// Piecewise-linear velocity with possible jumps at breakpoints. Between two
// breakpoints the profile interpolates right_values[k] to left_values[k+1];
// beyond the end breakpoints it is extended by the outermost one-sided value.
struct VelocityProfile {
  std::vector<double> breakpoints;
  std::vector<double> left_values;
  std::vector<double> right_values;

  static VelocityProfile constant(double u);

  bool empty() const { return breakpoints.empty(); }
  double left_limit(double x) const;
  double right_limit(double x) const;
  // Right-continuous evaluation.
  double operator()(double x) const { return right_limit(x); }
  // Slope of the linear piece containing x (the piece to the right at a breakpoint).
  double slope(double x) const;
};

struct MeasureData1D {
  std::vector<DiracAtom> atoms;
  PiecewiseDensity ac_density;
  VelocityProfile velocity;

  double atom_mass() const;
  double total_mass() const;
  // Total momentum: sum of atom momenta plus the integral of u0 * rho0.
  double total_momentum() const;
};

// Weighted particle discretization of a MeasureData1D. Parallel arrays.
struct ParticleSystem {
  std::vector<double> positions;
  std::vector<double> masses;
  std::vector<double> velocities;
  std::vector<double> fields;
  std::vector<char> from_atom;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
  double total_mass() const;
  void push_back(double s, double w, double u, double e, bool atom);
};

MeasureData1D normalize(const MeasureData1D& data);

// Initial field by the average rule: half the sum of the one-sided cumulative masses at s.
double initial_field(const MeasureData1D& data, double s);

// Midpoint-rule discretization with n_quad cells per linear piece of the absolutely
// continuous part; atoms are carried verbatim. Pieces are split at every density
// and velocity breakpoint and at every atom inside the density support, so each
// cell sees linear rho0 and u0. A cell particle carries the exact cell mass, the
// mass-averaged cell velocity and the average-rule field of the cell.
ParticleSystem discretize(const MeasureData1D& data, std::size_t n_quad);

// Line-oriented initial-data format:
//   atom <x> <mass> <u>
//   density            (followed by "<x> <rho>" lines)
//   velocity           (followed by "<x> <u_left> [u_right]" lines)
// '#' starts a comment. Throws DataError with the offending line number.
MeasureData1D parse_initial_data(std::istream& in);
MeasureData1D load_initial_data(const std::string& path);

}  // namespace pep
