#pragma once

#include <cstddef>
#include <vector>

#include "pep/measure_data.hpp"
#include "pep/variational.hpp"

namespace pep {

// Radially symmetric data in dimension n: density and radial velocity on r >= 0.
struct RadialData {
  int n = 1;
  PiecewiseDensity density;
  VelocityProfile velocity;
};

// Checks n >= 1, a density on r >= 0 and u0(0) = 0.
void validate(const RadialData& data);

// Weighted measure s^(n-1) rho0(s) ds on r >= 0 with the field anchored at the origin.
struct WeightedRadialMeasure {
  int n = 1;
  PiecewiseDensity density;
  VelocityProfile velocity;

  double weighted_density(double s) const;
  // integral over [0, r] of s^(n-1) rho0
  double field(double r) const;
  double total_mass() const;
};

WeightedRadialMeasure reduce(const RadialData& data);

// Particles on r > 0 carrying weighted masses and origin-anchored fields.
ParticleSystem discretize_radial(const RadialData& data, std::size_t n_quad);

struct ShellAtom {
  double radius = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
};

struct RadialSlice {
  double t = 0.0;
  int n = 1;
  std::vector<double> r;
  std::vector<double> y;
  std::vector<double> label;  // interpolated label, see SolutionSlice::label
  std::vector<double> R;
  std::vector<double> M;
  std::vector<double> R_smooth;
  std::vector<double> M_smooth;
  std::vector<double> varsigma;  // r^(n-1) rho
  std::vector<double> rho;       // NaN near the origin
  std::vector<double> w;         // velocity, NaN on vacuum
  std::vector<ShellAtom> atoms;
  double total_mass = 0.0;
};

// The half-line system is mirrored to r < 0 (mass kept, velocity and field negated), so
// shells may pass through the origin; reported potentials count labels in (0, y].
RadialSlice solve_radial(const RadialData& data, double kappa, double t,
                         const std::vector<double>& r_grid, std::size_t n_quad = 1000);

// Even extension of rho0 and odd extension of u0, as one-dimensional data.
MeasureData1D symmetrized(const RadialData& data);

}  // namespace pep
