#pragma once

#include <vector>

#include "pep/variational.hpp"

namespace pep {

struct FieldAtom {
  double position = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double velocity = 0.0;
  double field = 0.0;  // average rule: midpoint of the one-sided limits
};

struct FieldSlice {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> rho;  // absolutely continuous part
  std::vector<double> m;
  std::vector<double> u;  // NaN on vacuum
  std::vector<double> E;
  std::vector<FieldAtom> atoms;
  SolutionSlice potentials;

  // trapezoid integral of rho over the grid plus the atom masses
  double total_mass() const;
};

FieldSlice differentiate(const SolutionSlice& slice);

// Tensor product of two one-dimensional bumps exp(-1/(1-s^2)).
struct Bump {
  double xc = 0.0;
  double tc = 0.0;
  double rx = 1.0;
  double rt = 1.0;

  double value(double x, double t) const;
  double dxt(double x, double t) const;
  double dxx(double x, double t) const;
};

struct WeakResiduals {
  double mass = 0.0;
  double momentum = 0.0;
};

// x-integrals of (R phi_xt + M phi_xx) and (M phi_xt + (W - Z) phi_xx) at the slice time,
// with both one-sided limits of every atom used as quadrature nodes.
WeakResiduals space_integrals(const SolutionSlice& slice, const Bump& phi);

// Trapezoid in time of space_integrals over a uniform time grid.
WeakResiduals weak_residual(const std::vector<FieldSlice>& fields, const Bump& phi);

}  // namespace pep
