#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pep/measure_data.hpp"

namespace pep::detail {

// Gauss-Legendre rule with m points on [-1, 1], as (node, weight) pairs.
const std::vector<std::pair<double, double>>& gauss_legendre(int m);

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  explicit CompensatedSum(double start = 0.0) : sum_(start) {}
  void add(double v);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// One piece of the absolutely continuous part on which rho0 and u0 are both linear.
struct LinearPiece {
  double a = 0.0;
  double b = 0.0;
  double rho_a = 0.0;
  double rho_b = 0.0;
  double u_a = 0.0;
  double u_b = 0.0;

  double rho(double s) const;
  double u(double s) const;
};

struct CellIntegrals {
  double mass = 0.0;      // integral of s^p rho
  double momentum = 0.0;  // integral of s^p rho u
};

// Exact (up to rounding) integrals over [c0, c1] with weight s^power.
CellIntegrals cell_integrals(const LinearPiece& piece, double c0, double c1, int power);

// Splits the piece into n_quad equal cells and appends one particle per cell with
// positive mass. `running` holds the mass strictly left of the piece on entry and
// strictly right of it on exit.
void append_piece_particles(ParticleSystem& ps, const LinearPiece& piece, std::size_t n_quad,
                            int power, CompensatedSum& running);

// Pieces of the ac part, split at density and velocity breakpoints and at `extra_cuts`
// inside the support.
std::vector<LinearPiece> linear_pieces(const PiecewiseDensity& density,
                                       const VelocityProfile& velocity,
                                       const std::vector<double>& extra_cuts);

// Atoms and piece cells merged in position order; e is the running average-rule field.
ParticleSystem discretize_weighted(const std::vector<DiracAtom>& atoms,
                                   const std::vector<LinearPiece>& pieces, std::size_t n_quad,
                                   int power);

}  // namespace pep::detail
