#pragma once

#include <vector>

#include "pep/measure_data.hpp"

namespace pep {

struct CriticalTimes {
  double t_c1 = 0.0;  // first time the Jacobian vanishes somewhere; inf if never
  double t_c2 = 0.0;  // first time after t_c1 it is positive again everywhere
};

CriticalTimes critical_times(const MeasureData1D& data, double kappa);

// Smooth solution along labels: x = a + u0 t + kappa E0 t^2 / 2, u = u0 + kappa E0 t,
// Gamma = 1 + u0' t + kappa rho0 t^2 / 2, rho = rho0 / Gamma.
struct CharacteristicFan {
  double t = 0.0;
  double kappa = 0.0;
  std::vector<double> labels;
  std::vector<double> u0;
  std::vector<double> du0;
  std::vector<double> rho0;
  std::vector<double> E0;
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> gamma;
  std::vector<double> rho;
};

// Labels default to 257 equally spaced points across the density support.
CharacteristicFan evolve_smooth(const MeasureData1D& data, double kappa, double t,
                                std::vector<double> labels = {});

// Label whose characteristic reaches x at time t (bisection); NaN outside the image of
// the support. Requires t < t_c1.
double characteristic_label(const MeasureData1D& data, double kappa, double t, double x);

// Parabola traced by the center of mass of the labels in [a, b].
double center_of_mass(const MeasureData1D& data, double kappa, double a, double b, double t);

}  // namespace pep
