#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pep/fields.hpp"
#include "pep/measure_data.hpp"

namespace pep {

struct Resolution {
  std::size_t n_quad = 1000;
  double dx = 0.01;
  double dt = 0.01;
};

struct ConvergenceRow {
  Resolution resolution;
  double mass_residual = 0.0;
  double momentum_residual = 0.0;
  double oracle_distance = 0.0;  // sup over x and sample times of |R - R_oracle|
};

struct ConvergenceReport {
  std::uint64_t seed = 0;
  double kappa = 0.0;
  double t_end = 0.0;
  std::string oracle;  // "sticky" or "entropy-vs-sticky"
  double x_min = 0.0;
  double x_max = 0.0;
  std::vector<Bump> bumps;
  std::vector<ConvergenceRow> rows;
  std::optional<double> mass_order;
  std::optional<double> momentum_order;
  std::optional<double> oracle_order;

  std::string to_text() const;
  std::string to_csv() const;
};

// Least-squares slope of log(err) against log(h); needs three positive points.
std::optional<double> fitted_order(const std::vector<double>& h, const std::vector<double>& err);

// Space box wide enough to hold every characteristic up to t_end.
std::pair<double, double> space_box(const MeasureData1D& data, double kappa, double t_end);

// Max over bumps of the absolute weak residuals, computed slice by slice on the uniform
// grids of `res` over [x_min, x_max] x [0, t_end].
WeakResiduals max_weak_residuals(const PrefixTables& tables, double t_end, double x_min,
                                 double x_max, double dx, double dt,
                                 const std::vector<Bump>& bumps);

ConvergenceReport convergence_study(const MeasureData1D& data, double kappa, double t_end,
                                    const std::vector<Resolution>& resolutions,
                                    std::uint64_t seed = 20240601, std::size_t n_bumps = 4);

}  // namespace pep
