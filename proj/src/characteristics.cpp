#include "pep/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pep/errors.hpp"
#include "quadrature.hpp"

namespace pep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Interval (r1, r2) of positive times where 1 + d t + c t^2 < 0, empty if r1 = inf.
std::pair<double, double> negative_window(double d, double c) {
  if (c == 0.0) {
    if (d < 0.0) return {-1.0 / d, kInf};
    return {kInf, kInf};
  }
  const double disc = d * d - 4.0 * c;
  if (c > 0.0) {
    if (d >= 0.0 || disc <= 0.0) return {kInf, kInf};
    const double q = 0.5 * (-d + std::sqrt(disc));
    return {1.0 / q, q / c};
  }
  // c < 0: exactly one positive root, negative afterwards
  const double sq = std::sqrt(disc);
  const double q = d >= 0.0 ? -0.5 * (d + sq) : -0.5 * (d - sq);
  const double r1 = q / c;
  const double r2 = 1.0 / q;
  return {r1 > 0.0 ? r1 : r2, kInf};
}

}  // namespace

CriticalTimes critical_times(const MeasureData1D& data, double kappa) {
  CriticalTimes ct{kInf, kInf};
  if (data.ac_density.empty()) return ct;
  const double lo = data.ac_density.support_begin();
  const double hi = data.ac_density.support_end();

  // a downward velocity jump inside the mass breaks smoothness immediately
  const auto& v = data.velocity;
  for (std::size_t k = 0; k < v.breakpoints.size(); ++k) {
    const double s = v.breakpoints[k];
    if (s <= lo || s >= hi) continue;
    const bool mass_near =
        data.ac_density(s) > 0.0 || data.ac_density(std::nextafter(s, -kInf)) > 0.0;
    if (mass_near && v.left_values[k] > v.right_values[k]) return {0.0, kInf};
  }

  std::vector<std::pair<double, double>> windows;
  for (const auto& p : detail::linear_pieces(data.ac_density, data.velocity, {})) {
    const double d = (p.u_b - p.u_a) / (p.b - p.a);
    for (double r : {p.rho_a, p.rho_b}) {
      const auto w = negative_window(d, 0.5 * kappa * r);
      if (std::isfinite(w.first)) windows.push_back(w);
    }
  }
  if (windows.empty()) return ct;
  std::sort(windows.begin(), windows.end());
  ct.t_c1 = windows.front().first;
  if (kappa <= 0.0) return ct;
  double end = windows.front().second;
  for (const auto& w : windows) {
    if (w.first > end) break;
    end = std::max(end, w.second);
  }
  ct.t_c2 = end;
  return ct;
}

CharacteristicFan evolve_smooth(const MeasureData1D& data, double kappa, double t,
                                std::vector<double> labels) {
  if (!data.atoms.empty()) throw SolverError("characteristics need data without atoms");
  if (data.ac_density.empty()) throw SolverError("characteristics need a density");
  if (!(t >= 0.0)) throw SolverError("time must be nonnegative");
  const CriticalTimes ct = critical_times(data, kappa);
  if (t >= ct.t_c1) throw SolverError("characteristics cross before the requested time");

  const double lo = data.ac_density.support_begin();
  const double hi = data.ac_density.support_end();
  if (labels.empty()) {
    const std::size_t n = 257;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  }

  CharacteristicFan fan;
  fan.t = t;
  fan.kappa = kappa;
  fan.labels = std::move(labels);
  for (double a : fan.labels) {
    const double u0 = data.velocity(a);
    // right end of the support takes the limits from inside
    const double in = a >= hi ? std::nextafter(hi, lo) : a;
    const double du0 = data.velocity.slope(in);
    const double r0 = data.ac_density(in);
    const double e0 = initial_field(data, a);
    const double gamma = 1.0 + du0 * t + 0.5 * kappa * r0 * t * t;
    fan.u0.push_back(u0);
    fan.du0.push_back(du0);
    fan.rho0.push_back(r0);
    fan.E0.push_back(e0);
    fan.x.push_back(a + u0 * t + 0.5 * kappa * e0 * t * t);
    fan.u.push_back(u0 + kappa * e0 * t);
    fan.gamma.push_back(gamma);
    fan.rho.push_back(r0 / gamma);
  }
  return fan;
}

double characteristic_label(const MeasureData1D& data, double kappa, double t, double x) {
  const double lo = data.ac_density.support_begin();
  const double hi = data.ac_density.support_end();
  auto path = [&](double a) {
    return a + data.velocity(a) * t + 0.5 * kappa * initial_field(data, a) * t * t;
  };
  double a = lo, b = hi;
  if (x < path(a) || x > path(b)) return std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() *
                                            (1.0 + std::abs(a) + std::abs(b));
       ++it) {
    const double mid = 0.5 * (a + b);
    if (path(mid) <= x) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

double center_of_mass(const MeasureData1D& data, double kappa, double a, double b, double t) {
  double mass = 0.0, first = 0.0, momentum = 0.0, left = 0.0, upto = 0.0;
  for (const auto& at : data.atoms) {
    if (at.position < a) left += at.mass;
    if (at.position <= b) upto += at.mass;
    if (at.position >= a && at.position <= b) {
      mass += at.mass;
      first += at.mass * at.position;
      momentum += at.mass * at.velocity;
    }
  }
  for (const auto& p : detail::linear_pieces(data.ac_density, data.velocity, {})) {
    const double c0 = std::max(a, p.a);
    const double c1 = std::min(b, p.b);
    if (!(c1 > c0)) continue;
    const auto m0 = detail::cell_integrals(p, c0, c1, 0);
    mass += m0.mass;
    momentum += m0.momentum;
    first += detail::cell_integrals(p, c0, c1, 1).mass;
  }
  if (!(mass > 0.0)) throw SolverError("center of mass of an empty label interval");
  left += data.ac_density.cumulative(a);
  upto += data.ac_density.cumulative(b);
  const double e = 0.5 * (left + upto);
  return first / mass + momentum / mass * t + 0.5 * kappa * e * t * t;
}

}  // namespace pep
