#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace pep::detail {

namespace {

std::vector<std::pair<double, double>> build_gauss_legendre(int m) {
  std::vector<std::pair<double, double>> rule(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule[static_cast<std::size_t>(i)] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  std::sort(rule.begin(), rule.end());
  return rule;
}

}  // namespace

const std::vector<std::pair<double, double>>& gauss_legendre(int m) {
  static std::mutex mutex;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, build_gauss_legendre(m)).first;
  return it->second;
}

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    compensation_ += (sum_ - t) + v;
  } else {
    compensation_ += (v - t) + sum_;
  }
  sum_ = t;
}

double LinearPiece::rho(double s) const {
  const double theta = (s - a) / (b - a);
  return rho_a + (rho_b - rho_a) * theta;
}

double LinearPiece::u(double s) const {
  const double theta = (s - a) / (b - a);
  return u_a + (u_b - u_a) * theta;
}

CellIntegrals cell_integrals(const LinearPiece& piece, double c0, double c1, int power) {
  // mass integrand has degree power+1, momentum power+2
  const int m = power / 2 + 2;
  const auto& rule = gauss_legendre(m);
  const double mid = 0.5 * (c0 + c1);
  const double half = 0.5 * (c1 - c0);
  CellIntegrals out;
  for (const auto& [node, weight] : rule) {
    const double s = mid + half * node;
    const double wr = weight * std::pow(s, power) * piece.rho(s);
    out.mass += wr;
    out.momentum += wr * piece.u(s);
  }
  out.mass *= half;
  out.momentum *= half;
  return out;
}

void append_piece_particles(ParticleSystem& ps, const LinearPiece& piece, std::size_t n_quad,
                            int power, CompensatedSum& running) {
  const double h = (piece.b - piece.a) / static_cast<double>(n_quad);
  for (std::size_t k = 0; k < n_quad; ++k) {
    const double c0 = piece.a + h * static_cast<double>(k);
    const double c1 = (k + 1 == n_quad) ? piece.b : piece.a + h * static_cast<double>(k + 1);
    const CellIntegrals cell = cell_integrals(piece, c0, c1, power);
    if (!(cell.mass > 0.0)) continue;
    const double left = running.value();
    ps.push_back(0.5 * (c0 + c1), cell.mass, cell.momentum / cell.mass, left + 0.5 * cell.mass,
                 false);
    running.add(cell.mass);
  }
}

std::vector<LinearPiece> linear_pieces(const PiecewiseDensity& density,
                                       const VelocityProfile& velocity,
                                       const std::vector<double>& extra_cuts) {
  std::vector<LinearPiece> pieces;
  if (density.empty()) return pieces;
  const double lo = density.support_begin();
  const double hi = density.support_end();
  std::vector<double> cuts = density.breakpoints;
  for (double x : velocity.breakpoints) {
    if (x > lo && x < hi) cuts.push_back(x);
  }
  for (double x : extra_cuts) {
    if (x > lo && x < hi) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    LinearPiece p;
    p.a = cuts[k];
    p.b = cuts[k + 1];
    p.rho_a = density(p.a);
    p.rho_b = density(p.b);
    if (!(p.rho_a > 0.0) && !(p.rho_b > 0.0)) continue;
    p.u_a = velocity.right_limit(p.a);
    p.u_b = velocity.left_limit(p.b);
    pieces.push_back(p);
  }
  return pieces;
}

}  // namespace pep::detail
