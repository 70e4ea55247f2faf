#include "pep/measure_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pep/errors.hpp"
#include "quadrature.hpp"

namespace pep {

double PiecewiseDensity::operator()(double x) const {
  if (empty() || x < breakpoints.front() || x > breakpoints.back()) return 0.0;
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  if (it == breakpoints.end()) return values.back();
  const std::size_t k = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
  const double theta = (x - breakpoints[k]) / (breakpoints[k + 1] - breakpoints[k]);
  return values[k] + (values[k + 1] - values[k]) * theta;
}

double PiecewiseDensity::integral() const {
  if (empty()) return 0.0;
  return cumulative(breakpoints.back());
}

double PiecewiseDensity::cumulative(double x) const {
  if (empty() || x <= breakpoints.front()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double a = breakpoints[k];
    const double b = breakpoints[k + 1];
    if (x >= b) {
      sum += 0.5 * (values[k] + values[k + 1]) * (b - a);
    } else {
      sum += 0.5 * (values[k] + (*this)(x)) * (x - a);
      break;
    }
  }
  return sum;
}

VelocityProfile VelocityProfile::constant(double u) {
  VelocityProfile v;
  v.breakpoints = {0.0};
  v.left_values = {u};
  v.right_values = {u};
  return v;
}

namespace {

double velocity_between(const VelocityProfile& v, std::size_t k, double x) {
  const double a = v.breakpoints[k];
  const double b = v.breakpoints[k + 1];
  const double theta = (x - a) / (b - a);
  return v.right_values[k] + (v.left_values[k + 1] - v.right_values[k]) * theta;
}

}  // namespace

double VelocityProfile::left_limit(double x) const {
  if (empty()) return 0.0;
  const std::size_t n = breakpoints.size();
  const auto i = static_cast<std::size_t>(
      std::lower_bound(breakpoints.begin(), breakpoints.end(), x) - breakpoints.begin());
  if (i < n && breakpoints[i] == x) return left_values[i];
  if (i == 0) return left_values.front();
  if (i == n) return right_values.back();
  return velocity_between(*this, i - 1, x);
}

double VelocityProfile::right_limit(double x) const {
  if (empty()) return 0.0;
  const std::size_t n = breakpoints.size();
  const auto i = static_cast<std::size_t>(
      std::upper_bound(breakpoints.begin(), breakpoints.end(), x) - breakpoints.begin());
  if (i > 0 && breakpoints[i - 1] == x) return right_values[i - 1];
  if (i == 0) return left_values.front();
  if (i == n) return right_values.back();
  return velocity_between(*this, i - 1, x);
}

double VelocityProfile::slope(double x) const {
  if (breakpoints.size() < 2) return 0.0;
  const auto i = static_cast<std::size_t>(
      std::upper_bound(breakpoints.begin(), breakpoints.end(), x) - breakpoints.begin());
  if (i == 0 || i == breakpoints.size()) return 0.0;
  const std::size_t k = i - 1;
  return (left_values[k + 1] - right_values[k]) / (breakpoints[k + 1] - breakpoints[k]);
}

double MeasureData1D::atom_mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.mass;
  return m;
}

double MeasureData1D::total_mass() const { return atom_mass() + ac_density.integral(); }

double MeasureData1D::total_momentum() const {
  double p = 0.0;
  for (const auto& a : atoms) p += a.mass * a.velocity;
  for (const auto& piece : detail::linear_pieces(ac_density, velocity, {})) {
    p += detail::cell_integrals(piece, piece.a, piece.b, 0).momentum;
  }
  return p;
}

double ParticleSystem::total_mass() const {
  detail::CompensatedSum s;
  for (double w : masses) s.add(w);
  return s.value();
}

void ParticleSystem::push_back(double s, double w, double u, double e, bool atom) {
  positions.push_back(s);
  masses.push_back(w);
  velocities.push_back(u);
  fields.push_back(e);
  from_atom.push_back(atom ? 1 : 0);
}

MeasureData1D normalize(const MeasureData1D& data) {
  MeasureData1D out;

  std::vector<DiracAtom> atoms;
  for (const auto& a : data.atoms) {
    if (!std::isfinite(a.position) || !std::isfinite(a.mass) || !std::isfinite(a.velocity)) {
      throw DataError("atom with non-finite entry");
    }
    if (a.mass < 0.0) throw DataError("negative atom mass");
    if (a.mass > 0.0) atoms.push_back(a);
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const DiracAtom& l, const DiracAtom& r) { return l.position < r.position; });
  for (const auto& a : atoms) {
    if (!out.atoms.empty() &&
        std::abs(a.position - out.atoms.back().position) <= kAtomMergeTolerance) {
      DiracAtom& b = out.atoms.back();
      const double m = b.mass + a.mass;
      b.velocity = (b.mass * b.velocity + a.mass * a.velocity) / m;
      b.position = (b.mass * b.position + a.mass * a.position) / m;
      b.mass = m;
    } else {
      out.atoms.push_back(a);
    }
  }

  const auto& bp = data.ac_density.breakpoints;
  const auto& vals = data.ac_density.values;
  if (bp.size() != vals.size()) throw DataError("density breakpoints and values differ in length");
  for (std::size_t k = 0; k < bp.size(); ++k) {
    if (!std::isfinite(bp[k]) || !std::isfinite(vals[k])) throw DataError("non-finite density");
    if (vals[k] < 0.0) throw DataError("negative density sample");
    if (k > 0 && !(bp[k] > bp[k - 1])) throw DataError("density breakpoints not increasing");
  }
  if (bp.size() >= 2) {
    std::size_t lo = 0;
    std::size_t hi = bp.size() - 1;
    while (lo < hi && vals[lo] == 0.0 && vals[lo + 1] == 0.0) ++lo;
    while (hi > lo && vals[hi] == 0.0 && vals[hi - 1] == 0.0) --hi;
    if (hi > lo) {
      out.ac_density.breakpoints.assign(bp.begin() + static_cast<std::ptrdiff_t>(lo),
                                        bp.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
      out.ac_density.values.assign(vals.begin() + static_cast<std::ptrdiff_t>(lo),
                                   vals.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    }
  }

  const auto& v = data.velocity;
  if (v.breakpoints.size() != v.left_values.size() ||
      v.breakpoints.size() != v.right_values.size()) {
    throw DataError("velocity breakpoints and values differ in length");
  }
  for (std::size_t k = 0; k < v.breakpoints.size(); ++k) {
    if (!std::isfinite(v.breakpoints[k]) || !std::isfinite(v.left_values[k]) ||
        !std::isfinite(v.right_values[k])) {
      throw DataError("non-finite velocity");
    }
    if (k > 0 && !(v.breakpoints[k] > v.breakpoints[k - 1])) {
      throw DataError("velocity breakpoints not increasing");
    }
  }
  out.velocity = v;

  if (!(out.total_mass() > 0.0)) throw DataError("total mass is zero");
  return out;
}

double initial_field(const MeasureData1D& data, double s) {
  double left = data.ac_density.cumulative(s);
  double at = 0.0;
  for (const auto& a : data.atoms) {
    if (std::abs(a.position - s) <= kAtomMergeTolerance) {
      at += a.mass;
    } else if (a.position < s) {
      left += a.mass;
    }
  }
  return left + 0.5 * at;
}

namespace detail {

// Shared by the 1D and the radial discretization (power = n-1 there).
ParticleSystem discretize_weighted(const std::vector<DiracAtom>& atoms,
                                   const std::vector<LinearPiece>& pieces, std::size_t n_quad,
                                   int power) {
  ParticleSystem ps;
  CompensatedSum running;
  std::size_t next_atom = 0;
  auto flush_atoms = [&](double upto) {
    while (next_atom < atoms.size() && atoms[next_atom].position <= upto) {
      const DiracAtom& a = atoms[next_atom++];
      ps.push_back(a.position, a.mass, a.velocity, running.value() + 0.5 * a.mass, true);
      running.add(a.mass);
    }
  };
  for (const auto& piece : pieces) {
    flush_atoms(piece.a);
    append_piece_particles(ps, piece, n_quad, power, running);
  }
  flush_atoms(std::numeric_limits<double>::infinity());
  return ps;
}

}  // namespace detail

ParticleSystem discretize(const MeasureData1D& data, std::size_t n_quad) {
  if (n_quad == 0) throw DataError("n_quad must be at least 1");
  std::vector<double> cuts;
  for (const auto& a : data.atoms) cuts.push_back(a.position);
  return detail::discretize_weighted(data.atoms,
                                     detail::linear_pieces(data.ac_density, data.velocity, cuts),
                                     n_quad, 0);
}

namespace {

double parse_number(const std::string& token, int line) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw DataError("line " + std::to_string(line) + ": malformed number '" + token + "'");
  }
  return v;
}

}  // namespace

MeasureData1D parse_initial_data(std::istream& in) {
  enum class Section { none, density, velocity };
  MeasureData1D data;
  Section section = Section::none;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    std::vector<std::string> tok;
    for (std::string w; ss >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    const std::string where = "line " + std::to_string(line) + ": ";

    if (tok[0] == "atom") {
      if (tok.size() != 4) throw DataError(where + "expected 'atom <x> <mass> <u>'");
      const DiracAtom a{parse_number(tok[1], line), parse_number(tok[2], line),
                        parse_number(tok[3], line)};
      if (a.mass < 0.0) throw DataError(where + "negative atom mass");
      data.atoms.push_back(a);
      section = Section::none;
      continue;
    }
    if (tok[0] == "density" || tok[0] == "velocity") {
      if (tok.size() != 1) throw DataError(where + "section header takes no arguments");
      section = tok[0] == "density" ? Section::density : Section::velocity;
      auto& bp = section == Section::density ? data.ac_density.breakpoints
                                             : data.velocity.breakpoints;
      if (!bp.empty()) throw DataError(where + "duplicate '" + tok[0] + "' section");
      continue;
    }

    if (section == Section::density) {
      if (tok.size() != 2) throw DataError(where + "expected '<x> <rho>'");
      const double x = parse_number(tok[0], line);
      const double r = parse_number(tok[1], line);
      auto& d = data.ac_density;
      if (!d.breakpoints.empty() && !(x > d.breakpoints.back())) {
        throw DataError(where + "density breakpoints must be strictly increasing");
      }
      if (r < 0.0) throw DataError(where + "negative density");
      d.breakpoints.push_back(x);
      d.values.push_back(r);
    } else if (section == Section::velocity) {
      if (tok.size() != 2 && tok.size() != 3) {
        throw DataError(where + "expected '<x> <u_left> [u_right]'");
      }
      const double x = parse_number(tok[0], line);
      const double ul = parse_number(tok[1], line);
      const double ur = tok.size() == 3 ? parse_number(tok[2], line) : ul;
      auto& v = data.velocity;
      if (!v.breakpoints.empty() && !(x > v.breakpoints.back())) {
        throw DataError(where + "velocity breakpoints must be strictly increasing");
      }
      v.breakpoints.push_back(x);
      v.left_values.push_back(ul);
      v.right_values.push_back(ur);
    } else {
      throw DataError(where + "unexpected '" + tok[0] + "'");
    }
  }
  if (data.ac_density.breakpoints.size() == 1) {
    throw DataError("density section needs at least two breakpoints");
  }
  return normalize(data);
}

MeasureData1D load_initial_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return parse_initial_data(in);
}

}  // namespace pep
