#include "pep/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pep/errors.hpp"

namespace pep {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::solve: return "solve";
    case Mode::sticky: return "sticky";
    case Mode::characteristics: return "characteristics";
    case Mode::radial: return "radial";
    case Mode::entropy: return "entropy";
    case Mode::compare: return "compare";
    case Mode::converge: return "converge";
  }
  return "?";
}

std::vector<double> GridSpec::points() const {
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; ++i) {
    x[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return x;
}

double RunConfig::time_step() const {
  if (dt) return *dt;
  const double t = t_max();
  return t > 0.0 ? 1e-3 * t : 1e-3;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

double number(const std::string& text, int line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    fail(line, "malformed number '" + text + "'");
  }
  return v;
}

std::uint64_t integer(const std::string& text, int line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    fail(line, "malformed integer '" + text + "'");
  }
  return v;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) fail(line, "expected key=value");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (seen.count(key)) fail(line, "duplicate key '" + key + "'");
    seen[key] = line;

    if (key == "mode") {
      static const std::map<std::string, Mode> modes{
          {"solve", Mode::solve},     {"sticky", Mode::sticky},
          {"characteristics", Mode::characteristics},
          {"radial", Mode::radial},   {"entropy", Mode::entropy},
          {"compare", Mode::compare}, {"converge", Mode::converge}};
      auto it = modes.find(value);
      if (it == modes.end()) fail(line, "unknown mode '" + value + "'");
      cfg.mode = it->second;
    } else if (key == "kappa") {
      cfg.kappa = number(value, line);
    } else if (key == "times") {
      for (const auto& item : split(value, ',')) {
        const double t = number(item, line);
        if (t < 0.0) fail(line, "negative time " + item);
        if (!cfg.times.empty() && t < cfg.times.back()) fail(line, "times must be sorted");
        cfg.times.push_back(t);
      }
      if (cfg.times.empty()) fail(line, "empty time list");
    } else if (key == "grid") {
      const auto parts = split(value, ',');
      if (parts.size() != 3) fail(line, "grid expects min,max,count");
      GridSpec g;
      g.min = number(parts[0], line);
      g.max = number(parts[1], line);
      g.count = static_cast<std::size_t>(integer(parts[2], line));
      if (g.count < 2) fail(line, "grid count must be at least 2");
      if (!(g.max > g.min)) fail(line, "grid max must exceed min");
      cfg.grid = g;
    } else if (key == "n_quad") {
      cfg.n_quad = static_cast<std::size_t>(integer(value, line));
      if (cfg.n_quad < 1) fail(line, "n_quad must be at least 1");
    } else if (key == "dt") {
      const double dt = number(value, line);
      if (!(dt > 0.0)) fail(line, "dt must be positive");
      cfg.dt = dt;
    } else if (key == "n") {
      const auto n = integer(value, line);
      if (n < 1 || n > 64) fail(line, "dimension must be between 1 and 64");
      cfg.dimension = static_cast<int>(n);
    } else if (key == "output") {
      if (value.empty()) fail(line, "empty output directory");
      cfg.output = value;
    } else if (key == "levels") {
      cfg.levels = static_cast<std::size_t>(integer(value, line));
      if (cfg.levels < 2) fail(line, "levels must be at least 2");
    } else if (key == "seed") {
      cfg.seed = integer(value, line);
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }

  for (const char* k : {"mode", "kappa", "times"}) {
    if (!seen.count(k)) throw ConfigError(std::string("missing required key '") + k + "'");
  }
  const bool needs_grid = cfg.mode == Mode::solve || cfg.mode == Mode::sticky ||
                          cfg.mode == Mode::entropy || cfg.mode == Mode::compare ||
                          cfg.mode == Mode::radial;
  if (needs_grid && !cfg.grid) throw ConfigError("missing required key 'grid'");
  if (cfg.mode == Mode::radial) {
    if (!seen.count("n")) throw ConfigError("missing dimension");
    if (cfg.grid->min < 0.0) throw ConfigError("line " + std::to_string(seen["grid"]) +
                                               ": radial grid must start at r >= 0");
  }
  if (cfg.mode == Mode::converge && !(cfg.t_max() > 0.0)) {
    throw ConfigError("line " + std::to_string(seen["times"]) +
                      ": converge mode needs a positive time");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pep
