#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pep/measure_data.hpp"

namespace pep {

enum class Mode { solve, sticky, characteristics, radial, entropy, compare, converge };

std::string to_string(Mode mode);

struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 2;

  std::vector<double> points() const;
  double step() const { return (max - min) / static_cast<double>(count - 1); }
};

struct RunConfig {
  Mode mode = Mode::solve;
  double kappa = 0.0;
  std::vector<double> times;
  std::optional<GridSpec> grid;
  std::size_t n_quad = 1000;
  std::optional<double> dt;  // entropy step; defaults to 1e-3 * max time
  int dimension = 0;         // radial mode
  std::string output = ".";
  std::size_t levels = 3;  // converge mode
  std::uint64_t seed = 20240601;

  double t_max() const { return times.empty() ? 0.0 : times.back(); }
  double time_step() const;
};

// key=value lines, '#' comments. Throws ConfigError naming the line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Runs one configuration, writing its files into out_dir. Summary lines go to `log`.
// Throws DataError or SolverError on failure; returns 0 otherwise.
int run(const RunConfig& config, const MeasureData1D& data, const std::string& out_dir,
        std::ostream& log);

}  // namespace pep
