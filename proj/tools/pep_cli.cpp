#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pep/config.hpp"
#include "pep/errors.hpp"
#include "pep/measure_data.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pressureless Euler-Poisson solver"};
  std::string config_path, data_path, out_dir;
  app.add_option("config", config_path, "run configuration (key=value)")->required();
  app.add_option("data", data_path, "initial data file")->required();
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  pep::RunConfig cfg;
  try {
    cfg = pep::load_config(config_path);
  } catch (const pep::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  pep::MeasureData1D data;
  try {
    data = pep::load_initial_data(data_path);
  } catch (const pep::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  }
  try {
    return pep::run(cfg, data, out_dir.empty() ? cfg.output : out_dir, std::cout);
  } catch (const pep::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 4;
  }
}
