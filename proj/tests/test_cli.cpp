#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kData = PEP_DATA_DIR;

int pep_cli(const std::string& args) {
  const std::string cmd = std::string(PEP_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pep_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string run_in(const fs::path& dir, const std::string& cfg, const std::string& dat) {
  return kData + "/configs/" + cfg + " " + kData + "/" + dat + " --out " + dir.string();
}

}  // namespace

TEST_CASE("solve mode writes slices and atoms") {
  const auto dir = scratch("solve");
  REQUIRE(pep_cli(run_in(dir, "split_solve.cfg", "two_particle_repulsive.dat")) == 0);
  CHECK(first_line(dir / "slice_1.csv") == "x,y,R,M,rho_ac,m_ac,u,E");
  CHECK(first_line(dir / "atoms_1.csv") == "z,mass,momentum,velocity");
  CHECK(fs::exists(dir / "slice_0.3.csv"));
  CHECK(fs::exists(dir / "slice_4.csv"));
}

TEST_CASE("reruns are byte-identical") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  REQUIRE(pep_cli(run_in(a, "split_sticky.cfg", "two_particle_repulsive.dat")) == 0);
  REQUIRE(pep_cli(run_in(b, "split_sticky.cfg", "two_particle_repulsive.dat")) == 0);
  for (const char* f : {"trajectory.csv", "events.csv", "slice_4.csv", "atoms_1.csv"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
    CHECK_FALSE(slurp(a / f).empty());
  }
  CHECK(first_line(a / "trajectory.csv") == "t,particle_id,x,mass,u");
  CHECK(first_line(a / "events.csv") == "t,particle_id,x,mass,u,merged");
}

TEST_CASE("other modes") {
  const auto dir = scratch("modes");
  CHECK(pep_cli(run_in(dir, "subcritical_characteristics.cfg", "subcritical_repulsive.dat")) == 0);
  CHECK(slurp(dir / "report.txt").find("t_c1=") != std::string::npos);
  CHECK(first_line(dir / "fan_1.csv") == "label,x,u,gamma,rho");
  CHECK(pep_cli(run_in(dir, "ball_radial.cfg", "uniform_ball.dat")) == 0);
  CHECK(first_line(dir / "radial_1.csv") == "r,y,R,M,varsigma,rho,w");
  CHECK(pep_cli(run_in(dir, "attractive_compare.cfg", "attractive_atoms.dat")) == 0);
  CHECK(first_line(dir / "compare.csv") ==
        "t,max_abs_dR,max_abs_dM,atoms_variational,atoms_sticky");
  CHECK(pep_cli(run_in(dir, "split_entropy.cfg", "two_particle_repulsive.dat")) == 0);
  CHECK(fs::exists(dir / "atoms_4.csv"));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  const auto bad_cfg = dir / "bad.cfg";
  std::ofstream(bad_cfg) << "mode=solve\nkappa=oops\n";
  CHECK(pep_cli(bad_cfg.string() + " " + kData + "/two_particle_repulsive.dat") == 2);
  CHECK(pep_cli("") == 2);

  const auto bad_dat = dir / "bad.dat";
  std::ofstream(bad_dat) << "atom 0 -1 0\n";
  CHECK(pep_cli(kData + "/configs/split_solve.cfg " + bad_dat.string()) == 3);
  CHECK(pep_cli(kData + "/configs/split_solve.cfg /nonexistent.dat") == 3);

  CHECK(pep_cli(kData + "/configs/split_solve.cfg " + kData +
                "/two_particle_repulsive.dat --out /proc/forbidden/out") == 4);
}
