// Runs the built CLI as a subprocess.
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
  int exit_code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string command = std::string(WARPMESH_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("warpmesh_cli_test_" + name);
}

}  // namespace

TEST_CASE("cost table") {
  const auto r = run("cost --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "scheme,sums,mults,memory\n"
        "TWM,99,9,54\n"
        "WTWM,40.25,22.75,22.75\n"
        "FDS,54,9,18\n"
        "WFDS,17.5,8.75,7\n");
  CHECK(run("cost --format xml").exit_code == 2);
}

TEST_CASE("invalid arguments exit with code 2") {
  CHECK(run("simulate --scheme wtwm --alpha 0.3 --steps 10").exit_code == 2);
  CHECK(run("simulate --scheme twm --alpha -0.45 --steps 10").exit_code == 2);
  CHECK(run("simulate --scheme rect").exit_code == 2);
  CHECK(run("simulate --side 1 --steps 10").exit_code == 2);
  CHECK(run("").exit_code == 2);
}

TEST_CASE("simulate writes one row per step and is deterministic") {
  const auto a = run("simulate --scheme twm --side 24 --steps 16384");
  REQUIRE(a.exit_code == 0);
  const auto rows = lines(a.out);
  REQUIRE(rows.size() == 16385);
  CHECK(rows[0] == "step,value");
  CHECK(rows[1] == "0,1");
  CHECK(rows.back().rfind("16383,", 0) == 0);
  const auto b = run("simulate --scheme twm --side 24 --steps 16384");
  CHECK(a.out == b.out);

  const auto w1 = run("simulate --scheme wfds --side 12 --steps 2000");
  const auto w2 = run("simulate --scheme wfds --side 12 --steps 2000 --alpha -0.45");
  CHECK(w1.exit_code == 0);
  CHECK(w1.out == w2.out);
}

TEST_CASE("wav output") {
  const auto path = scratch("probe.wav");
  const auto r = run("simulate --scheme fds --side 8 --steps 100 -o /dev/null --wav " + path.string());
  REQUIRE(r.exit_code == 0);
  const std::string wav = slurp(path);
  REQUIRE(wav.size() == 44 + 2 * 100);
  CHECK(wav.substr(0, 4) == "RIFF");
  CHECK(wav.substr(8, 8) == "WAVEfmt ");
  CHECK(wav.substr(36, 4) == "data");
  std::filesystem::remove(path);
}

TEST_CASE("modes below the fundamental") {
  const auto r = run("modes --side 8 --steps 512 --fft-size 1024 --max-omega 0.01");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "m,n,omega_ideal,omega_predicted,omega_measured,deviation\n");
}

TEST_CASE("modes of a small membrane") {
  const auto r = run("modes --side 12 --steps 4096 --fft-size 16384 --max-omega 1");
  REQUIRE(r.exit_code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() > 2);
  CHECK(rows[1].rfind("1,1,", 0) == 0);
}

TEST_CASE("dispersion and warp map") {
  const auto d = run("dispersion --points 16");
  REQUIRE(d.exit_code == 0);
  CHECK(lines(d.out).size() == 17);
  CHECK(lines(d.out)[0] == "omega_nominal,speed_ratio");

  const auto m = run("warp-map --alpha 0,-0.45 --points 5");
  REQUIRE(m.exit_code == 0);
  const auto rows = lines(m.out);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "alpha,omega,omega_tilde");
  CHECK(rows[1] == "0,0,0");
  CHECK(rows[5] == "0,3.14159265,6.28318531");
  CHECK(rows[10] == "-0.45,3.14159265,6.28318531");
  CHECK(run("warp-map --alpha 0.5").exit_code == 2);
}

TEST_CASE("lattice dump") {
  const auto r = run("lattice --side 4");
  REQUIRE(r.exit_code == 0);
  const auto rows = lines(r.out);
  CHECK(rows[0] == "id,x,y,is_rim,n0,n1,n2,n3,n4,n5");
  CHECK(rows.size() > 20);
}

TEST_CASE("config file") {
  const auto path = scratch("run.ini");
  {
    std::ofstream cfg(path);
    cfg << "[simulate]\nscheme=fds\nsteps=7\nside=6\n";
  }
  const auto r = run("--config " + path.string() + " simulate");
  CHECK(r.exit_code == 0);
  CHECK(lines(r.out).size() == 8);
  std::filesystem::remove(path);
}
