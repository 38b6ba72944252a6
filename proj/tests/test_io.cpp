#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "garz/io.hpp"

using namespace garz;

TEST_CASE("state csv round-trips at full double precision") {
  const Grid1D g(-1.0, 1.0, 64);
  GridState s;
  s.t = 0.125;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  s.rho.resize(64);
  s.u.resize(64);
  s.z.resize(64);
  s.psi.resize(64);
  XiField f;
  f.xi.resize(64);
  f.h.resize(64);
  for (int i = 0; i < 64; ++i) {
    s.rho[i] = std::abs(d(rng));
    s.u[i] = 1.0 + d(rng) * 1e-7;  // exercise digits beyond float precision
    s.z[i] = d(rng);
    s.psi[i] = d(rng) * 1e-12;
    f.xi[i] = std::abs(d(rng));
    f.h[i] = d(rng) * 37.0;
  }
  const std::string path =
      (std::filesystem::temp_directory_path() / "garz_roundtrip.csv").string();
  write_state_csv(path, s, f, g);
  const StateCsv csv = read_state_csv(path);
  REQUIRE(csv.columns.size() == 7);
  CHECK(csv.columns[0] == "x");
  for (int i = 0; i < 64; ++i) {
    CHECK(csv.data[0][i] == g.center(i));
    CHECK(csv.data[1][i] == s.rho[i]);
    CHECK(csv.data[2][i] == s.u[i]);
    CHECK(csv.data[3][i] == s.z[i]);
    CHECK(csv.data[4][i] == s.psi[i]);
    CHECK(csv.data[5][i] == f.xi[i]);
    CHECK(csv.data[6][i] == f.h[i]);
  }
  std::remove(path.c_str());
}

TEST_CASE("state file names follow the time pattern") {
  CHECK(state_csv_name(0.5) == "state_t0.5000.csv");
  CHECK(state_csv_name(1.0) == "state_t1.0000.csv");
  CHECK(state_csv_name(0.0625) == "state_t0.0625.csv");
}
