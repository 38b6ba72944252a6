#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "garz/errors.hpp"
#include "garz/solver_local.hpp"

using namespace garz;

namespace {

// closed-form LWR rarefaction for f(rho) = rho(1-rho), datum 1 | 0 at x = 0
double rarefaction_exact(double x, double t) {
  const double s = x / t;
  if (s <= -1.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return (1.0 - s) / 2.0;
}

InitialData riemann_data(const Grid1D& g, double rl, double rr) {
  ParamMap p{{"rho_left", rl}, {"rho_right", rr}, {"x_jump", 0.0}};
  return make_initial_data("riemann", p, 1.0, 0.0, g);
}

}  // namespace

TEST_CASE("rho_star of the greenshields flux is 1/2 for every u") {
  const VelocityModel vm = VelocityModel::greenshields(0.5, 1.0);
  RhoStarCache cache(vm);
  for (double u : {0.5, 0.7, 1.0}) CHECK(cache.rho_star(u) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("vacuum is a fixed point") {
  const Grid1D g(-1.0, 1.0, 64);
  const InitialData id = make_initial_data("zero", {}, 1.0, 0.0, g);
  const VelocityModel vm = VelocityModel::greenshields(1.0, 1.0);
  const RunResult res = run_local(id, vm, 0.5, {0.5});
  CHECK(res.states.back().rho == id.rho0);
  CHECK(res.states.back().u == id.u0);
}

TEST_CASE("riemann rarefaction approaches the closed form") {
  const Grid1D g(-2.0, 2.0, 400);
  const InitialData id = riemann_data(g, 1.0, 0.0);
  const VelocityModel vm = VelocityModel::greenshields(1.0, 1.0);
  const RunResult res = run_local(id, vm, 0.5, {0.5});
  double l1 = 0.0;
  for (int i = 0; i < g.n; ++i)
    l1 += std::abs(res.states.back().rho[i] - rarefaction_exact(g.center(i), 0.5)) * g.dx();
  CHECK(l1 < 0.05);
}

TEST_CASE("stationary shock stays put") {
  // f(0.2) = f(0.8) = 0.16: Rankine-Hugoniot speed 0
  const Grid1D g(-2.0, 2.0, 400);
  const InitialData id = riemann_data(g, 0.2, 0.8);
  const VelocityModel vm = VelocityModel::greenshields(1.0, 1.0);
  const RunResult res = run_local(id, vm, 0.5, {1.0});
  const Field& rho = res.states.back().rho;
  // locate the jump: first cell above the midpoint value
  int pos = -1;
  for (int i = 0; i < g.n; ++i)
    if (rho[i] > 0.5) {
      pos = i;
      break;
    }
  REQUIRE(pos >= 0);
  CHECK(std::abs(g.center(pos)) <= 1.5 * g.dx());
}

TEST_CASE("TVD in rho for constant u") {
  const Grid1D g(-2.0, 2.0, 256);
  Field rho(256), psi(256, 0.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 256; ++i) rho[i] = (i > 15 && i < 240) ? d(rng) : 0.0;
  const InitialData id = build_initial_data(rho, psi, 1.0, 0.0, g);
  const VelocityModel vm = VelocityModel::greenshields(1.0, 1.0);

  auto tv = [&](const Field& f) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < f.size(); ++i) s += std::abs(f[i + 1] - f[i]);
    return s;
  };
  const RunResult res = run_local(id, vm, 0.5, {0.1, 0.2, 0.3});
  double prev = tv(res.states.front().rho);
  for (size_t k = 1; k < res.states.size(); ++k) {
    const double cur = tv(res.states[k].rho);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
  CHECK(res.monitor.max_mass_drift_rel <= 1e-12);
}

TEST_CASE("decoupled subsystem: z stays zero, u constant") {
  const Grid1D g(-2.0, 2.0, 128);
  ParamMap p{{"amp", 0.7}, {"center", 0.0}, {"width", 0.8}};
  const InitialData id = make_initial_data("bump", p, 1.0, 0.0, g);
  const VelocityModel vm = VelocityModel::greenshields(1.0, 1.0);
  const RunResult res = run_local(id, vm, 0.5, {0.4});
  for (double v : res.states.back().z) CHECK(v == 0.0);
  for (double v : res.states.back().u) CHECK(v == 1.0);
}

TEST_CASE("non-concave flux is rejected") {
  // V = u (1 - rho)^2 gives f'' = u (6 rho - 4) > 0 for rho > 2/3
  auto vm = VelocityModel::custom(
      [](double xi, double u) { return u * (1.0 - xi) * (1.0 - xi); },
      [](double xi, double u) { return -2.0 * u * (1.0 - xi); },
      [](double xi, double) { return (1.0 - xi) * (1.0 - xi); },
      [](double, double u) { return 2.0 * u; }, Rect{0, 1, 1.0, 1.0}, false);
  const Grid1D g(-1.0, 1.0, 64);
  GridState s;
  s.rho.assign(64, 0.9);
  s.u.assign(64, 1.0);
  s.z.assign(64, 0.0);
  s.psi.assign(64, 0.0);
  RhoStarCache cache(vm);
  CHECK_THROWS_AS(step_godunov(s, vm, g, 1e-3, Inflow{1.0, 0.0, 0.0}, cache),
                  NonconcaveFlux);
}

TEST_CASE("self-convergence under refinement, pre-shock") {
  auto solve = [](int n) {
    const Grid1D g(-2.0, 2.0, n);
    ParamMap p{{"amp", 0.5}, {"center", -0.5}, {"width", 0.7}};
    const InitialData id = make_initial_data("bump", p, 1.0, 0.0, g);
    const VelocityModel vm = VelocityModel::greenshields(1.0, 1.0);
    return run_local(id, vm, 0.5, {0.3}).states.back().rho;
  };
  const Field coarse = solve(200);
  const Field mid = solve(400);
  const Field fine = solve(800);
  auto l1_against_restriction = [](const Field& c, const Field& f, double dx_c) {
    double l1 = 0.0;
    for (size_t i = 0; i < c.size(); ++i)
      l1 += std::abs(c[i] - 0.5 * (f[2 * i] + f[2 * i + 1])) * dx_c;
    return l1;
  };
  const double e1 = l1_against_restriction(coarse, mid, 4.0 / 200);
  const double e2 = l1_against_restriction(mid, fine, 4.0 / 400);
  CHECK(e2 < e1);
  CHECK(e1 / e2 > 1.4);  // ~ first order
}
