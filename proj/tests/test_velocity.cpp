#include <cmath>
#include <limits>

#include "doctest.h"
#include "garz/errors.hpp"
#include "garz/velocity.hpp"

using namespace garz;

namespace {

// brute-force oracle: the same sampled extrema on a much denser grid
struct DenseExtrema {
  double alpha, beta, C;
};

DenseExtrema dense_sample(const VelocityModel& vm, int ns) {
  const Rect& r = vm.rect();
  double d1_max = -1e300, d11_min = 1e300, C = 0.0;
  for (int i = 0; i < ns; ++i) {
    const double xi = r.xi_lo + (r.xi_hi - r.xi_lo) * i / (ns - 1);
    for (int j = 0; j < ns; ++j) {
      const double u = r.u_lo + (r.u_hi - r.u_lo) * j / (ns - 1);
      d1_max = std::max(d1_max, vm.d1(xi, u));
      d11_min = std::min(d11_min, vm.d11(xi, u));
      C = std::max(C, std::abs(vm.value(xi, u)) + std::abs(vm.d1(xi, u)) +
                          std::abs(vm.d2(xi, u)) + std::abs(vm.d11(xi, u)));
    }
  }
  return {-d1_max, -d11_min, C};
}

}  // namespace

TEST_CASE("greenshields satisfies every structural condition") {
  const VelocityModel vm = VelocityModel::greenshields(0.5, 1.0);
  const VelocityReport rep = validate_velocity(vm, 64);
  CHECK(rep.v_min >= 0.0);
  CHECK(rep.d1_max <= 0.0);
  CHECK(rep.d2_min >= 0.0);
  // V(1, u) = 0 along the edge at every sample
  for (int j = 0; j < 64; ++j) {
    const double u = 0.5 + 0.5 * j / 63.0;
    CHECK(vm.value(1.0, u) == 0.0);
  }
  // d11 identically zero, so the root-separation condition holds trivially
  CHECK(rep.beta_V == 0.0);
  CHECK(rep.passes_V3);
  CHECK(rep.alpha_V == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("quadratic law extrema agree with dense sampling") {
  const VelocityModel vm = VelocityModel::quadratic(0.5, 1.0);
  const VelocityReport rep = validate_velocity(vm, 64);
  const DenseExtrema oracle = dense_sample(vm, 1000);  // 10^6 points
  // d1 = -2 u xi vanishes at xi = 0: not strictly monotone
  CHECK(rep.alpha_V == doctest::Approx(oracle.alpha).epsilon(1e-12));
  CHECK(rep.alpha_V == 0.0);
  CHECK(rep.beta_V == doctest::Approx(oracle.beta).epsilon(1e-12));
  CHECK(rep.beta_V == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.C_V == doctest::Approx(oracle.C).epsilon(0.02));
  CHECK_FALSE(rep.passes_V3);
}

TEST_CASE("sampling refinement moves alpha/beta by < 2%") {
  for (const VelocityModel& vm :
       {VelocityModel::greenshields(0.5, 1.0), VelocityModel::quadratic(0.5, 1.0)}) {
    const VelocityReport coarse = validate_velocity(vm, 64);
    const VelocityReport fine = validate_velocity(vm, 1024);
    if (fine.alpha_V > 0.0)
      CHECK(std::abs(coarse.alpha_V - fine.alpha_V) <= 0.02 * fine.alpha_V);
    else
      CHECK(coarse.alpha_V == fine.alpha_V);
    if (fine.beta_V > 0.0)
      CHECK(std::abs(coarse.beta_V - fine.beta_V) <= 0.02 * fine.beta_V);
    else
      CHECK(coarse.beta_V == fine.beta_V);
  }
}

TEST_CASE("violations are reported with a witness") {
  // negative velocity somewhere in the rectangle
  auto neg = VelocityModel::custom(
      [](double xi, double u) { return u * (0.5 - xi); },
      [](double, double) { return -1.0; }, [](double, double) { return 0.0; },
      [](double, double) { return 0.0; }, Rect{0, 1, 0.5, 1.0}, false);
  CHECK_THROWS_AS(validate_velocity(neg), AssumptionViolated);

  // increasing in xi
  auto inc = VelocityModel::custom(
      [](double xi, double u) { return u * xi * (1.0 - xi) + 1e-9; },
      [](double xi, double u) { return u * (1.0 - 2.0 * xi); },
      [](double, double) { return 0.0; }, [](double, double) { return 0.0; },
      Rect{0, 1, 0.5, 1.0}, false);
  CHECK_THROWS_AS(validate_velocity(inc), AssumptionViolated);

  // strict monotonicity claimed but not delivered
  auto flat = VelocityModel::custom(
      [](double, double u) { return u; }, [](double, double) { return 0.0; },
      [](double, double) { return 1.0; }, [](double, double) { return 0.0; },
      Rect{0, 1, 0.5, 1.0}, true);
  CHECK_THROWS_AS(validate_velocity(flat), AssumptionViolated);

  CHECK_THROWS_AS(validate_velocity(VelocityModel::greenshields(0.5, 1.0), 16),
                  AssumptionViolated);
}

TEST_CASE("blowup horizon") {
  const VelocityModel vm = VelocityModel::greenshields(0.5, 1.0);
  const VelocityReport rep = validate_velocity(vm);

  SUBCASE("constant u0 decouples the bound") {
    CHECK(blowup_horizon(rep, 0.0) == std::numeric_limits<double>::infinity());
  }
  SUBCASE("matches the dense-sampling C(V)") {
    const DenseExtrema oracle = dense_sample(vm, 1000);
    CHECK(blowup_horizon(rep, 1.0) == doctest::Approx(1.0 / oracle.C).epsilon(1e-3));
    // |V| + |d1| + |d2| peaks at (xi, u) = (0, 1): 1 + 1 + 1
    CHECK(rep.C_V == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("doubling the marker norm halves the horizon") {
    CHECK(blowup_horizon(rep, 2.0) == doctest::Approx(0.5 * blowup_horizon(rep, 1.0)));
  }
}

TEST_CASE("global-existence epsilon threshold") {
  const VelocityModel vm = VelocityModel::greenshields(0.5, 1.0);

  SUBCASE("no marker variation: any eps works") {
    CHECK(epsilon_global_threshold(vm, 0.0) == std::numeric_limits<double>::infinity());
  }
  SUBCASE("closed form for greenshields on [0,1]x[0.5,1]") {
    // max d2/(-d1) = max (1-xi)/u = 1/0.5 = 2, so eps0 = 1/(1*2)
    CHECK(epsilon_global_threshold(vm, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("unbounded ratio forces eps0 = 0") {
    // d2 > 0 where d1 = 0 (the quadratic law at xi = 0)
    CHECK(epsilon_global_threshold(VelocityModel::quadratic(0.5, 1.0), 1.0) == 0.0);
  }
  SUBCASE("monotone non-increasing in the marker norm") {
    double prev = epsilon_global_threshold(vm, 0.25);
    for (double z : {0.5, 1.0, 2.0, 4.0}) {
      const double cur = epsilon_global_threshold(vm, z);
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}
