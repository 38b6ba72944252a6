#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "garz/convolution.hpp"
#include "garz/errors.hpp"

using namespace garz;

namespace {

// independent O(N^2) oracle: exact cellwise integration of the exponential
// kernel against piecewise-constant rho, summed left-to-right
Field xi_direct(const Field& rho, double eps, const Grid1D& grid) {
  const int n = grid.n;
  const double dx = grid.dx();
  Field xi(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = i; j < n; ++j) {
      const double a = (j - i) * dx;
      acc += rho[j] * (std::exp(-a / eps) - std::exp(-(a + dx) / eps));
    }
    xi[i] = acc;
  }
  return xi;
}

double sup_diff(const Field& a, const Field& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace

TEST_CASE("zero density gives zero xi and slope") {
  const Grid1D g(-2.0, 2.0, 200);
  const XiField f = compute_xi(Field(200, 0.0), Kernel::exponential(0.1), g);
  for (double v : f.xi) CHECK(v == 0.0);
  for (double v : f.h) CHECK(v == 0.0);
}

TEST_CASE("constant density is reproduced up to the kernel tail") {
  const Grid1D g(0.0, 10.0, 1000);
  const double eps = 0.2;
  const XiField f = compute_xi(Field(1000, 0.7), Kernel::exponential(eps), g);
  // cells with at least 20 eps of plateau ahead see the full kernel mass
  for (int i = 0; i < 1000; ++i) {
    if (g.x_hi - g.center(i) < 20.0 * eps) break;
    CHECK(f.xi[i] == doctest::Approx(0.7).epsilon(std::exp(-20.0)* 2.0));
  }
}

TEST_CASE("step datum matches the closed form at cell centers") {
  // rho = 1 on x >= 0; exact xi = exp(x/eps) left of the step, 1 right of it
  const double eps = 0.05;
  const int n = 401;  // odd cell count puts a center exactly at x = 0
  const Grid1D g(-2.0, 2.0, n);
  Field rho(n);
  for (int i = 0; i < n; ++i) rho[i] = g.center(i) >= 0.0 ? 1.0 : 0.0;
  const XiField f = compute_xi(rho, Kernel::exponential(eps), g);
  CHECK(g.center(n / 2) == doctest::Approx(0.0));
  for (int i = 0; i < n; ++i) {
    const double x = g.center(i);
    if (g.x_hi - x < 30.0 * eps) break;  // right-closure layer
    const double exact = x < 0.0 ? std::exp(x / eps) : 1.0;
    CHECK(f.xi[i] == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("scan agrees with the direct quadrature to 1e-10") {
  const int n = 512;
  const Grid1D g(-3.0, 3.0, n);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  Field rho(n);
  for (double& v : rho) v = d(rng);
  for (double eps : {0.5, 0.1, 0.03}) {
    const XiField f = compute_xi(rho, Kernel::exponential(eps), g);
    CHECK(sup_diff(f.xi, xi_direct(rho, eps, g)) <= 1e-10);
  }
}

TEST_CASE("monotonicity in the density") {
  const int n = 300;
  const Grid1D g(-2.0, 2.0, n);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Field lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = d(rng);
      hi[i] = lo[i] + d(rng) * 0.5;
    }
    const XiField flo = compute_xi(lo, Kernel::exponential(0.15), g);
    const XiField fhi = compute_xi(hi, Kernel::exponential(0.15), g);
    for (int i = 0; i < n; ++i) CHECK(flo.xi[i] <= fhi.xi[i] + 1e-15);
  }
}

TEST_CASE("linearity in the density") {
  const int n = 300;
  const Grid1D g(-2.0, 2.0, n);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  Field rho(n);
  for (double& v : rho) v = d(rng);
  Field scaled = rho;
  for (double& v : scaled) v *= 0.37;
  const XiField a = compute_xi(rho, Kernel::exponential(0.1), g);
  const XiField b = compute_xi(scaled, Kernel::exponential(0.1), g);
  for (int i = 0; i < n; ++i) CHECK(b.xi[i] == doctest::Approx(0.37 * a.xi[i]).epsilon(1e-13));
}

TEST_CASE("excess mass above 1 only lifts xi by delta*(1 - exp(-mu/eps))") {
  const int n = 2000;
  const Grid1D g(0.0, 20.0, n);
  const double eps = 0.5, delta = 0.4, mu = 0.3;
  Field rho(n, 1.0);
  const int block = static_cast<int>(mu / g.dx());
  for (int i = 800; i < 800 + block; ++i) rho[i] = 1.0 + delta;
  const XiField f = compute_xi(rho, Kernel::exponential(eps), g);
  double xi_max = 0.0;
  for (double v : f.xi) xi_max = std::max(xi_max, v);
  CHECK(xi_max <= 1.0 + delta * (1.0 - std::exp(-mu / eps)) + 1e-12);
  CHECK(xi_max > 1.0);  // the block is visible
}

TEST_CASE("tabulated kernel quadrature approximates the exponential") {
  // tabulate exp(x) on [-40, 0]; mass of the piecewise-linear interpolant
  // is within trapezoid error, so compare against the scan loosely
  const int m = 4001;
  std::vector<double> v(m);
  for (int i = 0; i < m; ++i) v[i] = std::exp(-40.0 + 40.0 * i / (m - 1));
  const Kernel tab = Kernel::tabulated(v, 40.0, 0.2);
  const Kernel exp_k = Kernel::exponential(0.2);
  const int n = 400;
  const Grid1D g(-2.0, 2.0, n);
  Field rho(n);
  for (int i = 0; i < n; ++i) rho[i] = 0.8 * std::exp(-4.0 * g.center(i) * g.center(i));
  const XiField a = compute_xi(rho, tab, g);
  const XiField b = compute_xi(rho, exp_k, g);
  CHECK(sup_diff(a.xi, b.xi) < 5e-3);
}

TEST_CASE("exponential identity residual") {
  SUBCASE("constant state: zero residual away from the closure") {
    const Grid1D g(0.0, 10.0, 500);
    const Kernel k = Kernel::exponential(0.1);
    const Field rho(500, 0.6);
    const XiField f = compute_xi(rho, k, g);
    CHECK(check_exponential_identity(rho, f, k, g) <= 1e-12);
  }
  SUBCASE("smooth bump: residual halves under refinement") {
    const Kernel k = Kernel::exponential(0.1);
    double res[3];
    int idx = 0;
    for (int n : {400, 800, 1600}) {
      const Grid1D g(-3.0, 3.0, n);
      Field rho(n);
      for (int i = 0; i < n; ++i) {
        const double x = g.center(i);
        rho[i] = 0.7 * std::exp(-x * x / (2.0 * 0.3 * 0.3));
      }
      const XiField f = compute_xi(rho, k, g);
      res[idx++] = check_exponential_identity(rho, f, k, g);
    }
    CHECK(res[0] / res[1] > 1.6);
    CHECK(res[0] / res[1] < 2.4);
    CHECK(res[1] / res[2] > 1.6);
    CHECK(res[1] / res[2] < 2.4);
  }
  SUBCASE("single-cell spike: matches the hand-evaluated recursion") {
    const int n = 200;
    const Grid1D g(0.0, 2.0, n);
    const double eps = 0.05, dx = g.dx();
    const Kernel k = Kernel::exponential(eps);
    Field rho(n, 0.0);
    rho[100] = 1.0;
    const XiField f = compute_xi(rho, k, g);
    // scan by hand around the spike: xi_k = 1 - exp(-dx/eps), zero ahead
    const double gain = 1.0 - std::exp(-dx / eps);
    const double hand = std::abs(1.0 - gain - eps * gain / dx);
    CHECK(check_exponential_identity(rho, f, k, g) == doctest::Approx(hand).epsilon(1e-13));
  }
  SUBCASE("wrong kernel kind is rejected") {
    const Grid1D g(0.0, 2.0, 64);
    const Kernel tab = Kernel::tabulated({0.0, 1.0, 1.0}, 1.0);
    const Field rho(64, 0.0);
    XiField f;
    f.xi.assign(64, 0.0);
    f.h.assign(64, 0.0);
    CHECK_THROWS_AS(check_exponential_identity(rho, f, tab, g), KernelKindMismatch);
  }
}

TEST_CASE("kernel moments") {
  const double eps = 0.1;
  SUBCASE("values at dx = eps/20, extent 50 eps") {
    const Grid1D g(0.0, 50.0 * eps, 1000);
    auto [m1, m2] = kernel_moment_check(Kernel::exponential(eps), g);
    CHECK(std::abs(m1 - 1.0) <= 0.03);
    CHECK(std::abs(m2 - 2.0) <= 0.06);
  }
  SUBCASE("halving dx halves both errors") {
    const Grid1D coarse(0.0, 50.0 * eps, 1000);
    const Grid1D fine(0.0, 50.0 * eps, 2000);
    auto [m1c, m2c] = kernel_moment_check(Kernel::exponential(eps), coarse);
    auto [m1f, m2f] = kernel_moment_check(Kernel::exponential(eps), fine);
    const double r1 = std::abs(m1c - 1.0) / std::abs(m1f - 1.0);
    const double r2 = std::abs(m2c - 2.0) / std::abs(m2f - 2.0);
    CHECK(r1 > 1.6);
    CHECK(r1 < 2.4);
    CHECK(r2 > 1.6);
    CHECK(r2 < 2.4);
  }
  SUBCASE("short grids are rejected, and for good reason") {
    const Grid1D tiny(0.0, 5.0 * eps, 100);
    CHECK_THROWS_AS(kernel_moment_check(Kernel::exponential(eps), tiny), GridTooShort);
    // tail-integral oracle: the same quadrature truncated at 5 eps loses
    // more than the analytic tail bound 5 exp(-5)
    const double step = tiny.dx() / eps;
    double m1 = 0.0;
    for (int j = 0; j < tiny.n; ++j) {
      const double s = j * step;
      m1 += s * (std::exp(-s) - std::exp(-(s + step)));
    }
    CHECK(std::abs(m1 - 1.0) > 5.0 * std::exp(-5.0));
  }
  SUBCASE("non-exponential kind is rejected") {
    const Grid1D g(0.0, 50.0 * eps, 1000);
    const Kernel tab = Kernel::tabulated({0.0, 0.5, 1.5}, 1.0);
    CHECK_THROWS_AS(kernel_moment_check(tab, g), KernelKindMismatch);
  }
}
