#include "garz/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "garz/errors.hpp"

namespace garz {

double InitialData::u_min() const { return *std::min_element(u0.begin(), u0.end()); }
double InitialData::u_max() const { return *std::max_element(u0.begin(), u0.end()); }
double InitialData::rho0_max() const { return *std::max_element(rho0.begin(), rho0.end()); }

InitialData build_initial_data(const Field& rho0, const Field& psi0,
                               double u_inf, double z_inf, const Grid1D& grid,
                               bool require_padding) {
  const int n = grid.n;
  if (static_cast<int>(rho0.size()) != n || static_cast<int>(psi0.size()) != n)
    throw AssumptionViolated("initial fields must match the grid size");

  for (int i = 0; i < n; ++i) {
    if (rho0[i] < 0.0 || rho0[i] > 1.0) {
      std::ostringstream os;
      os << "rho0 out of [0,1] at x=" << grid.center(i) << " (value " << rho0[i] << ")";
      throw AssumptionViolated(os.str());
    }
  }

  if (require_padding) {
    int first = n, last = -1;
    for (int i = 0; i < n; ++i)
      if (rho0[i] > 0.0) {
        first = std::min(first, i);
        last = std::max(last, i);
      }
    const int pad = static_cast<int>(std::ceil(0.05 * n));
    if (first < n && (first < pad || last >= n - pad))
      throw SupportTooWide("rho0 support needs >= 5% padding on each side of the grid");
  }

  InitialData id;
  id.grid = grid;
  id.rho0 = rho0;
  id.psi0 = psi0;
  id.u_inf = u_inf;
  id.z_inf = z_inf;
  id.z0.assign(n, 0.0);
  id.u0.assign(n, 0.0);

  const double dx = grid.dx();
  id.z0[0] = z_inf;
  for (int i = 0; i + 1 < n; ++i) id.z0[i + 1] = id.z0[i] + rho0[i] * psi0[i] * dx;
  id.u0[0] = u_inf;
  for (int i = 0; i + 1 < n; ++i) id.u0[i + 1] = id.u0[i] + rho0[i] * id.z0[i] * dx;

  double u_min = id.u0[0];
  for (double v : id.u0) u_min = std::min(u_min, v);
  if (u_min < 0.0) {
    std::ostringstream os;
    os << "u0 dips to " << u_min << " < 0";
    throw NegativeU(os.str());
  }

  for (double v : id.z0) id.z0_norm = std::max(id.z0_norm, std::abs(v));
  for (double v : id.psi0) id.psi0_norm = std::max(id.psi0_norm, std::abs(v));
  return id;
}

bool check_nonneg_marker(const Field& z0) {
  for (double v : z0)
    if (v < -1e-12) return false;
  return true;
}

namespace {

double get(const ParamMap& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

// C-infinity compact bump, = exp(1 - 1/(1-s^2)) on |s| < 1, else 0.
double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

// cubic smoothstep, 0 below 0, 1 above 1
double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * (3.0 - 2.0 * s);
}

}  // namespace

InitialData make_initial_data(const std::string& preset, const ParamMap& params,
                              double u_inf, double z_inf, const Grid1D& grid,
                              std::uint64_t seed) {
  const int n = grid.n;
  Field rho0(n, 0.0), psi0(n, 0.0);
  bool require_padding = true;

  if (preset == "zero") {
    // all zeros
  } else if (preset == "bump") {
    const double amp = get(params, "amp", 0.8);
    const double ctr = get(params, "center", 0.0);
    const double hw = get(params, "width", 1.0);
    const double pamp = get(params, "psi_amp", 0.0);
    const double pctr = get(params, "psi_center", ctr);
    const double phw = get(params, "psi_width", hw);
    for (int i = 0; i < n; ++i) {
      const double x = grid.center(i);
      rho0[i] = amp * bump((x - ctr) / hw);
      psi0[i] = pamp * bump((x - pctr) / phw);
    }
  } else if (preset == "front") {
    // plateau with a gentle left rise and a steep right drop
    const double amp = get(params, "amp", 0.8);
    const double lo = get(params, "plateau_lo", -1.0);
    const double hi = get(params, "plateau_hi", 0.0);
    const double wl = get(params, "rise_width", 0.5);
    const double wr = get(params, "drop_width", 0.1);
    const double pamp = get(params, "psi_amp", 0.0);
    for (int i = 0; i < n; ++i) {
      const double x = grid.center(i);
      rho0[i] = amp * smoothstep((x - (lo - wl)) / wl) * (1.0 - smoothstep((x - hi) / wr));
      psi0[i] = pamp * bump((x - 0.5 * (lo + hi)) / (0.5 * (hi - lo + wl + wr)));
    }
  } else if (preset == "box") {
    const double amp = get(params, "amp", 1.0);
    const double lo = get(params, "lo", 0.0);
    const double hi = get(params, "hi", 1.0);
    const double pamp = get(params, "psi_amp", 0.0);
    for (int i = 0; i < n; ++i) {
      const double x = grid.center(i);
      rho0[i] = (x > lo && x < hi) ? amp : 0.0;
      psi0[i] = pamp;
    }
  } else if (preset == "riemann") {
    // local-solver reference data; support reaches the boundaries
    const double rl = get(params, "rho_left", 1.0);
    const double rr = get(params, "rho_right", 0.0);
    const double xj = get(params, "x_jump", 0.0);
    for (int i = 0; i < n; ++i) rho0[i] = grid.center(i) < xj ? rl : rr;
    require_padding = false;
  } else {
    throw AssumptionViolated("unknown initial-data preset '" + preset + "'");
  }

  const double noise = get(params, "noise", 0.0);
  if (noise > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-noise, noise);
    for (int i = 0; i < n; ++i)
      if (rho0[i] > 0.0) rho0[i] = std::clamp(rho0[i] * (1.0 + d(rng)), 0.0, 1.0);
  }

  InitialData id = build_initial_data(rho0, psi0, u_inf, z_inf, grid, require_padding);

  // optional rescale of psi0 (and z_inf) to land ||z0||_inf on a target
  const double znorm = get(params, "znorm", 0.0);
  if (znorm > 0.0 && id.z0_norm > 0.0) {
    const double s = znorm / id.z0_norm;
    Field psi_scaled = id.psi0;
    for (double& v : psi_scaled) v *= s;
    id = build_initial_data(id.rho0, psi_scaled, u_inf, z_inf * s, grid, require_padding);
  }
  return id;
}

}  // namespace garz
