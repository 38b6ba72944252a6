#include "garz/solver_local.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "garz/errors.hpp"

namespace garz {

namespace {

double flux(const VelocityModel& vm, double rho, double u) {
  return rho * vm.value(rho, u);
}

double flux_drho(const VelocityModel& vm, double rho, double u) {
  return vm.value(rho, u) + rho * vm.d1(rho, u);
}

double mass_of(const Field& rho, double dx) {
  double s = 0.0;
  for (double v : rho) s += v;
  return s * dx;
}

}  // namespace

double RhoStarCache::rho_star(double u) {
  const long long key = std::llround(u * 1e4);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  // golden-section search for the maximum of the concave flux on [0,1]
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = flux(vm_, c, u), fd = flux(vm_, d, u);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = flux(vm_, c, u);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = flux(vm_, d, u);
    }
  }
  const double rs = 0.5 * (a + b);
  cache_[key] = rs;
  return rs;
}

double cfl_dt_local(const GridState& s, const VelocityModel& vm, const Grid1D& grid,
                    double cfl, double t_next) {
  double wmax = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    wmax = std::max(wmax, std::abs(flux_drho(vm, s.rho[i], s.u[i])));
    if (i + 1 < grid.n)
      wmax = std::max(wmax, std::abs(flux_drho(vm, s.rho[i + 1], s.u[i])));
  }
  double dt = cfl * grid.dx() / std::max(wmax, 1e-12);
  return std::min(dt, t_next - s.t);
}

GridState step_godunov(const GridState& s, const VelocityModel& vm, const Grid1D& grid,
                       double dt, const Inflow& in, RhoStarCache& cache) {
  const int n = grid.n;
  const double dx = grid.dx();
  const double lam = dt / dx;

  double wmax = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d2f = 2.0 * vm.d1(s.rho[i], s.u[i]) + s.rho[i] * vm.d11(s.rho[i], s.u[i]);
    if (d2f > 1e-10) {
      std::ostringstream os;
      os << "flux not concave at rho=" << s.rho[i] << ", u=" << s.u[i];
      throw NonconcaveFlux(os.str());
    }
    wmax = std::max(wmax, std::abs(flux_drho(vm, s.rho[i], s.u[i])));
  }
  if (dt * wmax / dx > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "dt*max|f'|/dx = " << dt * wmax / dx << " > 1 at t = " << s.t;
    throw CflViolation(os.str());
  }

  // F[i] = flux through interface i+1/2, i = 0..n-1; inflow flux is zero
  // (vacuum ghost on the left), outflow uses a zero-gradient ghost.
  Field F(n);
  for (int i = 0; i < n; ++i) {
    const double u = s.u[i];
    const double rs = cache.rho_star(u);
    const double rho_r = i + 1 < n ? s.rho[i + 1] : s.rho[i];
    const double demand = flux(vm, std::min(s.rho[i], rs), u);
    const double supply = flux(vm, std::max(rho_r, rs), u);
    F[i] = std::min(demand, supply);
  }

  GridState ns;
  ns.t = s.t + dt;
  ns.rho.resize(n);
  ns.u.resize(n);
  ns.z.resize(n);
  ns.psi.resize(n);
  for (int i = 0; i < n; ++i) {
    const double flux_in = i > 0 ? F[i - 1] : 0.0;
    ns.rho[i] = s.rho[i] - lam * (F[i] - flux_in);
    const double c = lam * vm.value(s.rho[i], s.u[i]);
    const double uL = i > 0 ? s.u[i - 1] : in.u;
    const double zL = i > 0 ? s.z[i - 1] : in.z;
    const double pL = i > 0 ? s.psi[i - 1] : in.psi;
    ns.u[i] = s.u[i] - c * (s.u[i] - uL);
    ns.z[i] = s.z[i] - c * (s.z[i] - zL);
    ns.psi[i] = s.psi[i] - c * (s.psi[i] - pL);
  }
  return ns;
}

RunResult run_local(const InitialData& id, const VelocityModel& vm, double cfl,
                    const std::vector<double>& checkpoints, double rho_ceiling) {
  const Grid1D grid = id.grid;
  const double dx = grid.dx();
  const Inflow in{id.u_inf, id.z_inf, id.psi0.empty() ? 0.0 : id.psi0.front()};
  RhoStarCache cache(vm);

  GridState s;
  s.t = 0.0;
  s.rho = id.rho0;
  s.u = id.u0;
  s.z = id.z0;
  s.psi = id.psi0;
  const double mass0 = mass_of(s.rho, dx);

  auto slope_field = [&](const GridState& st) {
    XiField f;
    f.xi = st.rho;  // checkpoint schema: xi column carries rho for eps = 0
    f.h.assign(grid.n, 0.0);
    for (int i = 0; i + 1 < grid.n; ++i) f.h[i] = (st.rho[i + 1] - st.rho[i]) / dx;
    if (grid.n > 1) f.h[grid.n - 1] = f.h[grid.n - 2];
    return f;
  };

  RunResult res;
  res.states.push_back(s);
  res.xi.push_back(slope_field(s));
  double max_rho0 = *std::max_element(s.rho.begin(), s.rho.end());
  res.monitor.min_rho = *std::min_element(s.rho.begin(), s.rho.end());
  res.monitor.max_rho = max_rho0;
  res.monitor.t_steps.push_back(0.0);
  res.monitor.max_rho_steps.push_back(max_rho0);

  for (double tc : checkpoints) {
    while (s.t < tc * (1.0 - 1e-14) && tc - s.t > 1e-15) {
      const double dt = cfl_dt_local(s, vm, grid, cfl, tc);
      s = step_godunov(s, vm, grid, dt, in, cache);
      const double rmax = *std::max_element(s.rho.begin(), s.rho.end());
      res.monitor.min_rho = std::min(res.monitor.min_rho,
                                     *std::min_element(s.rho.begin(), s.rho.end()));
      res.monitor.max_rho = std::max(res.monitor.max_rho, rmax);
      const double drift = mass0 > 0.0 ? std::abs(mass_of(s.rho, dx) - mass0) / mass0 : 0.0;
      res.monitor.max_mass_drift_rel = std::max(res.monitor.max_mass_drift_rel, drift);
      res.monitor.t_steps.push_back(s.t);
      res.monitor.max_rho_steps.push_back(rmax);
      if (rmax > rho_ceiling) throw BlowupDetected("local solver exceeded rho ceiling");
    }
    res.states.push_back(s);
    res.xi.push_back(slope_field(s));
  }
  return res;
}

}  // namespace garz
