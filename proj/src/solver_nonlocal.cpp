#include "garz/solver_nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "garz/errors.hpp"

namespace garz {

namespace {

double field_max(const Field& f) { return *std::max_element(f.begin(), f.end()); }
double field_min(const Field& f) { return *std::min_element(f.begin(), f.end()); }

double mass_of(const Field& rho, double dx) {
  double s = 0.0;
  for (double v : rho) s += v;
  return s * dx;
}

}  // namespace

double cfl_dt(const GridState& s, const VelocityModel& vm, const Kernel& k,
              const Grid1D& grid, double cfl, double t_next) {
  const XiField f = compute_xi(s.rho, k, grid);
  double vmax = 0.0;
  for (int i = 0; i < grid.n; ++i) vmax = std::max(vmax, vm.value(f.xi[i], s.u[i]));
  double dt = cfl * grid.dx() / std::max(vmax, 1e-12);
  return std::min(dt, t_next - s.t);
}

GridState step_eulerian(const GridState& s, const VelocityModel& vm, const Kernel& k,
                        const Grid1D& grid, double dt, const Inflow& in) {
  const int n = grid.n;
  const double dx = grid.dx();
  const XiField f = compute_xi(s.rho, k, grid);

  Field v_iface(n), v_cell(n);
  double vmax = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xi_down = i + 1 < n ? f.xi[i + 1] : 0.0;
    v_iface[i] = vm.value(xi_down, s.u[i]);  // interface i+1/2
    v_cell[i] = vm.value(f.xi[i], s.u[i]);
    vmax = std::max(vmax, std::max(v_iface[i], v_cell[i]));
  }
  if (dt * vmax / dx > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "dt*maxV/dx = " << dt * vmax / dx << " > 1 at t = " << s.t;
    throw CflViolation(os.str());
  }

  GridState ns;
  ns.t = s.t + dt;
  ns.rho.resize(n);
  ns.u.resize(n);
  ns.z.resize(n);
  ns.psi.resize(n);
  const double lam = dt / dx;
  for (int i = 0; i < n; ++i) {
    const double flux_out = s.rho[i] * v_iface[i];
    const double flux_in = i > 0 ? s.rho[i - 1] * v_iface[i - 1] : 0.0;
    ns.rho[i] = s.rho[i] - lam * (flux_out - flux_in);
    const double uL = i > 0 ? s.u[i - 1] : in.u;
    const double zL = i > 0 ? s.z[i - 1] : in.z;
    const double pL = i > 0 ? s.psi[i - 1] : in.psi;
    const double c = lam * v_cell[i];
    ns.u[i] = s.u[i] - c * (s.u[i] - uL);
    ns.z[i] = s.z[i] - c * (s.z[i] - zL);
    ns.psi[i] = s.psi[i] - c * (s.psi[i] - pL);
  }
  return ns;
}

Field xi_at_particles(const ParticleEnsemble& ens, const Kernel& k) {
  if (k.kind() != Kernel::Kind::Exponential)
    throw KernelKindMismatch("particle xi uses the exponential scan");
  const size_t n = ens.size();
  Field xi(n, 0.0);
  if (n == 0) return xi;
  const double eps = k.eps();
  double ahead = 0.0;  // sum_{k>j} m_k exp((X_j - X_k)/eps)
  for (size_t j = n - 1; j + 1 > 0; --j) {
    if (j + 1 < n) ahead = std::exp((ens.x[j] - ens.x[j + 1]) / eps) * (ens.m[j + 1] + ahead);
    xi[j] = ahead / eps;
  }
  return xi;
}

ParticleEnsemble step_lagrangian(const ParticleEnsemble& ens, const VelocityModel& vm,
                                 const Kernel& k, double dt) {
  const size_t n = ens.size();
  ParticleEnsemble out = ens;
  if (n == 0) return out;

  const Field xi1 = xi_at_particles(ens, k);
  Field v1(n);
  ParticleEnsemble mid = ens;
  for (size_t j = 0; j < n; ++j) {
    v1[j] = vm.value(xi1[j], ens.u[j]);
    mid.x[j] = ens.x[j] + dt * v1[j];
  }
  if (!mid.sorted()) throw OrderingLost("particles crossed in the predictor step");

  const Field xi2 = xi_at_particles(mid, k);
  for (size_t j = 0; j < n; ++j) {
    const double v2 = vm.value(xi2[j], ens.u[j]);
    out.x[j] = ens.x[j] + 0.5 * dt * (v1[j] + v2);
  }
  if (!out.sorted()) throw OrderingLost("particles crossed (dt too large)");
  return out;
}

Field reconstruct_density(const ParticleEnsemble& ens, const Grid1D& grid) {
  const int n = grid.n;
  const double dx = grid.dx();
  Field rho(n, 0.0);
  for (size_t j = 0; j < ens.size(); ++j) {
    const double s = (ens.x[j] - grid.x_lo) / dx - 0.5;
    if (s <= 0.0) {
      rho[0] += ens.m[j] / dx;
    } else if (s >= n - 1) {
      rho[n - 1] += ens.m[j] / dx;
    } else {
      const int i = static_cast<int>(s);
      const double w = s - i;
      rho[i] += ens.m[j] * (1.0 - w) / dx;
      rho[i + 1] += ens.m[j] * w / dx;
    }
  }
  return rho;
}

GridState reconstruct_state(const ParticleEnsemble& ens, const Grid1D& grid,
                            const Inflow& in, double t) {
  const int n = grid.n;
  const double dx = grid.dx();
  GridState s;
  s.t = t;
  s.rho.assign(n, 0.0);
  Field wu(n, 0.0), wz(n, 0.0), wp(n, 0.0), w(n, 0.0);
  for (size_t j = 0; j < ens.size(); ++j) {
    const double pos = (ens.x[j] - grid.x_lo) / dx - 0.5;
    int i0;
    double frac;
    if (pos <= 0.0) {
      i0 = 0;
      frac = 0.0;
    } else if (pos >= n - 1) {
      i0 = n - 2;
      frac = 1.0;
    } else {
      i0 = static_cast<int>(pos);
      frac = pos - i0;
    }
    const double m = ens.m[j];
    s.rho[i0] += m * (1.0 - frac) / dx;
    s.rho[i0 + 1] += m * frac / dx;
    w[i0] += m * (1.0 - frac);
    w[i0 + 1] += m * frac;
    wu[i0] += m * (1.0 - frac) * ens.u[j];
    wu[i0 + 1] += m * frac * ens.u[j];
    wz[i0] += m * (1.0 - frac) * ens.z[j];
    wz[i0 + 1] += m * frac * ens.z[j];
    wp[i0] += m * (1.0 - frac) * ens.psi[j];
    wp[i0 + 1] += m * frac * ens.psi[j];
  }
  s.u.assign(n, 0.0);
  s.z.assign(n, 0.0);
  s.psi.assign(n, 0.0);
  double u_fill = in.u, z_fill = in.z, p_fill = in.psi;
  for (int i = 0; i < n; ++i) {
    if (w[i] > 0.0) {
      s.u[i] = wu[i] / w[i];
      s.z[i] = wz[i] / w[i];
      s.psi[i] = wp[i] / w[i];
      u_fill = s.u[i];
      z_fill = s.z[i];
      p_fill = s.psi[i];
    } else {  // vacuum: markers are constant across it
      s.u[i] = u_fill;
      s.z[i] = z_fill;
      s.psi[i] = p_fill;
    }
  }
  return s;
}

ParticleEnsemble make_ensemble(const InitialData& id) {
  const int n = id.grid.n;
  const double dx = id.grid.dx();
  ParticleEnsemble ens;
  ens.x.resize(n);
  ens.m.resize(n);
  ens.u.resize(n);
  ens.z.resize(n);
  ens.psi.resize(n);
  for (int i = 0; i < n; ++i) {
    ens.x[i] = id.grid.center(i);
    ens.m[i] = id.rho0[i] * dx;
    ens.u[i] = id.u0[i];
    ens.z[i] = id.z0[i];
    ens.psi[i] = id.psi0[i];
  }
  return ens;
}

namespace {

void monitor_record(StepMonitor& mon, const GridState& s, const XiField& f,
                    double mass0, double dx, bool first) {
  const double rho_min = field_min(s.rho), rho_max = field_max(s.rho);
  const double u_min = field_min(s.u), u_max = field_max(s.u);
  double z_abs = 0.0, p_abs = 0.0;
  for (double v : s.z) z_abs = std::max(z_abs, std::abs(v));
  for (double v : s.psi) p_abs = std::max(p_abs, std::abs(v));
  const double xi_min = field_min(f.xi), xi_max = field_max(f.xi);
  const double drift = mass0 > 0.0 ? std::abs(mass_of(s.rho, dx) - mass0) / mass0 : 0.0;
  if (first) {
    mon.min_rho = rho_min;
    mon.max_rho = rho_max;
    mon.min_u = u_min;
    mon.max_u = u_max;
    mon.max_abs_z = z_abs;
    mon.max_abs_psi = p_abs;
    mon.min_xi = xi_min;
    mon.max_xi = xi_max;
    mon.max_mass_drift_rel = drift;
  } else {
    mon.min_rho = std::min(mon.min_rho, rho_min);
    mon.max_rho = std::max(mon.max_rho, rho_max);
    mon.min_u = std::min(mon.min_u, u_min);
    mon.max_u = std::max(mon.max_u, u_max);
    mon.max_abs_z = std::max(mon.max_abs_z, z_abs);
    mon.max_abs_psi = std::max(mon.max_abs_psi, p_abs);
    mon.min_xi = std::min(mon.min_xi, xi_min);
    mon.max_xi = std::max(mon.max_xi, xi_max);
    mon.max_mass_drift_rel = std::max(mon.max_mass_drift_rel, drift);
  }
  mon.t_steps.push_back(s.t);
  mon.max_rho_steps.push_back(rho_max);
}

}  // namespace

RunResult run(const InitialData& id, const VelocityModel& vm, const Kernel& k,
              double cfl, const std::vector<double>& checkpoints, Scheme scheme,
              double rho_ceiling) {
  const Grid1D grid = id.grid;
  const double dx = grid.dx();
  const Inflow in{id.u_inf, id.z_inf, id.psi0.empty() ? 0.0 : id.psi0.front()};

  RunResult res;
  const VelocityReport vr = validate_velocity(vm);
  const double horizon = blowup_horizon(vr, id.z0_norm);
  const double t_end = checkpoints.empty() ? 0.0 : checkpoints.back();
  const double eps0 = epsilon_global_threshold(vm, id.z0_norm, k.eta0());
  res.horizon_warning =
      t_end > horizon && !(k.eps() < eps0) && !check_nonneg_marker(id.z0);

  GridState s;
  s.t = 0.0;
  s.rho = id.rho0;
  s.u = id.u0;
  s.z = id.z0;
  s.psi = id.psi0;
  const double mass0 = mass_of(s.rho, dx);

  ParticleEnsemble ens;
  if (scheme == Scheme::Lagrangian) ens = make_ensemble(id);

  XiField f = compute_xi(s.rho, k, grid);
  res.states.push_back(s);
  res.xi.push_back(f);
  monitor_record(res.monitor, s, f, mass0, dx, true);

  for (double tc : checkpoints) {
    while (s.t < tc * (1.0 - 1e-14) && tc - s.t > 1e-15) {
      if (scheme == Scheme::Eulerian) {
        const double dt = cfl_dt(s, vm, k, grid, cfl, tc);
        s = step_eulerian(s, vm, k, grid, dt, in);
      } else {
        const Field xi_p = xi_at_particles(ens, k);
        double vmax = 0.0;
        for (size_t j = 0; j < ens.size(); ++j)
          vmax = std::max(vmax, vm.value(xi_p[j], ens.u[j]));
        const double dt = std::min(cfl * dx / std::max(vmax, 1e-12), tc - s.t);
        ens = step_lagrangian(ens, vm, k, dt);
        s = reconstruct_state(ens, grid, in, s.t + dt);
      }
      f = compute_xi(s.rho, k, grid);
      monitor_record(res.monitor, s, f, mass0, dx, false);
      if (res.monitor.max_rho_steps.back() > rho_ceiling) {
        std::ostringstream os;
        os << "max rho = " << res.monitor.max_rho_steps.back() << " exceeded ceiling "
           << rho_ceiling << " at t = " << s.t;
        throw BlowupDetected(os.str());
      }
    }
    res.states.push_back(s);
    res.xi.push_back(f);
  }
  return res;
}

namespace {

// linear interpolation of a cell-centered field, clamped at the ends
double interp(const Field& f, const Grid1D& grid, double x) {
  const double s = (x - grid.x_lo) / grid.dx() - 0.5;
  if (s <= 0.0) return f.front();
  if (s >= grid.n - 1) return f.back();
  const int i = static_cast<int>(s);
  const double w = s - i;
  return (1.0 - w) * f[i] + w * f[i + 1];
}

// X[k][j]: Heun flow of the per-step velocity fields, seeds at cell centers
std::vector<Field> integrate_characteristics(const std::vector<Field>& v,
                                             const Grid1D& grid, double dt) {
  const int steps = static_cast<int>(v.size()) - 1;
  std::vector<Field> X(steps + 1);
  X[0] = grid.centers();
  for (int k = 0; k < steps; ++k) {
    X[k + 1].resize(grid.n);
    for (int j = 0; j < grid.n; ++j) {
      const double v1 = interp(v[k], grid, X[k][j]);
      const double xs = X[k][j] + dt * v1;
      const double v2 = interp(v[k + 1], grid, xs);
      X[k + 1][j] = X[k][j] + 0.5 * dt * (v1 + v2);
    }
  }
  return X;
}

Field cumulative_u(const Field& rho, const Field& z, double u_inf, double dx) {
  Field u(rho.size());
  u[0] = u_inf;
  for (size_t i = 0; i + 1 < rho.size(); ++i) u[i + 1] = u[i] + rho[i] * z[i] * dx;
  return u;
}

}  // namespace

PicardResult run_picard(const InitialData& id, const VelocityModel& vm, const Kernel& k,
                        double delta, double cfl, int max_iters, double q_tol) {
  const Grid1D grid = id.grid;
  const int n = grid.n;
  const double dx = grid.dx();
  const Inflow in{id.u_inf, id.z_inf, id.psi0.empty() ? 0.0 : id.psi0.front()};

  const VelocityReport vr = validate_velocity(vm);
  const double horizon = blowup_horizon(vr, id.z0_norm);
  PicardResult res;
  res.delta = std::min(delta, 0.5 * horizon);

  const double vmax = std::max(vr.v_max, 1e-12);
  const int steps = std::max(1, static_cast<int>(std::ceil(res.delta * 1.05 * vmax / (cfl * dx))));
  const double dt = res.delta / steps;

  res.trace.t_samples.resize(steps + 1);
  for (int kk = 0; kk <= steps; ++kk) res.trace.t_samples[kk] = kk * dt;

  // iteration 0 of the scheme: rho and u frozen at the initial data
  std::vector<Field> u_prev(steps + 1, id.u0);
  std::vector<Field> v(steps + 1);
  {
    const XiField f0 = compute_xi(id.rho0, k, grid);
    Field v0(n);
    for (int i = 0; i < n; ++i) v0[i] = vm.value(f0.xi[i], id.u0[i]);
    std::fill(v.begin(), v.end(), v0);
  }
  std::vector<Field> X_prev = integrate_characteristics(v, grid, dt);

  std::vector<GridState> last_states;
  double q1 = -1.0;
  int stall = 0;

  for (int iter = 1; iter <= max_iters; ++iter) {
    // inner solve: nonlocal continuity equation with the frozen u_prev
    Field rho = id.rho0, z = id.z0, psi = id.psi0;
    std::vector<Field> u_next(steps + 1);
    u_next[0] = cumulative_u(rho, z, id.u_inf, dx);
    last_states.assign(steps + 1, GridState{});
    last_states[0] = GridState{0.0, rho, u_next[0], z, psi};

    for (int kk = 0; kk < steps; ++kk) {
      const XiField f = compute_xi(rho, k, grid);
      Field vk(n), v_iface(n);
      for (int i = 0; i < n; ++i) {
        vk[i] = vm.value(f.xi[i], u_prev[kk][i]);
        const double xi_down = i + 1 < n ? f.xi[i + 1] : 0.0;
        v_iface[i] = vm.value(xi_down, u_prev[kk][i]);
      }
      v[kk] = vk;

      Field rho_new(n), z_new(n), psi_new(n);
      const double lam = dt / dx;
      for (int i = 0; i < n; ++i) {
        const double flux_out = rho[i] * v_iface[i];
        const double flux_in = i > 0 ? rho[i - 1] * v_iface[i - 1] : 0.0;
        rho_new[i] = rho[i] - lam * (flux_out - flux_in);
        const double zL = i > 0 ? z[i - 1] : in.z;
        const double pL = i > 0 ? psi[i - 1] : in.psi;
        const double c = lam * vk[i];
        z_new[i] = z[i] - c * (z[i] - zL);
        psi_new[i] = psi[i] - c * (psi[i] - pL);
      }
      rho.swap(rho_new);
      z.swap(z_new);
      psi.swap(psi_new);
      u_next[kk + 1] = cumulative_u(rho, z, id.u_inf, dx);
      last_states[kk + 1] = GridState{(kk + 1) * dt, rho, u_next[kk + 1], z, psi};
    }
    {  // velocity at the final time level, for the Heun corrector
      const XiField f = compute_xi(rho, k, grid);
      Field vM(n);
      for (int i = 0; i < n; ++i) vM[i] = vm.value(f.xi[i], u_prev[steps][i]);
      v[steps] = vM;
    }

    const std::vector<Field> X_cur = integrate_characteristics(v, grid, dt);

    std::vector<double> q(steps + 1, 0.0);
    double qs = 0.0;
    for (int kk = 0; kk <= steps; ++kk) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += id.rho0[j] * std::abs(X_cur[kk][j] - X_prev[kk][j]);
      q[kk] = acc * dx;
      qs = std::max(qs, q[kk]);
    }
    res.trace.q_samples.push_back(q);
    res.trace.q_sup.push_back(qs);
    res.trace.iterations = iter;

    if (iter == 1) {
      q1 = qs;
      if (q1 == 0.0) {  // nothing moves the flow: fixed point already
        res.trace.converged = true;
        break;
      }
    } else {
      if (qs >= res.trace.q_sup[iter - 2]) {
        if (++stall >= 3) res.trace.no_contraction = true;
      } else {
        stall = 0;
      }
      if (qs < q_tol * q1) {
        res.trace.converged = true;
        X_prev = X_cur;
        u_prev = u_next;
        break;
      }
    }
    X_prev = X_cur;
    u_prev = u_next;
  }

  // thin the stored trajectory to ~21 snapshots
  const int stride = std::max(1, (steps + 1) / 21);
  for (int kk = 0; kk <= steps; kk += stride) res.states.push_back(last_states[kk]);
  if ((steps % stride) != 0) res.states.push_back(last_states[steps]);
  return res;
}

}  // namespace garz
