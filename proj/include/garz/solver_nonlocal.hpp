#pragma once

#include <vector>

#include "garz/convolution.hpp"
#include "garz/initial_data.hpp"
#include "garz/kernel.hpp"
#include "garz/state.hpp"
#include "garz/velocity.hpp"

namespace garz {

enum class Scheme { Eulerian, Lagrangian };

/// Running extrema recorded after every step of a run (the solver's own
/// bookkeeping; the diagnostics module re-derives the same quantities from
/// dumped states independently).
struct StepMonitor {
  double min_rho = 0.0, max_rho = 0.0;
  double min_u = 0.0, max_u = 0.0;
  double max_abs_z = 0.0, max_abs_psi = 0.0;
  double min_xi = 0.0, max_xi = 0.0;
  double max_mass_drift_rel = 0.0;
  std::vector<double> t_steps;        // one entry per completed step
  std::vector<double> max_rho_steps;  // max rho at that time
};

struct RunResult {
  std::vector<GridState> states;  // [0] is the initial state at t = 0
  std::vector<XiField> xi;        // xi/h per stored state
  StepMonitor monitor;
  bool horizon_warning = false;
};

/// dt = cfl * dx / max(max_i V(xi_i, u_i), 1e-12), clipped so t + dt never
/// passes t_next.
double cfl_dt(const GridState& s, const VelocityModel& vm, const Kernel& k,
              const Grid1D& grid, double cfl, double t_next);

/// First-order upwind/monotone step:
///   interface speed v_{i+1/2} = V(xi_{i+1}, u_i)  (downstream perceived
///   density, upwind marker), conservative density flux rho_i * v_{i+1/2};
///   u, z, psi advected upwind with cell speed V(xi_i, u_i) >= 0.
/// Throws CflViolation when dt * max speed / dx > 1.
GridState step_eulerian(const GridState& s, const VelocityModel& vm, const Kernel& k,
                        const Grid1D& grid, double dt, const Inflow& in);

/// Perceived density at each particle: exponential scan over the masses
/// strictly ahead, xi_j = (1/eps) sum_{k>j} m_k exp((X_j - X_k)/eps).
/// Own mass excluded (the continuum xi weights mass strictly ahead).
Field xi_at_particles(const ParticleEnsemble& ens, const Kernel& k);

/// Heun (2nd-order) position update along dX/dt = V(xi(X), u_j); markers
/// ride unchanged. Throws OrderingLost if particles cross (dt too large).
ParticleEnsemble step_lagrangian(const ParticleEnsemble& ens, const VelocityModel& vm,
                                 const Kernel& k, double dt);

/// Mass-conservative linear (cloud-in-cell) deposit of particle masses.
Field reconstruct_density(const ParticleEnsemble& ens, const Grid1D& grid);

/// Full grid snapshot from particles: rho by mass deposit, markers by
/// mass-weighted deposit with left-fill across vacuum (markers are constant
/// where rho vanishes).
GridState reconstruct_state(const ParticleEnsemble& ens, const Grid1D& grid,
                            const Inflow& in, double t);

ParticleEnsemble make_ensemble(const InitialData& id);

/// Advances the scenario to each checkpoint time (ascending, > 0) and
/// snapshots the state there. Emits a horizon warning when t_end exceeds
/// the blow-up horizon and neither global-existence condition (the
/// eps-threshold or z0 >= 0) holds. Throws BlowupDetected when max rho
/// exceeds rho_ceiling.
RunResult run(const InitialData& id, const VelocityModel& vm, const Kernel& k,
              double cfl, const std::vector<double>& checkpoints, Scheme scheme,
              double rho_ceiling = 10.0);

/// Constructive-scheme trace: Q_n(t) = sum_j rho0(x_j) |X_{n+1}(t, x_j) -
/// X_n(t, x_j)| dx between successive characteristic flows.
struct PicardTrace {
  std::vector<double> t_samples;            // shared time grid of the samples
  std::vector<std::vector<double>> q_samples;  // per iteration, per time
  std::vector<double> q_sup;                // sup over time, per iteration
  int iterations = 0;                       // inner solves performed
  bool converged = false;
  bool no_contraction = false;  // Q failed to decrease 3 times in a row
};

struct PicardResult {
  std::vector<GridState> states;  // final iterate at the sample times
  PicardTrace trace;
  double delta = 0.0;  // horizon actually used
};

/// Picard iteration of the constructive existence scheme on a fixed time
/// grid over [0, delta] (delta is clamped to half the blow-up horizon):
/// freeze u_n, solve the nonlocal continuity equation for rho_{n+1} with
/// velocity V(xi_{n+1}, u_n), integrate characteristics X_{n+1} by Heun on
/// the frozen field, transport the markers, rebuild u_{n+1} by the
/// cumulative rule, and measure Q_n. Stops when sup_t Q_n < q_tol * Q_1 or
/// after max_iters inner solves.
PicardResult run_picard(const InitialData& id, const VelocityModel& vm, const Kernel& k,
                        double delta, double cfl, int max_iters = 20, double q_tol = 1e-6);

}  // namespace garz
