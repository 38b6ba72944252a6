#pragma once

#include <map>

#include "garz/initial_data.hpp"
#include "garz/solver_nonlocal.hpp"
#include "garz/state.hpp"
#include "garz/velocity.hpp"

namespace garz {

/// Maximizer of the concave flux rho -> rho V(rho, u) on [0,1], found by
/// golden-section search and cached per u-bucket of width 1e-4.
class RhoStarCache {
 public:
  explicit RhoStarCache(const VelocityModel& vm) : vm_(vm) {}
  double rho_star(double u);

 private:
  const VelocityModel& vm_;
  std::map<long long, double> cache_;
};

/// dt = cfl * dx / max |d(rho V)/drho| sampled at the cell states (the flux
/// is concave in rho, so interval extrema sit at the sampled endpoints).
double cfl_dt_local(const GridState& s, const VelocityModel& vm, const Grid1D& grid,
                    double cfl, double t_next);

/// Godunov demand/supply step for the local system with the marker frozen
/// upwind at each interface:
///   F_{i+1/2} = min(D(rho_i; u_i), S(rho_{i+1}; u_i)),
///   D(r; u) = f(min(r, r*(u)); u),  S(r; u) = f(max(r, r*(u)); u).
/// u, z, psi advected upwind with speed V(rho_i, u_i) >= 0. Throws
/// CflViolation and NonconcaveFlux (concavity of the flux is a
/// precondition, checked at the sampled states).
GridState step_godunov(const GridState& s, const VelocityModel& vm, const Grid1D& grid,
                       double dt, const Inflow& in, RhoStarCache& cache);

/// Entropy reference trajectory at eps = 0; same contract as the nonlocal
/// run, without a kernel. The stored XiFields carry rho and its forward
/// slope so the checkpoint schema matches.
RunResult run_local(const InitialData& id, const VelocityModel& vm, double cfl,
                    const std::vector<double>& checkpoints, double rho_ceiling = 10.0);

}  // namespace garz
