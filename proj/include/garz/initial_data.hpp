#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "garz/grid.hpp"

namespace garz {

/// Initial fields on the grid. rho0 and psi0 are prescribed; z0 and u0 are
/// rebuilt from them by left-endpoint cumulative sums so the discrete
/// relations
///     z0[i+1] - z0[i] = rho0[i] * psi0[i] * dx
///     u0[i+1] - u0[i] = rho0[i] * z0[i]  * dx
/// hold exactly (the grid analogue of u0' = z0 rho0 and z0' = rho0 psi0).
struct InitialData {
  Grid1D grid;
  Field rho0, psi0, z0, u0;
  double u_inf = 0.0;  // left limit of u0
  double z_inf = 0.0;  // left limit of z0
  double z0_norm = 0.0;
  double psi0_norm = 0.0;

  double u_min() const;
  double u_max() const;
  double rho0_max() const;
};

/// Builds z0 and u0 from the sampled rho0, psi0. Checks 0 <= rho0 <= 1 and,
/// when require_padding is set, that the support of rho0 keeps at least 5%
/// of the domain length clear on each side (the xi right-closure and the
/// inflow boundary need it). Throws SupportTooWide / NegativeU /
/// AssumptionViolated.
InitialData build_initial_data(const Field& rho0, const Field& psi0,
                               double u_inf, double z_inf, const Grid1D& grid,
                               bool require_padding = true);

/// true iff min z0 >= -1e-12; enables the rho <= max rho0 maximum-principle
/// check downstream.
bool check_nonneg_marker(const Field& z0);

using ParamMap = std::map<std::string, double>;

/// Named initial-data generators ("bump", "front", "box", "riemann",
/// "zero"); parameters are preset-specific, seed feeds the optional noise.
/// A "znorm" parameter rescales psi0 so that ||z0||_inf lands on the target.
InitialData make_initial_data(const std::string& preset, const ParamMap& params,
                              double u_inf, double z_inf, const Grid1D& grid,
                              std::uint64_t seed = 0);

}  // namespace garz
