#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "garz/grid.hpp"
#include "garz/initial_data.hpp"
#include "garz/kernel.hpp"
#include "garz/velocity.hpp"

namespace garz {

/// Flat key = value scenario file, sections in brackets:
///   [domain]   x_lo, x_hi, n_cells
///   [time]     t_end, cfl
///   [kernel]   kind (exponential), epsilon
///   [velocity] law (greenshields | quadratic), u_min, u_max (omit for auto)
///   [initial]  preset, u_inf, z_inf, seed, plus preset parameters
///   [output]   dir, formats (csv,json,gnuplot)
///   [accept]   optional PASS/FAIL thresholds evaluated by the CLI summary
struct ScenarioConfig {
  // [domain]
  double x_lo = -3.0, x_hi = 3.0;
  int n_cells = 400;
  // [time]
  double t_end = 1.0;
  double cfl = 0.5;
  // [kernel]
  std::string kernel_kind = "exponential";
  double epsilon = 0.1;
  // [velocity]
  std::string law = "greenshields";
  double u_min = 0.0, u_max = 0.0;  // both 0 => derive from initial data
  // [initial]
  std::string preset = "bump";
  ParamMap initial_params;
  double u_inf = 1.0, z_inf = 0.0;
  std::uint64_t seed = 0;
  // [output]
  std::string out_dir = "out";
  std::string formats = "csv,json,gnuplot";
  // [accept]
  ParamMap accept;
  // solver guard
  double rho_ceiling = 10.0;

  Grid1D grid() const { return Grid1D(x_lo, x_hi, n_cells); }
  Kernel kernel() const;
  InitialData initial_data() const;
  /// Velocity law with the rectangle pinned by the config or, when u_min =
  /// u_max = 0, by the range of the built initial u0.
  VelocityModel velocity(const InitialData& id) const;

  /// Checks the structural invariants (x_lo < x_hi, n >= 16, 0 < cfl <= 1,
  /// epsilon > 0); throws AssumptionViolated.
  void validate() const;
};

/// Parses a scenario file. Syntax errors carry 1-based line numbers.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text);

/// Applies "section.key=value" overrides (the CLI --override flag).
void apply_override(ScenarioConfig& cfg, const std::string& assignment);

}  // namespace garz
