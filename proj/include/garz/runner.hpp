#pragma once

#include <string>
#include <vector>

#include "garz/diagnostics.hpp"
#include "garz/scenario.hpp"
#include "garz/solver_local.hpp"
#include "garz/solver_nonlocal.hpp"

namespace garz {

/// Aggregate check-command output (structural assumption audit).
struct CheckReport {
  VelocityReport velocity;
  double z0_norm = 0.0;
  double psi0_norm = 0.0;
  double horizon = 0.0;
  double eps_threshold = 0.0;
  bool z0_nonneg = false;
  bool all_pass = false;
};

CheckReport check_scenario(const ScenarioConfig& cfg);

struct RunArtifacts {
  RunResult result;
  DiagnosticsReport report;
  bool accept_pass = true;
  std::string accept_detail;  // "PASS" or "FAIL: ..."
};

/// Default checkpoint times: 20 uniform intervals up to t_end.
std::vector<double> default_checkpoints(double t_end);

/// Executes one run, writes state CSVs, series.csv, diagnostics.json and
/// plot scripts into out_dir, and evaluates the scenario's [accept]
/// thresholds. kind: "eulerian" | "lagrangian" | "local".
RunArtifacts execute_run(const ScenarioConfig& cfg, const std::string& kind,
                         const std::vector<double>& checkpoints,
                         const std::string& out_dir);

struct PicardArtifacts {
  PicardResult result;
  std::string summary;
};

PicardArtifacts execute_picard(const ScenarioConfig& cfg, const std::string& out_dir,
                               double delta, int max_iters, double q_tol);

struct SweepEpsArtifacts {
  ConvergenceTable table;
  std::vector<double> eps_list;
  bool accept_pass = true;
  std::string accept_detail;
};

/// Runs the scenario once per eps (concurrently up to jobs), plus the local
/// Godunov reference, and aggregates the nonlocal-to-local table at t_end.
SweepEpsArtifacts sweep_eps(const ScenarioConfig& cfg, const std::vector<double>& eps_list,
                            int jobs, const std::string& out_root);

struct SweepMeshArtifacts {
  std::vector<int> n_list;
  std::vector<double> l1_to_finest;   // per coarse level
  std::vector<double> observed_orders;
};

SweepMeshArtifacts sweep_mesh(const ScenarioConfig& cfg, const std::vector<int>& n_list,
                              int jobs, const std::string& out_root);

struct CompareArtifacts {
  std::vector<double> t;       // checkpoint times
  std::vector<double> l1_rho;  // Eulerian vs Lagrangian density distance
};

CompareArtifacts compare_schemes(const ScenarioConfig& cfg, const std::string& out_root);

}  // namespace garz
