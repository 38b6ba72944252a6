#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "garz/errors.hpp"
#include "garz/runner.hpp"

using namespace garz;

namespace {

std::string resolve_out(const std::string& flag_out, const ScenarioConfig& cfg,
                        const std::string& suffix) {
  std::string root;
  if (!flag_out.empty()) {
    root = flag_out;
  } else if (const char* env = std::getenv("GARZ_OUT")) {
    root = env;
  } else {
    root = cfg.out_dir;
  }
  return suffix.empty() ? root : root + "/" + suffix;
}

ScenarioConfig load_with_overrides(const std::string& path,
                                   const std::vector<std::string>& overrides) {
  ScenarioConfig cfg = load_scenario(path);
  for (const std::string& ov : overrides) apply_override(cfg, ov);
  return cfg;
}

std::vector<double> parse_checkpoints(const std::string& spec, double t_end) {
  if (spec.empty()) return default_checkpoints(t_end);
  std::vector<double> cps;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) cps.push_back(std::stod(tok));
  return cps;
}

std::vector<double> parse_eps_list(const std::string& spec) {
  std::vector<double> out;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal GARZ traffic simulator and verification harness"};
  app.require_subcommand(1);

  std::string scenario_path, out_flag, checkpoints_spec;
  std::vector<std::string> overrides;
  int jobs = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario_path, "scenario file")->required();
    cmd->add_option("--out", out_flag, "output directory root");
    cmd->add_option("--override", overrides, "section.key=value override (repeatable)");
    cmd->add_option("--checkpoints", checkpoints_spec, "comma-separated checkpoint times");
    cmd->add_option("--jobs", jobs, "concurrent sweep workers");
  };

  CLI::App* c_check = app.add_subcommand("check", "validate scenario assumptions");
  add_common(c_check);

  CLI::App* c_run = app.add_subcommand("run", "single run (Eulerian by default)");
  std::string scheme = "eulerian";
  add_common(c_run);
  c_run->add_option("--scheme", scheme, "eulerian | lagrangian | local");

  CLI::App* c_picard = app.add_subcommand("picard", "constructive-scheme iteration");
  double delta = 0.2;
  int max_iters = 20;
  double q_tol = 1e-6;
  add_common(c_picard);
  c_picard->add_option("--delta", delta, "iteration horizon (clamped to half the blow-up horizon)");
  c_picard->add_option("--max-iters", max_iters, "iteration cap");
  c_picard->add_option("--q-tol", q_tol, "stop when sup_t Q_n < q_tol * Q_1");

  CLI::App* c_seps = app.add_subcommand("sweep-eps", "kernel-scale sweep vs local reference");
  std::string eps_spec = "0.4,0.2,0.1,0.05,0.025";
  add_common(c_seps);
  c_seps->add_option("--eps", eps_spec, "comma-separated epsilon values");

  CLI::App* c_smesh = app.add_subcommand("sweep-mesh", "mesh-refinement self-convergence");
  std::string n_spec = "200,400,800";
  add_common(c_smesh);
  c_smesh->add_option("--cells", n_spec, "comma-separated cell counts (each dividing the finest)");

  CLI::App* c_cmp = app.add_subcommand("compare-schemes", "Eulerian vs Lagrangian agreement");
  add_common(c_cmp);

  CLI11_PARSE(app, argc, argv);

  try {
    ScenarioConfig cfg = load_with_overrides(scenario_path, overrides);

    if (c_check->parsed()) {
      const CheckReport rep = check_scenario(cfg);
      std::cout << "alpha_V = " << rep.velocity.alpha_V << "\n"
                << "beta_V = " << rep.velocity.beta_V << "\n"
                << "C_V = " << rep.velocity.C_V << "\n"
                << "passes_V3 = " << (rep.velocity.passes_V3 ? "true" : "false") << "\n"
                << "z0_norm = " << rep.z0_norm << "\n"
                << "psi0_norm = " << rep.psi0_norm << "\n"
                << "blowup_horizon = " << rep.horizon << "\n"
                << "eps_global_threshold = " << rep.eps_threshold << "\n"
                << "z0_nonneg = " << (rep.z0_nonneg ? "true" : "false") << "\n"
                << "check: PASS\n";
      return 0;
    }

    if (c_run->parsed()) {
      const auto cps = parse_checkpoints(checkpoints_spec, cfg.t_end);
      const RunArtifacts art = execute_run(cfg, scheme, cps, resolve_out(out_flag, cfg, ""));
      if (art.result.horizon_warning)
        std::cerr << "HorizonWarning: t_end exceeds the blow-up horizon and no "
                     "global-existence condition holds\n";
      std::cout << "run [" << scheme << "] t_end=" << cfg.t_end
                << " max_rho=" << art.result.monitor.max_rho
                << " mass_drift=" << art.result.monitor.max_mass_drift_rel << " "
                << art.accept_detail << "\n";
      return art.accept_pass ? 0 : 1;
    }

    if (c_picard->parsed()) {
      const PicardArtifacts art =
          execute_picard(cfg, resolve_out(out_flag, cfg, ""), delta, max_iters, q_tol);
      std::cout << "picard " << art.summary << " "
                << (art.result.trace.converged ? "PASS" : "FAIL") << "\n";
      if (art.result.trace.no_contraction) return 5;
      return art.result.trace.converged ? 0 : 1;
    }

    if (c_seps->parsed()) {
      const SweepEpsArtifacts art =
          sweep_eps(cfg, parse_eps_list(eps_spec), jobs, resolve_out(out_flag, cfg, ""));
      std::cout << "eps";
      for (const auto& r : art.table.rows) std::cout << " " << r.eps;
      std::cout << "\nl1_xi";
      for (const auto& r : art.table.rows) std::cout << " " << r.l1_xi;
      std::cout << "\nsup_u";
      for (const auto& r : art.table.rows) std::cout << " " << r.sup_u;
      std::cout << "\nmax_rho";
      for (const auto& r : art.table.rows) std::cout << " " << r.max_rho;
      std::cout << "\nsweep-eps " << art.accept_detail << "\n";
      return art.accept_pass ? 0 : 1;
    }

    if (c_smesh->parsed()) {
      std::vector<int> n_list;
      {
        std::istringstream in(n_spec);
        std::string tok;
        while (std::getline(in, tok, ',')) n_list.push_back(std::stoi(tok));
      }
      const SweepMeshArtifacts art =
          sweep_mesh(cfg, n_list, jobs, resolve_out(out_flag, cfg, ""));
      std::cout << "l1_to_finest";
      for (double v : art.l1_to_finest) std::cout << " " << v;
      std::cout << "\nsweep-mesh PASS\n";
      return 0;
    }

    if (c_cmp->parsed()) {
      const CompareArtifacts art = compare_schemes(cfg, resolve_out(out_flag, cfg, ""));
      std::cout << "l1_rho(t_end) = " << art.l1_rho.back() << "\ncompare-schemes PASS\n";
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const BlowupDetected& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return 3;
  } catch (const CflViolation& e) {
    std::cerr << "cfl violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
