#include "garz/runner.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "garz/errors.hpp"
#include "garz/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace garz {

namespace {

json scenario_echo(const ScenarioConfig& cfg) {
  json j;
  j["domain"] = {{"x_lo", cfg.x_lo}, {"x_hi", cfg.x_hi}, {"n_cells", cfg.n_cells}};
  j["time"] = {{"t_end", cfg.t_end}, {"cfl", cfg.cfl}};
  j["kernel"] = {{"kind", cfg.kernel_kind}, {"epsilon", cfg.epsilon}};
  j["velocity"] = {{"law", cfg.law}, {"u_min", cfg.u_min}, {"u_max", cfg.u_max}};
  json init = {{"preset", cfg.preset}, {"u_inf", cfg.u_inf}, {"z_inf", cfg.z_inf},
               {"seed", cfg.seed}};
  for (const auto& [k, v] : cfg.initial_params) init[k] = v;
  j["initial"] = init;
  return j;
}

json record_json(const CheckpointRecord& r) {
  return json{{"t", r.t},           {"mass", r.mass},       {"rho_min", r.rho_min},
              {"rho_max", r.rho_max}, {"u_min", r.u_min},   {"u_max", r.u_max},
              {"z_min", r.z_min},   {"z_max", r.z_max},     {"psi_min", r.psi_min},
              {"psi_max", r.psi_max}, {"xi_min", r.xi_min}, {"xi_max", r.xi_max},
              {"m_t", r.m_t},       {"tv_xi", r.tv_xi},     {"consistency", r.consistency}};
}

double finite_or(double v, double fallback) { return std::isfinite(v) ? v : fallback; }

void write_report_json(const std::string& path, const ScenarioConfig& cfg,
                       const DiagnosticsReport& rep, const RunResult& run,
                       const std::string& kind) {
  json j;
  j["scenario"] = scenario_echo(cfg);
  j["scheme"] = kind;
  j["horizon_warning"] = run.horizon_warning;
  json recs = json::array();
  for (const auto& r : rep.records) recs.push_back(record_json(r));
  j["checkpoints"] = recs;
  j["window"] = {{"lo", rep.window_lo}, {"hi", rep.window_hi}};
  if (rep.oleinik) {
    j["oleinik_fit"] = {{"a", rep.oleinik->a},
                        {"c", finite_or(rep.oleinik->c, 0.0)},
                        {"c_finite", std::isfinite(rep.oleinik->c)},
                        {"satisfied", rep.oleinik->satisfied}};
  }
  j["monitor"] = {{"min_rho", run.monitor.min_rho},
                  {"max_rho", run.monitor.max_rho},
                  {"min_u", run.monitor.min_u},
                  {"max_u", run.monitor.max_u},
                  {"max_abs_z", run.monitor.max_abs_z},
                  {"max_abs_psi", run.monitor.max_abs_psi},
                  {"min_xi", run.monitor.min_xi},
                  {"max_xi", run.monitor.max_xi},
                  {"max_mass_drift_rel", run.monitor.max_mass_drift_rel}};
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

// [accept] threshold evaluation; only keys present in the scenario bind.
std::pair<bool, std::string> evaluate_accept(const ScenarioConfig& cfg, const RunResult& run,
                                             const InitialData& id) {
  const auto& acc = cfg.accept;
  std::ostringstream fail;
  bool ok = true;
  auto gate = [&](const char* key, double value, bool upper) {
    auto it = acc.find(key);
    if (it == acc.end()) return;
    const bool pass = upper ? value <= it->second : value >= it->second;
    if (!pass) {
      ok = false;
      fail << (fail.tellp() > 0 ? "; " : "") << key << "=" << value << " vs " << it->second;
    }
  };
  gate("rho_max", run.monitor.max_rho, true);
  gate("rho_min", run.monitor.min_rho, false);
  gate("xi_max", run.monitor.max_xi, true);
  gate("xi_min", run.monitor.min_xi, false);
  gate("mass_drift_rel", run.monitor.max_mass_drift_rel, true);
  if (acc.count("u_band_tol")) {
    const double tol = acc.at("u_band_tol");
    if (run.monitor.max_u > id.u_max() + tol || run.monitor.min_u < id.u_min() - tol) {
      ok = false;
      fail << (fail.tellp() > 0 ? "; " : "") << "u left [min u0, max u0] band";
    }
  }
  if (acc.count("z_norm_tol") && run.monitor.max_abs_z > id.z0_norm + acc.at("z_norm_tol")) {
    ok = false;
    fail << (fail.tellp() > 0 ? "; " : "") << "||z|| grew past ||z0||";
  }
  if (acc.count("psi_norm_tol") &&
      run.monitor.max_abs_psi > id.psi0_norm + acc.at("psi_norm_tol")) {
    ok = false;
    fail << (fail.tellp() > 0 ? "; " : "") << "||psi|| grew past ||psi0||";
  }
  return {ok, ok ? "PASS" : "FAIL: " + fail.str()};
}

}  // namespace

CheckReport check_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const InitialData id = cfg.initial_data();
  const VelocityModel vm = cfg.velocity(id);
  const Kernel k = cfg.kernel();
  validate_kernel(k);

  CheckReport rep;
  rep.velocity = validate_velocity(vm);
  rep.z0_norm = id.z0_norm;
  rep.psi0_norm = id.psi0_norm;
  rep.horizon = blowup_horizon(rep.velocity, id.z0_norm);
  rep.eps_threshold = epsilon_global_threshold(vm, id.z0_norm, k.eta0());
  rep.z0_nonneg = check_nonneg_marker(id.z0);
  rep.all_pass = true;  // validators throw on violation
  return rep;
}

std::vector<double> default_checkpoints(double t_end) {
  std::vector<double> cps;
  for (int i = 1; i <= 20; ++i) cps.push_back(t_end * i / 20.0);
  return cps;
}

RunArtifacts execute_run(const ScenarioConfig& cfg, const std::string& kind,
                         const std::vector<double>& checkpoints,
                         const std::string& out_dir) {
  cfg.validate();
  const InitialData id = cfg.initial_data();
  const VelocityModel vm = cfg.velocity(id);
  const Grid1D grid = cfg.grid();

  RunArtifacts art;
  if (kind == "local") {
    art.result = run_local(id, vm, cfg.cfl, checkpoints, cfg.rho_ceiling);
    art.report = build_report(art.result, grid, nullptr,
                              cfg.x_lo + 0.1 * grid.length(), cfg.x_hi - 0.1 * grid.length());
  } else {
    const Kernel k = cfg.kernel();
    const Scheme scheme = kind == "lagrangian" ? Scheme::Lagrangian : Scheme::Eulerian;
    art.result = run(id, vm, k, cfg.cfl, checkpoints, scheme, cfg.rho_ceiling);
    art.report = build_report(art.result, grid, &k,
                              cfg.x_lo + 0.1 * grid.length(), cfg.x_hi - 0.1 * grid.length());
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    for (size_t i = 0; i < art.result.states.size(); ++i) {
      const std::string name = state_csv_name(art.result.states[i].t);
      write_state_csv(out_dir + "/" + name, art.result.states[i], art.result.xi[i], grid);
    }
    write_series_csv(out_dir + "/series.csv", art.report);
    write_report_json(out_dir + "/diagnostics.json", cfg, art.report, art.result, kind);
    write_gnuplot_series(out_dir + "/plots.gp", "series.csv");
  }

  auto [ok, detail] = evaluate_accept(cfg, art.result, id);
  art.accept_pass = ok;
  art.accept_detail = detail;
  return art;
}

PicardArtifacts execute_picard(const ScenarioConfig& cfg, const std::string& out_dir,
                               double delta, int max_iters, double q_tol) {
  cfg.validate();
  const InitialData id = cfg.initial_data();
  const VelocityModel vm = cfg.velocity(id);
  const Kernel k = cfg.kernel();
  PicardArtifacts art;
  art.result = run_picard(id, vm, k, delta, cfg.cfl, max_iters, q_tol);

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::vector<std::string> cols = {"iteration", "q_sup"};
    std::vector<std::vector<double>> rows;
    for (size_t n = 0; n < art.result.trace.q_sup.size(); ++n)
      rows.push_back({static_cast<double>(n + 1), art.result.trace.q_sup[n]});
    write_table_csv(out_dir + "/picard_q.csv", cols, rows);

    json j;
    j["scenario"] = scenario_echo(cfg);
    j["delta"] = art.result.delta;
    j["iterations"] = art.result.trace.iterations;
    j["converged"] = art.result.trace.converged;
    j["no_contraction"] = art.result.trace.no_contraction;
    j["q_sup"] = art.result.trace.q_sup;
    std::ofstream out(out_dir + "/picard.json");
    out << j.dump(2) << '\n';
  }

  std::ostringstream os;
  os << (art.result.trace.converged ? "converged" : "not converged") << " after "
     << art.result.trace.iterations << " iterations";
  if (!art.result.trace.q_sup.empty()) {
    os << ", Q1 = " << art.result.trace.q_sup.front()
       << ", Q_last = " << art.result.trace.q_sup.back();
  }
  art.summary = os.str();
  return art;
}

SweepEpsArtifacts sweep_eps(const ScenarioConfig& cfg, const std::vector<double>& eps_list,
                            int jobs, const std::string& out_root) {
  cfg.validate();
  SweepEpsArtifacts art;
  art.eps_list = eps_list;
  const std::vector<double> cps = default_checkpoints(cfg.t_end);

  std::vector<RunArtifacts> runs(eps_list.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= eps_list.size()) return;
      ScenarioConfig c = cfg;
      c.epsilon = eps_list[i];
      std::ostringstream dir;
      dir << out_root << "/eps_" << eps_list[i];
      runs[i] = execute_run(c, "eulerian", cps, out_root.empty() ? "" : dir.str());
    }
  };
  const int nw = std::max(1, std::min<int>(jobs, static_cast<int>(eps_list.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  const RunArtifacts ref =
      execute_run(cfg, "local", cps, out_root.empty() ? "" : out_root + "/local_ref");

  const Grid1D grid = cfg.grid();
  std::vector<EpsRunSlice> slices;
  for (size_t i = 0; i < eps_list.size(); ++i) {
    EpsRunSlice s;
    s.eps = eps_list[i];
    s.grid = grid;
    s.xi = runs[i].result.xi.back().xi;
    s.u = runs[i].result.states.back().u;
    s.max_rho = runs[i].result.monitor.max_rho;
    slices.push_back(std::move(s));
  }
  const double len = grid.length();
  art.table = convergence_table(slices, grid, ref.result.states.back().rho,
                                ref.result.states.back().u, cfg.x_lo + 0.1 * len,
                                cfg.x_hi - 0.1 * len);

  if (!out_root.empty()) {
    fs::create_directories(out_root);
    std::vector<std::string> cols = {"eps", "l1_xi", "sup_u", "max_rho"};
    std::vector<std::vector<double>> rows;
    for (const auto& r : art.table.rows) rows.push_back({r.eps, r.l1_xi, r.sup_u, r.max_rho});
    write_table_csv(out_root + "/convergence.csv", cols, rows);
    write_gnuplot_convergence(out_root + "/convergence.gp", "convergence.csv");

    json j;
    j["scenario"] = scenario_echo(cfg);
    j["eps_list"] = eps_list;
    json tab = json::array();
    for (const auto& r : art.table.rows)
      tab.push_back({{"eps", r.eps}, {"l1_xi", r.l1_xi}, {"sup_u", r.sup_u},
                     {"max_rho", r.max_rho}});
    j["table"] = tab;
    j["observed_orders_l1"] = art.table.observed_orders_l1;
    std::ofstream out(out_root + "/sweep.json");
    out << j.dump(2) << '\n';
  }

  // the table is sorted by decreasing eps; monotone L1 column means the
  // nonlocal run approaches the local reference as eps shrinks
  bool monotone = true;
  for (size_t i = 0; i + 1 < art.table.rows.size(); ++i)
    if (!(art.table.rows[i + 1].l1_xi < art.table.rows[i].l1_xi)) monotone = false;
  if (cfg.accept.count("l1_monotone") && cfg.accept.at("l1_monotone") > 0.0 && !monotone) {
    art.accept_pass = false;
    art.accept_detail = "FAIL: L1 column not strictly decreasing in eps";
  } else {
    art.accept_pass = true;
    art.accept_detail = "PASS";
  }
  return art;
}

SweepMeshArtifacts sweep_mesh(const ScenarioConfig& cfg, const std::vector<int>& n_list,
                              int jobs, const std::string& out_root) {
  cfg.validate();
  SweepMeshArtifacts art;
  art.n_list = n_list;
  const std::vector<double> cps = default_checkpoints(cfg.t_end);

  std::vector<RunArtifacts> runs(n_list.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= n_list.size()) return;
      ScenarioConfig c = cfg;
      c.n_cells = n_list[i];
      std::ostringstream dir;
      dir << out_root << "/n_" << n_list[i];
      runs[i] = execute_run(c, "eulerian", cps, out_root.empty() ? "" : dir.str());
    }
  };
  const int nw = std::max(1, std::min<int>(jobs, static_cast<int>(n_list.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  // L1 distance of each level to the finest, after conservative restriction
  const size_t finest = n_list.size() - 1;
  const Grid1D fine_grid(cfg.x_lo, cfg.x_hi, n_list[finest]);
  for (size_t i = 0; i < n_list.size(); ++i) {
    if (i == finest) break;
    const Grid1D coarse(cfg.x_lo, cfg.x_hi, n_list[i]);
    const int k = n_list[finest] / n_list[i];
    double l1 = 0.0;
    const Field& rho_f = runs[finest].result.states.back().rho;
    const Field& rho_c = runs[i].result.states.back().rho;
    for (int ci = 0; ci < coarse.n; ++ci) {
      double avg = 0.0;
      for (int j = 0; j < k; ++j) avg += rho_f[ci * k + j];
      avg /= k;
      l1 += std::abs(rho_c[ci] - avg) * coarse.dx();
    }
    art.l1_to_finest.push_back(l1);
  }
  for (size_t i = 0; i + 1 < art.l1_to_finest.size(); ++i) {
    const double e0 = art.l1_to_finest[i], e1 = art.l1_to_finest[i + 1];
    art.observed_orders.push_back(e0 > 0 && e1 > 0 ? std::log2(e0 / e1) : 0.0);
  }

  if (!out_root.empty()) {
    fs::create_directories(out_root);
    std::vector<std::string> cols = {"n_cells", "l1_to_finest"};
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < art.l1_to_finest.size(); ++i)
      rows.push_back({static_cast<double>(n_list[i]), art.l1_to_finest[i]});
    write_table_csv(out_root + "/mesh.csv", cols, rows);
  }
  return art;
}

CompareArtifacts compare_schemes(const ScenarioConfig& cfg, const std::string& out_root) {
  cfg.validate();
  const std::vector<double> cps = default_checkpoints(cfg.t_end);
  const RunArtifacts eul =
      execute_run(cfg, "eulerian", cps, out_root.empty() ? "" : out_root + "/eulerian");
  const RunArtifacts lag =
      execute_run(cfg, "lagrangian", cps, out_root.empty() ? "" : out_root + "/lagrangian");

  CompareArtifacts art;
  const double dx = cfg.grid().dx();
  for (size_t k = 0; k < eul.result.states.size(); ++k) {
    art.t.push_back(eul.result.states[k].t);
    double l1 = 0.0;
    for (int i = 0; i < cfg.n_cells; ++i)
      l1 += std::abs(eul.result.states[k].rho[i] - lag.result.states[k].rho[i]) * dx;
    art.l1_rho.push_back(l1);
  }
  if (!out_root.empty()) {
    fs::create_directories(out_root);
    std::vector<std::string> cols = {"t", "l1_rho"};
    std::vector<std::vector<double>> rows;
    for (size_t k = 0; k < art.t.size(); ++k) rows.push_back({art.t[k], art.l1_rho[k]});
    write_table_csv(out_root + "/compare.csv", cols, rows);
  }
  return art;
}

}  // namespace garz
