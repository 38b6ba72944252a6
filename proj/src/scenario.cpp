#include "garz/scenario.hpp"

#include <fstream>
#include <sstream>

#include "garz/errors.hpp"

namespace garz {

Kernel ScenarioConfig::kernel() const {
  if (kernel_kind == "exponential") return Kernel::exponential(epsilon);
  throw AssumptionViolated("scenario kernel kind '" + kernel_kind +
                           "' is not runnable (tabulated kernels are library-level only)");
}

InitialData ScenarioConfig::initial_data() const {
  return make_initial_data(preset, initial_params, u_inf, z_inf, grid(), seed);
}

VelocityModel ScenarioConfig::velocity(const InitialData& id) const {
  double lo = u_min, hi = u_max;
  if (lo == 0.0 && hi == 0.0) {
    lo = id.u_min();
    hi = id.u_max();
  }
  return VelocityModel::from_name(law, lo, hi);
}

void ScenarioConfig::validate() const {
  if (!(x_lo < x_hi)) throw AssumptionViolated("domain: x_lo must be < x_hi");
  if (n_cells < 16) throw AssumptionViolated("domain: n_cells must be >= 16");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw AssumptionViolated("time: cfl must be in (0, 1]");
  if (!(epsilon > 0.0)) throw AssumptionViolated("kernel: epsilon must be > 0");
  if (!(t_end > 0.0)) throw AssumptionViolated("time: t_end must be > 0");
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& v, int line) {
  try {
    size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + v + "'");
  }
}

void set_key(ScenarioConfig& cfg, const std::string& section, const std::string& key,
             const std::string& val, int line) {
  auto num = [&] { return parse_number(val, line); };
  if (section == "domain") {
    if (key == "x_lo") cfg.x_lo = num();
    else if (key == "x_hi") cfg.x_hi = num();
    else if (key == "n_cells") cfg.n_cells = static_cast<int>(num());
    else throw ParseError(line, "unknown key '" + key + "' in [domain]");
  } else if (section == "time") {
    if (key == "t_end") cfg.t_end = num();
    else if (key == "cfl") cfg.cfl = num();
    else throw ParseError(line, "unknown key '" + key + "' in [time]");
  } else if (section == "kernel") {
    if (key == "kind") cfg.kernel_kind = val;
    else if (key == "epsilon") cfg.epsilon = num();
    else throw ParseError(line, "unknown key '" + key + "' in [kernel]");
  } else if (section == "velocity") {
    if (key == "law") cfg.law = val;
    else if (key == "u_min") cfg.u_min = num();
    else if (key == "u_max") cfg.u_max = num();
    else throw ParseError(line, "unknown key '" + key + "' in [velocity]");
  } else if (section == "initial") {
    if (key == "preset") cfg.preset = val;
    else if (key == "u_inf") cfg.u_inf = num();
    else if (key == "z_inf") cfg.z_inf = num();
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(num());
    else cfg.initial_params[key] = num();
  } else if (section == "output") {
    if (key == "dir") cfg.out_dir = val;
    else if (key == "formats") cfg.formats = val;
    else throw ParseError(line, "unknown key '" + key + "' in [output]");
  } else if (section == "accept") {
    cfg.accept[key] = num();
  } else if (section == "solver") {
    if (key == "rho_ceiling") cfg.rho_ceiling = num();
    else throw ParseError(line, "unknown key '" + key + "' in [solver]");
  } else {
    throw ParseError(line, "unknown section [" + section + "]");
  }
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError(line, "empty key");
    if (section.empty()) throw ParseError(line, "key outside any [section]");
    set_key(cfg, section, key, val, line);
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos) throw ParseError(0, "override must look like section.key=value");
  std::string key = trim(assignment.substr(0, eq));
  std::string val = trim(assignment.substr(eq + 1));
  size_t dot = key.find('.');
  if (dot == std::string::npos) throw ParseError(0, "override key must be section.key");
  set_key(cfg, key.substr(0, dot), key.substr(dot + 1), val, 0);
}

}  // namespace garz
