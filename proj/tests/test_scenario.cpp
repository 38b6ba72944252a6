#include "doctest.h"
#include "garz/errors.hpp"
#include "garz/scenario.hpp"

using namespace garz;

namespace {
const char* kSample = R"(# demo scenario
[domain]
x_lo = -3.0
x_hi = 3.0
n_cells = 400

[time]
t_end = 1.0
cfl = 0.5

[kernel]
kind = exponential
epsilon = 0.1

[velocity]
law = greenshields

[initial]
preset = bump
amp = 0.8
center = -1.0
width = 1.0
psi_amp = 0.3
u_inf = 0.6

[output]
dir = out

[accept]
mass_drift_rel = 1e-12
)";
}  // namespace

TEST_CASE("scenario parses and builds its pieces") {
  const ScenarioConfig cfg = parse_scenario(kSample);
  cfg.validate();
  CHECK(cfg.n_cells == 400);
  CHECK(cfg.epsilon == 0.1);
  CHECK(cfg.initial_params.at("amp") == 0.8);
  CHECK(cfg.accept.at("mass_drift_rel") == 1e-12);

  const InitialData id = cfg.initial_data();
  CHECK(id.u_min() >= 0.6);
  const VelocityModel vm = cfg.velocity(id);
  CHECK(vm.rect().u_lo == id.u_min());
  CHECK(cfg.kernel().eps() == 0.1);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_scenario("[domain]\nx_lo = -1\nbogus line\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  try {
    parse_scenario("x = 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
  }
  try {
    parse_scenario("[time]\nt_end = abc\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(parse_scenario("[nosuch]\nkey = 1\n"), ParseError);
}

TEST_CASE("structural invariants are validated") {
  ScenarioConfig cfg = parse_scenario(kSample);
  cfg.n_cells = 8;
  CHECK_THROWS_AS(cfg.validate(), AssumptionViolated);
  cfg = parse_scenario(kSample);
  cfg.cfl = 1.5;
  CHECK_THROWS_AS(cfg.validate(), AssumptionViolated);
  cfg = parse_scenario(kSample);
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(cfg.validate(), AssumptionViolated);
  cfg = parse_scenario(kSample);
  cfg.x_hi = cfg.x_lo;
  CHECK_THROWS_AS(cfg.validate(), AssumptionViolated);
}

TEST_CASE("overrides hit the same dispatch as the parser") {
  ScenarioConfig cfg = parse_scenario(kSample);
  apply_override(cfg, "time.t_end=5");
  apply_override(cfg, "domain.n_cells = 800");
  apply_override(cfg, "initial.amp=0.5");
  CHECK(cfg.t_end == 5.0);
  CHECK(cfg.n_cells == 800);
  CHECK(cfg.initial_params.at("amp") == 0.5);
  CHECK_THROWS_AS(apply_override(cfg, "junk"), ParseError);
  CHECK_THROWS_AS(apply_override(cfg, "time.bogus=1"), ParseError);
}
