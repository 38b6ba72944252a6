#include "garz/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "garz/errors.hpp"

namespace garz {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string point_str(double xi, double u) {
  std::ostringstream os;
  os << "(xi=" << xi << ", u=" << u << ")";
  return os.str();
}
}  // namespace

VelocityModel VelocityModel::greenshields(double u_lo, double u_hi) {
  VelocityModel m;
  m.law_ = Law::Greenshields;
  m.rect_ = Rect{0.0, 1.0, u_lo, u_hi};
  m.strict_ = true;
  m.name_ = "greenshields";
  return m;
}

VelocityModel VelocityModel::quadratic(double u_lo, double u_hi) {
  VelocityModel m;
  m.law_ = Law::Quadratic;
  m.rect_ = Rect{0.0, 1.0, u_lo, u_hi};
  m.strict_ = false;  // d1 = 0 at xi = 0
  m.name_ = "quadratic";
  return m;
}

VelocityModel VelocityModel::custom(Fn v, Fn d1, Fn d2, Fn d11, Rect rect,
                                    bool strict_monotone, std::string name) {
  VelocityModel m;
  m.law_ = Law::Custom;
  m.rect_ = rect;
  m.strict_ = strict_monotone;
  m.name_ = std::move(name);
  m.v_ = std::move(v);
  m.d1_ = std::move(d1);
  m.d2_ = std::move(d2);
  m.d11_ = std::move(d11);
  return m;
}

VelocityModel VelocityModel::from_name(const std::string& law, double u_lo, double u_hi) {
  if (law == "greenshields") return greenshields(u_lo, u_hi);
  if (law == "quadratic") return quadratic(u_lo, u_hi);
  throw AssumptionViolated("unknown velocity law '" + law + "'");
}

double VelocityModel::value(double xi, double u) const {
  switch (law_) {
    case Law::Greenshields:
      return xi >= 1.0 ? 0.0 : u * (1.0 - xi);
    case Law::Quadratic:
      return xi >= 1.0 ? 0.0 : u * (1.0 - xi * xi);
    case Law::Custom:
      return v_(xi, u);
  }
  return 0.0;
}

double VelocityModel::d1(double xi, double u) const {
  switch (law_) {
    case Law::Greenshields:
      return xi > 1.0 ? 0.0 : -u;
    case Law::Quadratic:
      return xi > 1.0 ? 0.0 : -2.0 * u * xi;
    case Law::Custom:
      return d1_(xi, u);
  }
  return 0.0;
}

double VelocityModel::d2(double xi, double u) const {
  switch (law_) {
    case Law::Greenshields:
      return xi > 1.0 ? 0.0 : 1.0 - xi;
    case Law::Quadratic:
      return xi > 1.0 ? 0.0 : 1.0 - xi * xi;
    case Law::Custom:
      return d2_(xi, u);
  }
  return 0.0;
}

double VelocityModel::d11(double xi, double u) const {
  switch (law_) {
    case Law::Greenshields:
      return 0.0;
    case Law::Quadratic:
      return xi > 1.0 ? 0.0 : -2.0 * u;
    case Law::Custom:
      return d11_(xi, u);
  }
  return 0.0;
}

VelocityReport validate_velocity(const VelocityModel& vm, int samples_per_axis) {
  if (samples_per_axis < 32)
    throw AssumptionViolated("validate_velocity needs samples_per_axis >= 32");
  const Rect& r = vm.rect();
  if (!(r.xi_hi > r.xi_lo) || !(r.u_hi >= r.u_lo))
    throw AssumptionViolated("velocity rectangle is ill-formed");

  VelocityReport rep;
  rep.v_min = rep.d1_min = rep.d2_min = rep.d11_min = kInf;
  rep.v_max = rep.d1_max = rep.d2_max = rep.d11_max = -kInf;
  rep.C_V = 0.0;

  const int ns = samples_per_axis;
  for (int i = 0; i < ns; ++i) {
    const double xi = r.xi_lo + (r.xi_hi - r.xi_lo) * i / (ns - 1);
    for (int j = 0; j < ns; ++j) {
      const double u = ns == 1 ? r.u_lo : r.u_lo + (r.u_hi - r.u_lo) * j / (ns - 1);
      const double v = vm.value(xi, u);
      const double d1 = vm.d1(xi, u);
      const double d2 = vm.d2(xi, u);
      const double d11 = vm.d11(xi, u);
      if (v < 0.0)
        throw AssumptionViolated("V < 0 at " + point_str(xi, u));
      if (d1 > 0.0)
        throw AssumptionViolated("dV/dxi > 0 at " + point_str(xi, u));
      if (d2 < 0.0)
        throw AssumptionViolated("dV/du < 0 at " + point_str(xi, u));
      if (d11 > 0.0)
        throw AssumptionViolated("d2V/dxi2 > 0 at " + point_str(xi, u));
      rep.v_min = std::min(rep.v_min, v);
      rep.v_max = std::max(rep.v_max, v);
      rep.d1_min = std::min(rep.d1_min, d1);
      rep.d1_max = std::max(rep.d1_max, d1);
      rep.d2_min = std::min(rep.d2_min, d2);
      rep.d2_max = std::max(rep.d2_max, d2);
      rep.d11_min = std::min(rep.d11_min, d11);
      rep.d11_max = std::max(rep.d11_max, d11);
      rep.C_V = std::max(rep.C_V, std::abs(v) + std::abs(d1) + std::abs(d2) + std::abs(d11));
    }
  }
  // V(1, u) = 0 along the full-density edge.
  for (int j = 0; j < ns; ++j) {
    const double u = ns == 1 ? r.u_lo : r.u_lo + (r.u_hi - r.u_lo) * j / (ns - 1);
    const double v1 = vm.value(1.0, u);
    if (std::abs(v1) > 1e-14)
      throw AssumptionViolated("V(1, u) != 0 at " + point_str(1.0, u));
  }

  rep.alpha_V = -rep.d1_max;
  rep.beta_V = -rep.d11_min;
  rep.passes_V3 = rep.alpha_V * rep.alpha_V > 54.0 * rep.beta_V * rep.beta_V;

  if (vm.strict_monotone_claimed() && !(rep.alpha_V > 0.0))
    throw AssumptionViolated("strict monotonicity claimed but alpha_V <= 0");
  return rep;
}

double blowup_horizon(const VelocityReport& rep, double z0_norm) {
  if (z0_norm <= 0.0) return kInf;
  return 1.0 / (rep.C_V * z0_norm);
}

double epsilon_global_threshold(const VelocityModel& vm, double z0_norm,
                                double eta0, int samples_per_axis) {
  if (z0_norm <= 0.0) return kInf;
  const Rect& r = vm.rect();
  const int ns = samples_per_axis;
  double worst_ratio = 0.0;  // max d2 / (-d1)
  for (int i = 0; i < ns; ++i) {
    const double xi = r.xi_lo + (r.xi_hi - r.xi_lo) * i / (ns - 1);
    for (int j = 0; j < ns; ++j) {
      const double u = ns == 1 ? r.u_lo : r.u_lo + (r.u_hi - r.u_lo) * j / (ns - 1);
      const double d2 = vm.d2(xi, u);
      if (d2 <= 0.0) continue;  // no constraint from this point
      const double md1 = -vm.d1(xi, u);
      if (md1 <= 0.0) return 0.0;  // ratio unbounded, no eps works
      worst_ratio = std::max(worst_ratio, d2 / md1);
    }
  }
  if (worst_ratio == 0.0) return kInf;
  return eta0 / (z0_norm * worst_ratio);
}

}  // namespace garz
