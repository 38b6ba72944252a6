#pragma once

#include <functional>
#include <string>

namespace garz {

/// Admissible argument rectangle [0,1] x [u_min, u_max] of a velocity law.
/// u bounds come from the initial data range of the scenario at hand.
struct Rect {
  double xi_lo = 0.0;
  double xi_hi = 1.0;
  double u_lo = 0.0;
  double u_hi = 1.0;
};

/// Velocity law V(xi, u) with analytic partials. xi is the perceived
/// (convolved) density, u the empty-road velocity marker. Built-in laws:
///
///   greenshields : V = u * (1 - xi)         (strictly decreasing in xi)
///   quadratic    : V = u * (1 - xi^2)       (degenerate at xi = 0)
///
/// Both vanish identically for xi >= 1.
class VelocityModel {
 public:
  enum class Law { Greenshields, Quadratic, Custom };

  using Fn = std::function<double(double, double)>;

  static VelocityModel greenshields(double u_lo, double u_hi);
  static VelocityModel quadratic(double u_lo, double u_hi);
  /// Escape hatch for tests and experiments: caller supplies V and its
  /// partials d1 = dV/dxi, d2 = dV/du, d11 = d2V/dxi2.
  static VelocityModel custom(Fn v, Fn d1, Fn d2, Fn d11, Rect rect,
                              bool strict_monotone, std::string name = "custom");

  static VelocityModel from_name(const std::string& law, double u_lo, double u_hi);

  double value(double xi, double u) const;
  double d1(double xi, double u) const;
  double d2(double xi, double u) const;
  double d11(double xi, double u) const;

  const Rect& rect() const { return rect_; }
  bool strict_monotone_claimed() const { return strict_; }
  const std::string& name() const { return name_; }

 private:
  Law law_ = Law::Greenshields;
  Rect rect_;
  bool strict_ = true;
  std::string name_;
  Fn v_, d1_, d2_, d11_;  // Custom only
};

/// Sampled extrema of the law and the derived constants used by the
/// a-priori bounds.
struct VelocityReport {
  double v_min = 0, v_max = 0;
  double d1_min = 0, d1_max = 0;
  double d2_min = 0, d2_max = 0;
  double d11_min = 0, d11_max = 0;
  double alpha_V = 0;   // min over rect of -d1
  double beta_V = 0;    // max over rect of -d11
  double C_V = 0;       // max over rect of |V| + |d1| + |d2| + |d11|
  bool passes_V3 = false;  // alpha_V^2 > 54 beta_V^2
};

/// Samples the law on a uniform samples_per_axis^2 grid over its rectangle
/// and checks: V >= 0, d1 <= 0, d2 >= 0, d11 <= 0, V(1,u) = 0, and
/// alpha_V > 0 when strict monotonicity is claimed.
/// Throws AssumptionViolated naming the failed condition and witness point.
VelocityReport validate_velocity(const VelocityModel& vm, int samples_per_axis = 64);

/// T = 1 / (C_V * ||z0||_inf); +inf when z0 vanishes.
double blowup_horizon(const VelocityReport& rep, double z0_norm);

/// Largest eps such that d1(p)*eta0/eps + ||z0||*d2(p) <= 0 at every sampled
/// rectangle point p, i.e. eta0 / (||z0|| * max d2/(-d1)).
/// Returns +inf when z0_norm = 0 and 0 when the ratio is unbounded
/// (d2 > 0 where d1 = 0). eta0 is the kernel value at the origin.
double epsilon_global_threshold(const VelocityModel& vm, double z0_norm,
                                double eta0 = 1.0, int samples_per_axis = 64);

}  // namespace garz
