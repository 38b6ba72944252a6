#pragma once

#include <string>
#include <vector>

namespace garz {

/// Look-ahead convolution kernel eta, supported on the negative half line
/// and non-decreasing there, unit mass. The solver evaluates the scaled
/// family eta_eps(s) = eta(s/eps)/eps.
///
/// Two kinds:
///   Exponential : eta(s) = exp(s) on s <= 0 (closed form, O(N) scan)
///   Tabulated   : eta sampled uniformly on [-support, 0], interpreted as
///                 the piecewise-linear interpolant of the samples.
class Kernel {
 public:
  enum class Kind { Exponential, Tabulated };

  static Kernel exponential(double eps);
  /// values[k] = eta at s = -support + k * support/(M-1); values.back() is
  /// eta(0). Scale eps applies on top of the tabulated shape.
  static Kernel tabulated(std::vector<double> values, double support, double eps = 1.0);

  Kind kind() const { return kind_; }
  double eps() const { return eps_; }
  Kernel with_eps(double eps) const;

  /// eta(0), the kernel value at the driver's position (unscaled shape).
  double eta0() const;
  /// Support width of the unscaled shape (+inf conceptually for the
  /// exponential kind; returns the 1e-300 cutoff width instead).
  double support() const;

  /// eta_eps(s) = eta(s/eps)/eps; zero for s > 0 and beyond the support.
  double eta_eps_at(double s) const;

  const std::vector<double>& values() const { return values_; }

 private:
  Kind kind_ = Kind::Exponential;
  double eps_ = 1.0;
  std::vector<double> values_;
  double support_ = 0.0;
};

struct KernelReport {
  double mass = 0.0;       // quadrature of the density (exact for exponential)
  double min_value = 0.0;
  bool nonnegative = false;
  bool unit_mass = false;
  bool support_ok = false;
  bool nondecreasing = false;
};

/// Checks nonnegativity, unit mass within 1e-10, support within the
/// negative half line and monotonicity toward the origin. quad_points is
/// the resolution used for the tabulated-mass quadrature (>= 256).
/// Throws AssumptionViolated with a witness on failure.
KernelReport validate_kernel(const Kernel& k, int quad_points = 1024);

}  // namespace garz
