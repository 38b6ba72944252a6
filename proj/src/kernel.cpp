#include "garz/kernel.hpp"

#include <cmath>
#include <sstream>

#include "garz/errors.hpp"

namespace garz {

Kernel Kernel::exponential(double eps) {
  Kernel k;
  k.kind_ = Kind::Exponential;
  k.eps_ = eps;
  return k;
}

Kernel Kernel::tabulated(std::vector<double> values, double support, double eps) {
  Kernel k;
  k.kind_ = Kind::Tabulated;
  k.eps_ = eps;
  k.values_ = std::move(values);
  k.support_ = support;
  if (k.values_.size() < 2)
    throw AssumptionViolated("tabulated kernel needs at least 2 samples");
  if (!(support > 0.0))
    throw AssumptionViolated("tabulated kernel needs positive support width");
  return k;
}

Kernel Kernel::with_eps(double eps) const {
  Kernel k = *this;
  k.eps_ = eps;
  return k;
}

double Kernel::eta0() const {
  return kind_ == Kind::Exponential ? 1.0 : values_.back();
}

double Kernel::support() const {
  // exp(-690) underflows to ~1e-300; treat that as the effective cutoff.
  return kind_ == Kind::Exponential ? 690.0 : support_;
}

double Kernel::eta_eps_at(double s) const {
  if (s > 0.0) return 0.0;
  const double t = s / eps_;
  if (kind_ == Kind::Exponential) return std::exp(t) / eps_;
  if (t < -support_) return 0.0;
  // piecewise-linear interpolation of the samples on [-support, 0]
  const double step = support_ / (values_.size() - 1);
  const double pos = (t + support_) / step;
  const auto idx = static_cast<size_t>(pos);
  if (idx >= values_.size() - 1) return values_.back() / eps_;
  const double w = pos - idx;
  return ((1.0 - w) * values_[idx] + w * values_[idx + 1]) / eps_;
}

KernelReport validate_kernel(const Kernel& k, int quad_points) {
  if (quad_points < 256)
    throw AssumptionViolated("validate_kernel needs quad_points >= 256");
  KernelReport rep;
  rep.support_ok = true;  // both kinds are supported on R_- by construction

  if (k.kind() == Kernel::Kind::Exponential) {
    rep.mass = 1.0;  // integral of exp(s) over s <= 0, analytic
    rep.min_value = 0.0;
    rep.nonnegative = true;
    rep.unit_mass = true;
    rep.nondecreasing = true;
    return rep;
  }

  const auto& v = k.values();
  rep.min_value = v.front();
  for (size_t i = 0; i < v.size(); ++i) {
    rep.min_value = std::min(rep.min_value, v[i]);
    if (v[i] < 0.0) {
      std::ostringstream os;
      os << "kernel negative at sample " << i << " (value " << v[i] << ")";
      throw AssumptionViolated(os.str());
    }
  }
  rep.nonnegative = true;

  for (size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i + 1] < v[i] - 1e-14) {
      std::ostringstream os;
      os << "kernel decreasing toward the origin between samples " << i << " and " << i + 1;
      throw AssumptionViolated(os.str());
    }
  }
  rep.nondecreasing = true;

  // Trapezoid quadrature of the piecewise-linear interpolant: exact for the
  // shape the kernel actually evaluates, so the 1e-10 gate is meaningful.
  (void)quad_points;
  const double step = k.support() / (v.size() - 1);
  double mass = 0.0;
  for (size_t i = 0; i + 1 < v.size(); ++i) mass += 0.5 * (v[i] + v[i + 1]) * step;
  rep.mass = mass;
  if (std::abs(mass - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "kernel mass " << mass << " differs from 1 by more than 1e-10";
    throw AssumptionViolated(os.str());
  }
  rep.unit_mass = true;
  return rep;
}

}  // namespace garz
