#pragma once

#include "garz/grid.hpp"

namespace garz {

/// Cell-averaged solution snapshot at one time. u, z, psi are Lagrangian
/// markers (dx u = rho z, dx z = psi rho holds for the exact solution; the
/// solver transports them independently and the gap is a measured
/// diagnostic).
struct GridState {
  double t = 0.0;
  Field rho, u, z, psi;
};

/// Upstream boundary values fed by the left ghost cell (rho is always 0
/// there: vacuum inflow).
struct Inflow {
  double u = 0.0;
  double z = 0.0;
  double psi = 0.0;
};

/// Lagrangian particles along characteristics, kept sorted by position.
/// Masses and markers are constant along trajectories.
struct ParticleEnsemble {
  Field x, m, u, z, psi;

  size_t size() const { return x.size(); }
  bool sorted() const {
    for (size_t j = 0; j + 1 < x.size(); ++j)
      if (!(x[j] < x[j + 1])) return false;
    return true;
  }
  double total_mass() const {
    double s = 0.0;
    for (double v : m) s += v;
    return s;
  }
};

}  // namespace garz
