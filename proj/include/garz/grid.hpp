#pragma once

#include <cassert>
#include <vector>

namespace garz {

/// Uniform 1-D grid of n cells on [x_lo, x_hi]. Cell i owns
/// [x_lo + i*dx, x_lo + (i+1)*dx] and is sampled at its center.
struct Grid1D {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n = 0;

  Grid1D() = default;
  Grid1D(double lo, double hi, int cells) : x_lo(lo), x_hi(hi), n(cells) {
    assert(hi > lo && cells > 0);
  }

  double dx() const { return (x_hi - x_lo) / n; }
  double length() const { return x_hi - x_lo; }
  double center(int i) const { return x_lo + (i + 0.5) * dx(); }
  double left_edge(int i) const { return x_lo + i * dx(); }

  std::vector<double> centers() const {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = center(i);
    return xs;
  }
};

using Field = std::vector<double>;

}  // namespace garz
