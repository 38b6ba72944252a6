#pragma once

#include <utility>

#include "garz/grid.hpp"
#include "garz/kernel.hpp"

namespace garz {

/// Perceived density xi_i = integral over y >= x_i of rho(y) eta_eps(x_i - y)
/// and its one-sided slope h_i = (xi_{i+1} - xi_i)/dx on interface i+1/2.
/// The last slope uses the right closure xi_n = 0 (rho vanishes beyond the
/// grid; scenarios keep support padded away from the boundary).
struct XiField {
  Field xi;
  Field h;
};

/// Exponential kind: right-to-left scan
///     xi_i = exp(-dx/eps) * xi_{i+1} + rho_i * (1 - exp(-dx/eps)),
/// exact for rho piecewise constant on [x_i, x_{i+1}). Tabulated kind:
/// direct quadrature truncated at the kernel support, O(N * W/dx).
XiField compute_xi(const Field& rho, const Kernel& k, const Grid1D& grid);

/// Sup-norm residual of the exponential-kernel identity rho = xi - eps * h
/// over the cells outside the right closure layer (width 30 eps, where the
/// xi_n = 0 closure contaminates h for non-vanishing rho). O(dx) for smooth
/// rho. Throws KernelKindMismatch for non-exponential kernels.
double check_exponential_identity(const Field& rho, const XiField& f,
                                  const Kernel& k, const Grid1D& grid);

/// Discrete first and second moments of the scaled exponential kernel,
///     m1 ~ (1/eps) int exp((x-y)/eps) (y-x)/eps   dy = 1
///     m2 ~ (1/eps) int exp((x-y)/eps) (y-x)^2/eps^2 dy = 2,
/// quadrature anchored at the grid's left end with left-edge sampling and
/// exact per-cell kernel mass; both converge at O(dx). Throws GridTooShort
/// when the grid covers less than 20 eps.
std::pair<double, double> kernel_moment_check(const Kernel& k, const Grid1D& grid);

}  // namespace garz
