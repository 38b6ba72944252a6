#pragma once

#include <optional>
#include <vector>

#include "garz/convolution.hpp"
#include "garz/grid.hpp"
#include "garz/kernel.hpp"
#include "garz/solver_nonlocal.hpp"
#include "garz/state.hpp"

namespace garz {

/// Everything monitored at one checkpoint, re-derived from the dumped state
/// (independent of the solver's in-loop bookkeeping).
struct CheckpointRecord {
  double t = 0.0;
  double mass = 0.0;
  double rho_min = 0.0, rho_max = 0.0;
  double u_min = 0.0, u_max = 0.0;
  double z_min = 0.0, z_max = 0.0;
  double psi_min = 0.0, psi_max = 0.0;
  double xi_min = 0.0, xi_max = 0.0;
  double m_t = 0.0;          // min over interfaces of h
  double tv_xi = 0.0;        // total variation of xi on the report window
  double consistency = 0.0;  // sup |(u_{i+1}-u_i)/dx - rho_i z_i|
};

struct OleinikFit {
  double a = 0.0;
  double c = 0.0;  // +inf when the series needs no 1/t term
  bool satisfied = false;
};

struct DiagnosticsReport {
  std::vector<CheckpointRecord> records;
  double window_lo = 0.0, window_hi = 0.0;
  std::optional<OleinikFit> oleinik;
};

/// Re-derives every monitored invariant from the stored states. When a
/// kernel is given, xi/h are recomputed from rho (double-entry against the
/// solver); otherwise the trajectory's own xi fields are used (local runs).
/// The Oleinik fit is attached when enough checkpoints sit at t >= 0.05.
DiagnosticsReport build_report(const RunResult& run, const Grid1D& grid,
                               const Kernel* kernel, double window_lo, double window_hi);

/// m(t) = min over interfaces of the one-sided slope h.
std::vector<double> oleinik_monitor(const std::vector<XiField>& xi);

struct OleinikConstants {
  double a = 0.0;
  double c = 0.0;
  double root_pos = 0.0;  // m1 > 0
  double root_neg = 0.0;  // -m2 < 0
};

/// Comparison constants for m' = c2 m^2 + c1 m - c0 with c0, c1, c2 > 0:
/// a = 2 m2 from the negative root -m2, and the largest c in (0, c2] with
/// (c2 - c) x^2 + c1 x - c0 >= 0 on x <= -a (closed form,
/// c = (3 c2 m2 - c1)/(4 m2)). Every solution then obeys
/// m(t) >= -a - 1/(c t). Throws DegenerateRoots if the discriminant is not
/// positive (impossible for positive inputs).
OleinikConstants solve_oleinik_constants(double c0, double c1, double c2);

struct RiccatiCertificate {
  bool ok = false;
  double min_margin = 0.0;  // min over samples of m(t) - (-a - 1/(ct))
};

/// Integrates m' = c2 m^2 + c1 m - c0 from m(t0) = m_start by adaptive
/// RK45 and checks m(t) >= -a - 1/(c t) at n_samples log-spaced times.
RiccatiCertificate certify_riccati_bound(double c0, double c1, double c2, double a,
                                         double c, double m_start = -1e3,
                                         double t0 = 1e-4, double t_end = 10.0,
                                         int n_samples = 1000);

/// Least-squares shape fit of -a - 1/(ct) to the negative part of m(t) over
/// checkpoints with t >= 0.05, with a lifted to the lower envelope so the
/// fitted pair actually bounds the series; satisfied checks
/// m(t) >= -a - 1/(ct) - 1e-6 at those checkpoints. Needs >= 5 usable
/// checkpoints (InsufficientData otherwise).
OleinikFit fit_oleinik_bound(const std::vector<double>& m, const std::vector<double>& t);

/// Variant for one-sided-Lipschitz initial data (constant m0 < 0): fits
/// m(t) >= -a + 1/(1/m0 - c t), which stays finite as t -> 0.
OleinikFit fit_oleinik_bound_improved(const std::vector<double>& m,
                                      const std::vector<double>& t, double m0);

/// Sum of |xi_{i+1} - xi_i| over consecutive cells with centers inside
/// [lo, hi]. Throws WindowOutOfGrid.
double tv_on_window(const Field& xi, const Grid1D& grid, double lo, double hi);

/// One eps-run evaluated at the comparison time.
struct EpsRunSlice {
  double eps = 0.0;
  Grid1D grid;
  Field xi;       // perceived density at t_eval
  Field u;        // marker at t_eval
  double max_rho = 0.0;  // space-time max over the run
};

struct ConvergenceRow {
  double eps = 0.0;
  double l1_xi = 0.0;   // L1 distance of xi_eps to the reference density
  double sup_u = 0.0;   // sup distance of u_eps to the reference marker
  double max_rho = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;          // sorted by decreasing eps
  std::vector<double> observed_orders_l1;    // log2(e_i / e_{i+1})
};

/// Distances on the window against the local reference, with conservative
/// (cell-averaging) resampling when the eps-grid is an integer refinement
/// of the reference grid. Throws GridMismatch when resampling would alias.
ConvergenceTable convergence_table(const std::vector<EpsRunSlice>& runs,
                                   const Grid1D& ref_grid, const Field& rho_ref,
                                   const Field& u_ref, double window_lo,
                                   double window_hi);

}  // namespace garz
