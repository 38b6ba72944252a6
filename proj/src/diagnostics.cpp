#include "garz/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "garz/errors.hpp"

namespace garz {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOleinikTMin = 0.05;  // transient below this dominates the bound
}  // namespace

std::vector<double> oleinik_monitor(const std::vector<XiField>& xi) {
  std::vector<double> m(xi.size());
  for (size_t k = 0; k < xi.size(); ++k)
    m[k] = *std::min_element(xi[k].h.begin(), xi[k].h.end());
  return m;
}

DiagnosticsReport build_report(const RunResult& run, const Grid1D& grid,
                               const Kernel* kernel, double window_lo, double window_hi) {
  DiagnosticsReport rep;
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;
  const double dx = grid.dx();

  std::vector<double> m_series, t_series;
  for (size_t k = 0; k < run.states.size(); ++k) {
    const GridState& s = run.states[k];
    const XiField f = kernel ? compute_xi(s.rho, *kernel, grid) : run.xi[k];
    CheckpointRecord r;
    r.t = s.t;
    for (double v : s.rho) r.mass += v;
    r.mass *= dx;
    r.rho_min = *std::min_element(s.rho.begin(), s.rho.end());
    r.rho_max = *std::max_element(s.rho.begin(), s.rho.end());
    r.u_min = *std::min_element(s.u.begin(), s.u.end());
    r.u_max = *std::max_element(s.u.begin(), s.u.end());
    r.z_min = *std::min_element(s.z.begin(), s.z.end());
    r.z_max = *std::max_element(s.z.begin(), s.z.end());
    r.psi_min = *std::min_element(s.psi.begin(), s.psi.end());
    r.psi_max = *std::max_element(s.psi.begin(), s.psi.end());
    r.xi_min = *std::min_element(f.xi.begin(), f.xi.end());
    r.xi_max = *std::max_element(f.xi.begin(), f.xi.end());
    r.m_t = *std::min_element(f.h.begin(), f.h.end());
    r.tv_xi = tv_on_window(f.xi, grid, window_lo, window_hi);
    for (int i = 0; i + 1 < grid.n; ++i)
      r.consistency = std::max(
          r.consistency, std::abs((s.u[i + 1] - s.u[i]) / dx - s.rho[i] * s.z[i]));
    rep.records.push_back(r);
    m_series.push_back(r.m_t);
    t_series.push_back(r.t);
  }

  int usable = 0;
  for (double t : t_series)
    if (t >= kOleinikTMin) ++usable;
  if (usable >= 5) rep.oleinik = fit_oleinik_bound(m_series, t_series);
  return rep;
}

OleinikConstants solve_oleinik_constants(double c0, double c1, double c2) {
  if (!(c0 > 0.0) || !(c1 >= 0.0) || !(c2 > 0.0))
    throw AssumptionViolated("solve_oleinik_constants needs c0, c2 > 0 and c1 >= 0");
  const double disc = c1 * c1 + 4.0 * c0 * c2;
  if (!(disc > 0.0)) throw DegenerateRoots("discriminant not positive");
  const double sq = std::sqrt(disc);
  OleinikConstants out;
  out.root_pos = (-c1 + sq) / (2.0 * c2);
  const double m2 = (c1 + sq) / (2.0 * c2);
  out.root_neg = -m2;
  out.a = 2.0 * m2;
  out.c = (3.0 * c2 * m2 - c1) / (4.0 * m2);
  return out;
}

namespace {

// one adaptive Cash-Karp RK45 step of y' = f(y); returns new (t, y, h)
struct RkState {
  double t, y, h;
};

template <typename F>
RkState rk45_step(const F& f, RkState s, double t_stop, double rtol) {
  static const double b21 = 1.0 / 5.0;
  static const double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
  static const double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
  static const double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0,
                      b54 = 35.0 / 27.0;
  static const double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                      b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
  static const double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                      c6 = 512.0 / 1771.0;
  static const double d1 = 2825.0 / 27648.0, d3 = 18575.0 / 48384.0,
                      d4 = 13525.0 / 55296.0, d5 = 277.0 / 14336.0, d6 = 1.0 / 4.0;

  while (true) {
    double h = std::min(s.h, t_stop - s.t);
    const double k1 = f(s.y);
    const double k2 = f(s.y + h * b21 * k1);
    const double k3 = f(s.y + h * (b31 * k1 + b32 * k2));
    const double k4 = f(s.y + h * (b41 * k1 + b42 * k2 + b43 * k3));
    const double k5 = f(s.y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
    const double k6 = f(s.y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
    const double y5 = s.y + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
    const double y4 = s.y + h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
    const double err = std::abs(y5 - y4);
    const double scale = rtol * std::max(1.0, std::abs(s.y));
    if (err <= scale || h <= 1e-14 * std::max(1.0, std::abs(s.t))) {
      s.t += h;
      s.y = y5;
      const double grow = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 2.0;
      s.h = h * std::clamp(grow, 0.2, 2.0);
      return s;
    }
    s.h = h * std::max(0.2, 0.9 * std::pow(scale / err, 0.25));
  }
}

}  // namespace

RiccatiCertificate certify_riccati_bound(double c0, double c1, double c2, double a,
                                         double c, double m_start, double t0,
                                         double t_end, int n_samples) {
  auto f = [&](double m) { return c2 * m * m + c1 * m - c0; };
  RkState s{t0, m_start, 1e-7};
  RiccatiCertificate cert;
  cert.ok = true;
  cert.min_margin = kInf;
  const double lr = std::log(t_end / t0);
  for (int i = 1; i <= n_samples; ++i) {
    const double t_target = t0 * std::exp(lr * i / n_samples);
    while (s.t < t_target * (1.0 - 1e-15)) s = rk45_step(f, s, t_target, 1e-10);
    const double bound = -a - 1.0 / (c * s.t);
    const double margin = s.y - bound;
    cert.min_margin = std::min(cert.min_margin, margin);
    if (margin < 0.0) cert.ok = false;
  }
  return cert;
}

OleinikFit fit_oleinik_bound(const std::vector<double>& m, const std::vector<double>& t) {
  std::vector<double> mv, tv;
  for (size_t i = 0; i < m.size(); ++i)
    if (t[i] >= kOleinikTMin) {
      mv.push_back(m[i]);
      tv.push_back(t[i]);
    }
  if (mv.size() < 5)
    throw InsufficientData("oleinik fit needs >= 5 checkpoints with t >= 0.05");

  OleinikFit fit;
  // least-squares shape on the negative part: m ~ -a - b/t
  double s0 = 0, s1 = 0, s2 = 0, sy = 0, sfy = 0;
  int neg = 0;
  for (size_t i = 0; i < mv.size(); ++i) {
    if (mv[i] >= 0.0) continue;
    const double phi = 1.0 / tv[i];
    ++neg;
    s0 += 1.0;
    s1 += phi;
    s2 += phi * phi;
    sy += mv[i];
    sfy += phi * mv[i];
  }
  double b = 0.0;
  if (neg >= 2) {
    const double det = s0 * s2 - s1 * s1;
    if (std::abs(det) > 1e-30) {
      // solve [s0 s1; s1 s2] [a b]^T = [-sy, -sfy]^T
      b = (-s0 * sfy + s1 * sy) / det;
      if (b < 0.0) b = 0.0;
    }
  }
  // lift a to the lower envelope so the pair genuinely bounds the series
  double a = 0.0;
  for (size_t i = 0; i < mv.size(); ++i) a = std::max(a, -mv[i] - b / tv[i]);
  fit.a = a;
  fit.c = b > 0.0 ? 1.0 / b : kInf;
  fit.satisfied = true;
  for (size_t i = 0; i < mv.size(); ++i)
    if (mv[i] < -fit.a - b / tv[i] - 1e-6) fit.satisfied = false;
  return fit;
}

OleinikFit fit_oleinik_bound_improved(const std::vector<double>& m,
                                      const std::vector<double>& t, double m0) {
  if (!(m0 < 0.0))
    throw AssumptionViolated("improved oleinik fit needs a negative one-sided constant m0");
  std::vector<double> mv, tv;
  for (size_t i = 0; i < m.size(); ++i)
    if (t[i] > 0.0) {
      mv.push_back(m[i]);
      tv.push_back(t[i]);
    }
  if (mv.size() < 5) throw InsufficientData("improved oleinik fit needs >= 5 checkpoints");

  const double d = 1.0 / m0;  // < 0
  auto sse_of = [&](double c) {
    double mean = 0.0;
    for (size_t i = 0; i < mv.size(); ++i) mean += 1.0 / (d - c * tv[i]) - mv[i];
    mean /= mv.size();  // optimal a for this c
    double sse = 0.0;
    for (size_t i = 0; i < mv.size(); ++i) {
      const double r = mv[i] - (-mean + 1.0 / (d - c * tv[i]));
      sse += r * r;
    }
    return std::pair<double, double>(sse, mean);
  };

  // coarse log scan, then golden refinement
  double best_c = 1e-6, best_sse = kInf;
  for (int i = 0; i <= 240; ++i) {
    const double c = std::pow(10.0, -6.0 + 12.0 * i / 240.0);
    const double sse = sse_of(c).first;
    if (sse < best_sse) {
      best_sse = sse;
      best_c = c;
    }
  }
  double lo = best_c / 10.0, hi = best_c * 10.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = sse_of(x1).first, f2 = sse_of(x2).first;
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = sse_of(x1).first;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = sse_of(x2).first;
    }
  }
  const double c = 0.5 * (lo + hi);

  double a = 0.0;
  for (size_t i = 0; i < mv.size(); ++i)
    a = std::max(a, 1.0 / (d - c * tv[i]) - mv[i]);
  OleinikFit fit;
  fit.a = a;
  fit.c = c;
  fit.satisfied = true;
  for (size_t i = 0; i < mv.size(); ++i)
    if (mv[i] < -a + 1.0 / (d - c * tv[i]) - 1e-6) fit.satisfied = false;
  return fit;
}

double tv_on_window(const Field& xi, const Grid1D& grid, double lo, double hi) {
  if (lo < grid.x_lo - 1e-12 || hi > grid.x_hi + 1e-12 || !(lo < hi))
    throw WindowOutOfGrid("tv window must sit inside the grid");
  double tv = 0.0;
  for (int i = 0; i + 1 < grid.n; ++i) {
    if (grid.center(i) < lo || grid.center(i + 1) > hi) continue;
    tv += std::abs(xi[i + 1] - xi[i]);
  }
  return tv;
}

namespace {

// conservative restriction of a fine cell field onto the reference grid
Field restrict_to(const Field& fine, const Grid1D& fine_grid, const Grid1D& ref) {
  if (fine_grid.n == ref.n) return fine;
  if (fine_grid.n % ref.n != 0 ||
      std::abs(fine_grid.x_lo - ref.x_lo) > 1e-12 ||
      std::abs(fine_grid.x_hi - ref.x_hi) > 1e-12)
    throw GridMismatch("eps-run grid is not an integer refinement of the reference grid");
  const int k = fine_grid.n / ref.n;
  Field out(ref.n, 0.0);
  for (int i = 0; i < ref.n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < k; ++j) acc += fine[i * k + j];
    out[i] = acc / k;
  }
  return out;
}

}  // namespace

ConvergenceTable convergence_table(const std::vector<EpsRunSlice>& runs,
                                   const Grid1D& ref_grid, const Field& rho_ref,
                                   const Field& u_ref, double window_lo,
                                   double window_hi) {
  ConvergenceTable table;
  const double dx = ref_grid.dx();
  for (const EpsRunSlice& r : runs) {
    const Field xi = restrict_to(r.xi, r.grid, ref_grid);
    const Field u = restrict_to(r.u, r.grid, ref_grid);
    ConvergenceRow row;
    row.eps = r.eps;
    row.max_rho = r.max_rho;
    for (int i = 0; i < ref_grid.n; ++i) {
      const double x = ref_grid.center(i);
      if (x < window_lo || x > window_hi) continue;
      row.l1_xi += std::abs(xi[i] - rho_ref[i]) * dx;
      row.sup_u = std::max(row.sup_u, std::abs(u[i] - u_ref[i]));
    }
    table.rows.push_back(row);
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ConvergenceRow& a, const ConvergenceRow& b) { return a.eps > b.eps; });
  for (size_t i = 0; i + 1 < table.rows.size(); ++i) {
    const double e0 = table.rows[i].l1_xi, e1 = table.rows[i + 1].l1_xi;
    table.observed_orders_l1.push_back(e1 > 0.0 && e0 > 0.0 ? std::log2(e0 / e1) : 0.0);
  }
  return table;
}

}  // namespace garz
