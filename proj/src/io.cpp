#include "garz/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "garz/errors.hpp"

namespace garz {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string state_csv_name(double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "state_t%.4f.csv", t);
  return buf;
}

void write_state_csv(const std::string& path, const GridState& s, const XiField& f,
                     const Grid1D& grid) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x,rho,u,z,psi,xi,h\n";
  for (int i = 0; i < grid.n; ++i) {
    out << format_full(grid.center(i)) << ',' << format_full(s.rho[i]) << ','
        << format_full(s.u[i]) << ',' << format_full(s.z[i]) << ','
        << format_full(s.psi[i]) << ',' << format_full(f.xi[i]) << ','
        << format_full(f.h[i]) << '\n';
  }
}

StateCsv read_state_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  StateCsv csv;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::istringstream hdr(line);
  std::string col;
  while (std::getline(hdr, col, ',')) csv.columns.push_back(col);
  csv.data.resize(csv.columns.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    size_t c = 0;
    while (std::getline(row, cell, ',')) {
      if (c >= csv.data.size()) throw std::runtime_error(path + ": ragged row");
      csv.data[c++].push_back(std::stod(cell));
    }
  }
  return csv;
}

void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (size_t c = 0; c < columns.size(); ++c)
    out << columns[c] << (c + 1 < columns.size() ? ',' : '\n');
  for (const auto& row : rows)
    for (size_t c = 0; c < row.size(); ++c)
      out << format_full(row[c]) << (c + 1 < row.size() ? ',' : '\n');
}

void write_series_csv(const std::string& path, const DiagnosticsReport& rep) {
  std::vector<std::string> cols = {"t",      "mass",    "rho_min", "rho_max", "u_min",
                                   "u_max",  "z_min",   "z_max",   "psi_min", "psi_max",
                                   "xi_min", "xi_max",  "m_t",     "tv_xi",   "consistency"};
  std::vector<std::vector<double>> rows;
  for (const CheckpointRecord& r : rep.records)
    rows.push_back({r.t, r.mass, r.rho_min, r.rho_max, r.u_min, r.u_max, r.z_min, r.z_max,
                    r.psi_min, r.psi_max, r.xi_min, r.xi_max, r.m_t, r.tv_xi,
                    r.consistency});
  write_table_csv(path, cols, rows);
}

void write_gnuplot_series(const std::string& path, const std::string& series_csv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set xlabel 't'\n"
      << "set terminal pngcairo size 900,600\n"
      << "set output 'm_t.png'\n"
      << "plot '" << series_csv << "' using 1:13 with linespoints title 'm(t)'\n"
      << "set output 'tv_t.png'\n"
      << "plot '" << series_csv << "' using 1:14 with linespoints title 'TV xi'\n";
}

void write_gnuplot_convergence(const std::string& path, const std::string& table_csv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set logscale xy\n"
      << "set xlabel 'epsilon'\n"
      << "set terminal pngcairo size 900,600\n"
      << "set output 'convergence.png'\n"
      << "plot '" << table_csv << "' using 1:2 with linespoints title 'L1(xi-rho_ref)', \\\n"
      << "     '" << table_csv << "' using 1:3 with linespoints title 'sup|u-u_ref|'\n";
}

}  // namespace garz
