#pragma once

#include <string>
#include <vector>

#include "garz/convolution.hpp"
#include "garz/diagnostics.hpp"
#include "garz/grid.hpp"
#include "garz/state.hpp"

namespace garz {

/// Checkpoint dump: header row, then one row per cell with
/// x, rho, u, z, psi, xi, h at 17 significant digits (round-trip exact).
void write_state_csv(const std::string& path, const GridState& s, const XiField& f,
                     const Grid1D& grid);

/// Filename the dumps use: state_t{time:.4}.csv.
std::string state_csv_name(double t);

struct StateCsv {
  std::vector<std::string> columns;
  std::vector<Field> data;  // column-major
};
StateCsv read_state_csv(const std::string& path);

/// Generic numeric table with a header row, 17 significant digits.
void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

void write_series_csv(const std::string& path, const DiagnosticsReport& rep);

/// Text-only plot scripts referencing the CSVs (no plotting dependency).
void write_gnuplot_series(const std::string& path, const std::string& series_csv);
void write_gnuplot_convergence(const std::string& path, const std::string& table_csv);

std::string format_full(double v);  // %.17g

}  // namespace garz
