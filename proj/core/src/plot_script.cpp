#include "nucleate/plot_script.hpp"

#include <stdexcept>

namespace nucleate {

namespace {

int require_column(const CsvTable& table, const std::string& name) {
  const int idx = table.column_index(name);
  if (idx < 0) throw std::runtime_error("missing column: " + name);
  return idx + 1;  // gnuplot columns are 1-based
}

}  // namespace

std::string emit_plot_script(const CsvTable& data, const std::string& data_path, PlotKind kind,
                             const CsvTable& table, const std::string& table_path) {
  if (data.rows.empty()) throw std::runtime_error("missing column: dataset is empty");
  std::string script;
  script += "set terminal pngcairo size 960,640\n";
  script += "set key top right\n";
  if (kind == PlotKind::histogram_overlay) {
    const int sample_col = require_column(data, "zeta_rel");
    const int x_col = require_column(table, "x");
    const int f_col = require_column(table, "density");
    const double n = static_cast<double>(data.rows.size());
    script += "set output 'first_nucleation_overlay.png'\n";
    script += "set xlabel 'relative location'\nset ylabel 'density'\n";
    script += "binwidth = 0.04\n";
    script += "bin(v) = binwidth*(floor(v/binwidth)+0.5)\n";
    script += "set boxwidth binwidth\nset style fill solid 0.35\n";
    script += "n = " + format_double(n) + "\n";
    script += "plot '" + data_path + "' every ::1 using (bin($" + std::to_string(sample_col) +
              ")):(1.0/(n*binwidth)) smooth freq with boxes title 'simulation', \\\n";
    script += "     '" + table_path + "' every ::1 using " + std::to_string(x_col) + ":" +
              std::to_string(f_col) + " with lines lw 2 title 'splitting density'\n";
  } else {
    const int v_col = require_column(data, "value");
    const int c_col = require_column(data, "cumulative");
    const int x_col = require_column(table, "x");
    const int g_col = require_column(table, "G");
    script += "set output 'gap_cdf_compare.png'\n";
    script += "set xlabel 'normalized gap'\nset ylabel 'CDF'\n";
    script += "plot '" + data_path + "' every ::1 using " + std::to_string(v_col) + ":" +
              std::to_string(c_col) + " with steps title 'empirical', \\\n";
    script += "     '" + table_path + "' every ::1 using " + std::to_string(x_col) + ":" +
              std::to_string(g_col) + " with lines lw 2 title 'limit law'\n";
  }
  return script;
}

}  // namespace nucleate
