#pragma once

#include <string>

#include "nucleate/io.hpp"

namespace nucleate {

enum class PlotKind { histogram_overlay, cdf_compare };

// Emits a standalone gnuplot script as text; no rendering happens here.
//   histogram_overlay: data needs a zeta_rel column (samples), table needs
//                      x and density columns.
//   cdf_compare:       data needs value/cumulative columns (ECDF), table
//                      needs x and G columns.
// Throws std::runtime_error naming the first absent column.
std::string emit_plot_script(const CsvTable& data, const std::string& data_path, PlotKind kind,
                             const CsvTable& table, const std::string& table_path);

}  // namespace nucleate
