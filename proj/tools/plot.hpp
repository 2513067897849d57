#pragma once

#include <string>
#include <vector>

#include "ergokit/series.hpp"

namespace ergokit::cli {

// Writes several series onto the union of their time grids as a
// whitespace-separated .dat table. Cells a series has no sample for are
// written as "nan" so gnuplot skips them.
void write_union_dat(const std::string& path, const std::vector<SeriesRecord>& series);

// Renders the series as a standalone SVG line chart. The x axis switches to
// a log10 scale when all times are positive and span more than two decades.
void write_svg_chart(const std::string& path, const std::vector<SeriesRecord>& series,
                     const std::string& title);

}  // namespace ergokit::cli
