#pragma once

#include <string>
#include <vector>

namespace freev::cli {

struct BarSeries {
  std::string label;
  std::vector<double> values;  // one per category
};

// Grouped bar chart with a log10 value axis (prior timings span 3+ decades).
// Throws on empty categories or shape mismatches.
std::string render_bar_chart_svg(const std::string& title,
                                 const std::vector<std::string>& categories,
                                 const std::vector<BarSeries>& series,
                                 const std::string& value_label);

}  // namespace freev::cli
