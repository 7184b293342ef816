#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace freev::cli {

std::string render_bar_chart_svg(const std::string& title,
                                 const std::vector<std::string>& categories,
                                 const std::vector<BarSeries>& series,
                                 const std::string& value_label) {
  if (categories.empty()) throw std::invalid_argument("plot: empty category list");
  if (series.empty()) throw std::invalid_argument("plot: empty series list");
  for (const auto& s : series)
    if (s.values.size() != categories.size())
      throw std::invalid_argument("plot: series length does not match categories");

  double vmin = 1e300, vmax = -1e300;
  for (const auto& s : series)
    for (double v : s.values) {
      if (!(v > 0)) throw std::invalid_argument("plot: values must be positive for a log axis");
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  const double lo = std::floor(std::log10(vmin));
  const double hi = std::ceil(std::log10(vmax) + 1e-12);
  const double span = std::max(hi - lo, 1.0);

  const int width = 680, height = 420;
  const int left = 70, right = 20, top = 50, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const char* colors[] = {"#4878cf", "#e1812c", "#3a923a", "#c03d3e"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << title << "</text>\n";
  os << "<text x=\"14\" y=\"" << top + plot_h / 2
     << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
     << top + plot_h / 2 << ")\">" << value_label << "</text>\n";

  // gridlines per decade
  for (int d = 0; d <= static_cast<int>(span); ++d) {
    const double y = top + plot_h * (1.0 - d / span);
    os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << width - right << "\" y2=\""
       << y << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\" font-size=\"11\">1e" << static_cast<int>(lo) + d
       << "</text>\n";
  }

  const double group_w = plot_w / categories.size();
  const double bar_w = group_w * 0.7 / series.size();
  for (std::size_t c = 0; c < categories.size(); ++c) {
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = series[s].values[c];
      const double frac = (std::log10(v) - lo) / span;
      const double bh = plot_h * frac;
      const double x = left + c * group_w + group_w * 0.15 + s * bar_w;
      os << "<rect x=\"" << x << "\" y=\"" << top + plot_h - bh << "\" width=\"" << bar_w * 0.9
         << "\" height=\"" << bh << "\" fill=\"" << colors[s % 4] << "\"/>\n";
    }
    os << "<text x=\"" << left + c * group_w + group_w / 2 << "\" y=\"" << height - bottom + 18
       << "\" text-anchor=\"middle\" font-size=\"12\">" << categories[c] << "</text>\n";
  }

  // legend
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double x = left + s * 140.0;
    os << "<rect x=\"" << x << "\" y=\"" << height - 24 << "\" width=\"12\" height=\"12\" fill=\""
       << colors[s % 4] << "\"/>\n";
    os << "<text x=\"" << x + 18 << "\" y=\"" << height - 13 << "\" font-size=\"12\">"
       << series[s].label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace freev::cli
