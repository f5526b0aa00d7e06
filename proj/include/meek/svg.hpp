#pragma once

#include <string>
#include <utility>
#include <vector>

namespace meek {

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct SvgChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 480;
};

// Minimal line chart: axes with 1-2-5 ticks, one polyline per series,
// legend. Non-finite points are skipped. Output is fully deterministic
// (fixed palette, no timestamps, stable number formatting).
std::string render_line_chart(const SvgChartSpec& spec,
                              const std::vector<SvgSeries>& series);

}  // namespace meek
