#include "meek/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "meek/io.hpp"

namespace meek {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#ff7f0e", "#9467bd", "#8c564b"};
constexpr int kPaletteSize = 6;

std::string px(double v) {
  return format_double(std::round(v * 100.0) / 100.0);
}

std::string escape_text(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(lo <= hi); }
};

// Largest value from {1, 2, 5} * 10^k not exceeding raw.
double nice_step(double raw) {
  if (!(raw > 0.0)) return 1.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {5.0, 2.0, 1.0}) {
    if (mag * m <= raw) return mag * m;
  }
  return mag / 2.0;
}

std::vector<double> ticks_for(const Range& r, int target) {
  double step = nice_step((r.hi - r.lo) / std::max(target, 1));
  std::vector<double> ticks;
  double first = std::ceil(r.lo / step - 1e-9) * step;
  for (double v = first; v <= r.hi + step * 1e-9; v += step) {
    // Snap values like 0.30000000000000004 back onto the grid.
    double snapped = std::round(v / step) * step;
    ticks.push_back(snapped == 0.0 ? 0.0 : snapped);
  }
  return ticks;
}

}  // namespace

std::string render_line_chart(const SvgChartSpec& spec,
                              const std::vector<SvgSeries>& series) {
  const double width = spec.width;
  const double height = spec.height;
  const double ml = 64, mr = 16, mt = spec.title.empty() ? 16 : 40, mb = 48;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  Range xr, yr;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (std::isfinite(x) && std::isfinite(y)) {
        xr.add(x);
        yr.add(y);
      }
    }
  }
  if (xr.empty()) {
    xr = {0.0, 1.0};
    yr = {0.0, 1.0};
  }
  if (xr.hi == xr.lo) {
    xr.lo -= 0.5;
    xr.hi += 0.5;
  }
  if (yr.hi == yr.lo) {
    yr.lo -= 0.5;
    yr.hi += 0.5;
  }
  double ypad = (yr.hi - yr.lo) * 0.05;
  yr.lo -= ypad;
  yr.hi += ypad;

  auto sx = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double y) {
    return mt + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
      << ' ' << spec.height << "\">\n";
  out << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" fill=\"white\"/>\n";
  if (!spec.title.empty()) {
    out << "<text x=\"" << px(width / 2)
        << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << escape_text(spec.title) << "</text>\n";
  }

  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double t : ticks_for(xr, 8)) {
    double x = sx(t);
    out << "<line x1=\"" << px(x) << "\" y1=\"" << px(mt) << "\" x2=\""
        << px(x) << "\" y2=\"" << px(mt + plot_h)
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << px(x) << "\" y=\"" << px(mt + plot_h + 16)
        << "\" text-anchor=\"middle\">" << format_double(t) << "</text>\n";
  }
  for (double t : ticks_for(yr, 6)) {
    double y = sy(t);
    out << "<line x1=\"" << px(ml) << "\" y1=\"" << px(y) << "\" x2=\""
        << px(ml + plot_w) << "\" y2=\"" << px(y)
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << px(ml - 6) << "\" y=\"" << px(y + 4)
        << "\" text-anchor=\"end\">" << format_double(t) << "</text>\n";
  }
  out << "</g>\n";

  out << "<rect x=\"" << px(ml) << "\" y=\"" << px(mt) << "\" width=\""
      << px(plot_w) << "\" height=\"" << px(plot_h)
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % kPaletteSize];
    std::string points;
    for (const auto& [x, y] : series[i].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (!points.empty()) points += ' ';
      points += px(sx(x)) + "," + px(sy(y));
    }
    if (!points.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
    }
  }

  double ly = mt + 14;
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].label.empty()) continue;
    const char* color = kPalette[i % kPaletteSize];
    double lx = ml + plot_w - 150;
    out << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly - 4) << "\" x2=\""
        << px(lx + 20) << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << px(lx + 26) << "\" y=\"" << px(ly) << "\">"
        << escape_text(series[i].label) << "</text>\n";
    ly += 16;
  }
  out << "</g>\n";

  if (!spec.x_label.empty()) {
    out << "<text x=\"" << px(ml + plot_w / 2) << "\" y=\""
        << px(height - 10)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << escape_text(spec.x_label) << "</text>\n";
  }
  if (!spec.y_label.empty()) {
    out << "<text x=\"14\" y=\"" << px(mt + plot_h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(-90 14 "
        << px(mt + plot_h / 2) << ")\">" << escape_text(spec.y_label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace meek
