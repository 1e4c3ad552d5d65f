#include "cablemap/svg_render.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cablemap {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};

struct Bounds {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  bool valid() const { return x_min <= x_max && y_min <= y_max; }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_map_svg(const CableMap& map, const std::vector<DetectedPoint>& points,
                           const std::vector<double>& line_positions) {
  Bounds b;
  for (const CableRecord& record : map) {
    for (const MapSample& s : record.samples) {
      b.add(s.x, s.y - s.hw_y);
      b.add(s.x, s.y + s.hw_y);
    }
  }
  for (const DetectedPoint& p : points) b.add(p.x, p.y);
  for (double x : line_positions) b.add(x, b.valid() ? b.y_min : 0.0);
  if (!b.valid()) b = Bounds{0, 1, 0, 1};
  if (b.x_max - b.x_min < 1e-9) b.x_max = b.x_min + 1.0;
  if (b.y_max - b.y_min < 1e-9) b.y_max = b.y_min + 1.0;

  const double width = 900.0, height = 600.0, margin = 50.0;
  const double sx = (width - 2 * margin) / (b.x_max - b.x_min);
  const double sy = (height - 2 * margin) / (b.y_max - b.y_min);
  const auto px = [&](double x) { return margin + (x - b.x_min) * sx; };
  // y grows upward in the plan view.
  const auto py = [&](double y) { return height - margin - (y - b.y_min) * sy; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (double x : line_positions) {
    svg << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(margin) << "\" x2=\""
        << num(px(x)) << "\" y2=\"" << num(height - margin)
        << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
  }

  std::size_t color_idx = 0;
  for (const CableRecord& record : map) {
    if (record.samples.empty()) continue;
    const char* color = kPalette[color_idx++ % (sizeof(kPalette) / sizeof(kPalette[0]))];

    svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (const MapSample& s : record.samples) {
      svg << num(px(s.x)) << "," << num(py(s.y + s.hw_y)) << " ";
    }
    for (auto it = record.samples.rbegin(); it != record.samples.rend(); ++it) {
      svg << num(px(it->x)) << "," << num(py(it->y - it->hw_y)) << " ";
    }
    svg << "\"/>\n";

    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const MapSample& s : record.samples) {
      svg << num(px(s.x)) << "," << num(py(s.y)) << " ";
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << num(px(record.samples.front().x) + 4) << "\" y=\""
        << num(py(record.samples.front().y) - 6) << "\" font-size=\"12\" fill=\"" << color
        << "\">cable " << record.cable_id << "</text>\n";
  }

  for (const DetectedPoint& p : points) {
    svg << "<circle cx=\"" << num(px(p.x)) << "\" cy=\"" << num(py(p.y))
        << "\" r=\"3\" fill=\"#333333\"/>\n";
  }

  svg << "<text x=\"" << num(width / 2) << "\" y=\"" << num(height - 12)
      << "\" font-size=\"12\" text-anchor=\"middle\">x [m] (" << num(b.x_min) << " to "
      << num(b.x_max) << ")</text>\n";
  svg << "<text x=\"12\" y=\"" << num(height / 2)
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 12 "
      << num(height / 2) << ")\">y [m] (" << num(b.y_min) << " to " << num(b.y_max)
      << ")</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace cablemap
