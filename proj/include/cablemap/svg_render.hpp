#pragma once

#include <string>
#include <vector>

#include "cablemap/survey_frame.hpp"

namespace cablemap {

// Plan view (XOY) of a cable map: detection lines as vertical strokes,
// detected points as dots, each cable's most-likely curve as a polyline with
// a translucent +-halfwidth corridor. Returns the SVG document text.
std::string render_map_svg(const CableMap& map, const std::vector<DetectedPoint>& points,
                           const std::vector<double>& line_positions);

}  // namespace cablemap
