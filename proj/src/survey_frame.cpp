#include "cablemap/survey_frame.hpp"

#include <algorithm>
#include <cmath>

namespace cablemap {

double SurveyConfig::line_spacing() const {
  if (line_positions.size() >= 2) {
    return line_positions[1] - line_positions[0];
  }
  return 1.0;
}

void SurveyConfig::validate() const {
  if (!line_positions.empty()) {
    if (line_positions.size() < 2) {
      throw InputError("InvalidConfig: line_positions needs at least 2 entries");
    }
    for (std::size_t i = 0; i + 1 < line_positions.size(); ++i) {
      if (!(line_positions[i] < line_positions[i + 1])) {
        throw InputError("InvalidConfig: line_positions must be strictly increasing");
      }
    }
  }
  if (!(wave_speed_v > 0.0)) throw InputError("InvalidConfig: wave_speed_v must be > 0");
  if (!(beta > 0.0)) throw InputError("InvalidConfig: beta must be > 0");
  if (beta_y && !(*beta_y > 0.0)) throw InputError("InvalidConfig: beta_y must be > 0");
  if (beta_z && !(*beta_z > 0.0)) throw InputError("InvalidConfig: beta_z must be > 0");
  if (!(theta_y >= 0.0)) throw InputError("InvalidConfig: theta_y must be >= 0");
  if (!(theta_z >= 0.0)) throw InputError("InvalidConfig: theta_z must be >= 0");
  if (min_trace_points < 1) throw InputError("InvalidConfig: min_trace_points must be >= 1");
  if (!(sample_step > 0.0)) throw InputError("InvalidConfig: sample_step must be > 0");
  if (!(angle_threshold_deg > 0.0 && angle_threshold_deg <= 90.0)) {
    throw InputError("InvalidConfig: angle_threshold_deg must be in (0, 90]");
  }
}

std::vector<DetectedPoint> normalize_points(std::vector<DetectedPoint> raw) {
  if (raw.empty()) throw EmptyInput("EmptyInput: no detected points");
  for (const auto& p : raw) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw NonFiniteValue("NonFiniteValue: detected point has NaN/inf coordinate");
    }
  }
  std::stable_sort(raw.begin(), raw.end(),
                   [](const DetectedPoint& a, const DetectedPoint& b) { return a.x < b.x; });
  return raw;
}

}  // namespace cablemap
