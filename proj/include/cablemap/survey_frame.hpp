#pragma once

#include <optional>
#include <vector>

#include "cablemap/types.hpp"

namespace cablemap {

// One cable evidence point in the survey frame: x along the survey axis,
// y along the detection-line axis, z depth in meters (positive downward).
struct DetectedPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct SurveyConfig {
  std::vector<double> line_positions;  // x of each detection line, strictly increasing
  double wave_speed_v = 0.1;           // wave propagation speed, m/ns
  double beta = 1.0;                   // kernel length-scale, meters
  double theta_y = 0.3;                // position-noise hyperparameter, meters
  double theta_z = 0.1;                // depth-noise hyperparameter, meters
  int min_trace_points = 3;
  double sample_step = 0.25;           // x-spacing of map output, meters
  double angle_threshold_deg = 60.0;   // max turn accepted when extending a trace

  // Per-axis length-scale overrides; both fall back to beta.
  std::optional<double> beta_y;
  std::optional<double> beta_z;

  double effective_beta_y() const { return beta_y.value_or(beta); }
  double effective_beta_z() const { return beta_z.value_or(beta); }
  double line_spacing() const;  // spacing of the first line pair, 1.0 if unknown

  // Throws InputError on any invariant violation. line_positions may be left
  // empty for stages that derive the line layout from the data itself;
  // when present it must hold at least two strictly increasing values.
  void validate() const;
};

// One sample of the output map at position x.
struct MapSample {
  double x = 0.0;
  double y = 0.0;     // most likely y
  double z = 0.0;     // most likely depth
  double hw_y = 0.0;  // confidence half-width on y
  double hw_z = 0.0;  // confidence half-width on z
};

struct CableRecord {
  int cable_id = 0;
  std::vector<MapSample> samples;  // x-sorted, spanning the trace's x range
};

using CableMap = std::vector<CableRecord>;

// Sorts points ascending by x, keeping the input order of ties. Throws
// EmptyInput / NonFiniteValue.
std::vector<DetectedPoint> normalize_points(std::vector<DetectedPoint> raw);

}  // namespace cablemap
