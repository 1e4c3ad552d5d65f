#pragma once

#include <vector>

#include "cablemap/survey_frame.hpp"
#include "cablemap/types.hpp"

namespace cablemap {

// x-ordered detected points attributed to one physical cable.
struct CableTrace {
  int cable_id = 0;
  std::vector<DetectedPoint> points;
};

// Partitions normalized detected points into traces, one detection line at a
// time in ascending x. Each point on a line is matched to the open trace
// whose last segment it extends with the greatest direction cosine (computed
// on the full (dx, dy, dz) vectors), subject to cosine >= cos(threshold) and
// one point per trace per line; per-line conflicts are resolved by taking
// candidate pairs in best-cosine-first order. Unmatched points open new
// traces whose prior direction is +X, the virtual predecessor one line
// spacing behind. Points sharing a line may be given in any order without
// changing the partition.
std::vector<CableTrace> assign_points(const std::vector<DetectedPoint>& points,
                                      const SurveyConfig& config,
                                      double angle_threshold_deg);

// Drops traces shorter than min_trace_points and renumbers survivors
// contiguously from 1, preserving order.
std::vector<CableTrace> prune_short(std::vector<CableTrace> traces, int min_trace_points);

}  // namespace cablemap
