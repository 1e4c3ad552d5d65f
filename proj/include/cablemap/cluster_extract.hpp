#pragma once

#include <string>
#include <vector>

#include "cablemap/types.hpp"

namespace cablemap {

// Fewest samples a cluster may carry: 3 hyperbola parameters plus margin.
inline constexpr int kMinClusterSamples = 5;

// A B-scan amplitude grid. Rows run down in two-way travel time, columns
// along the detection line.
struct BScanGrid {
  double dt = 0.0;     // nanoseconds per row
  double dy = 0.0;     // meters per column
  double line_x = 0.0; // survey-axis position of the detection line
  Matrix amplitude;    // rows x cols

  Eigen::Index rows() const { return amplitude.rows(); }
  Eigen::Index cols() const { return amplitude.cols(); }
  void validate() const;  // throws InvalidGrid
};

// Samples of one candidate hyperbolic signature, (y [m], t [ns]) per row.
struct PointCluster {
  SamplesYT samples;
  double source_line_x = 0.0;
};

// Thresholds |amplitude| >= threshold, labels 4-connected components, and
// keeps components that are at least min_cluster_size cells and whose
// minimum-t cells sit strictly inside the component's column range
// (a downward-opening shape has its apex away from the lateral boundary).
// Cell (r, c) maps to the cell center ((c + 0.5) * dy, (r + 0.5) * dt).
std::vector<PointCluster> extract_clusters(const BScanGrid& grid, double threshold,
                                           int min_cluster_size,
                                           bool eight_connectivity = false);

// Reads a cluster file: JSON array of {"line_x": number, "samples": [[y, t], ...]}.
// A zero-length file yields an empty list. Throws ParseError (with line
// number), TooFewSamples, or InputError on invariant violations.
std::vector<PointCluster> load_clusters(const std::string& path);

}  // namespace cablemap
