#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cablemap/cable_assign.hpp"
#include "cablemap/cluster_extract.hpp"
#include "cablemap/evaluation.hpp"
#include "cablemap/hyperbola_fit.hpp"
#include "cablemap/survey_frame.hpp"
#include "cablemap/synthetic_oracle.hpp"
#include "cablemap/types.hpp"

namespace cablemap {

// All writers go through a temp file and an atomic rename, so a failing run
// never leaves a partial output behind.
void atomic_write_text(const std::string& path, const std::string& text);

std::string read_text_file(const std::string& path);

// Detected points: CSV with header "x,y,z", one point per row, meters.
std::vector<DetectedPoint> load_points_csv(const std::string& path);
void save_points_csv(const std::string& path, const std::vector<DetectedPoint>& points);

// Flat key-value survey configuration (documented keys in the README).
SurveyConfig load_survey_config(const std::string& path);
std::string format_survey_config(const SurveyConfig& config);

// Simulation scenario: line layout, noise levels, seed and truth curves.
struct Scenario {
  std::vector<double> line_positions;
  double noise_y_sd = 0.1;
  double noise_z_sd = 0.05;
  NoiseFamily noise_family = NoiseFamily::kGaussian;
  std::uint64_t seed = 0;
  std::vector<TruthCable> cables;
};
Scenario load_scenario(const std::string& path);

// Cluster files: JSON array of {"line_x", "samples": [[y, t], ...]}.
void save_clusters_json(const std::string& path, const std::vector<PointCluster>& clusters);

// B-scan grid: CSV amplitude matrix plus a "<path>.meta" sidecar holding
// dt, dy and optionally line_x.
BScanGrid load_bscan_grid(const std::string& csv_path);
void save_bscan_grid(const std::string& csv_path, const BScanGrid& grid);

// Traces: JSON array of {cable_id, points: [[x, y, z], ...]}.
void save_traces_json(const std::string& path, const std::vector<CableTrace>& traces);
std::vector<CableTrace> load_traces_json(const std::string& path);

// Cable map: JSON array of {cable_id, samples: [{x, y, z, hw_y, hw_z}, ...]},
// plus a CSV alternative with matching columns.
void save_map_json(const std::string& path, const CableMap& map);
CableMap load_map_json(const std::string& path);
void save_map_csv(const std::string& path, const CableMap& map);

// Ground-truth cables for evaluation.
void save_truth_json(const std::string& path, const std::vector<TruthCable>& truths);
std::vector<TruthCable> load_truth_json(const std::string& path);

// Fit audit records: {line_x, A, B, C, iterations, rms, converged, scale_factor}.
void save_fit_reports_json(const std::string& path,
                           const std::vector<std::pair<double, FitReport>>& reports);

void save_eval_report_json(const std::string& path, const EvaluationSummary& summary);

}  // namespace cablemap
