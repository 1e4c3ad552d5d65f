#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cablemap/io.hpp"
#include "cablemap/survey_frame.hpp"
#include "cablemap/types.hpp"

namespace cablemap {

// One end-to-end run. Exactly one of scenario_path / points_path /
// clusters_path may be set; map_out is required, the rest optional.
struct PipelineRun {
  SurveyConfig config;
  std::string scenario_path;
  std::string points_path;
  std::string clusters_path;

  std::string map_out;
  std::string report_out;  // evaluation report (scenario mode) or run summary
  std::string svg_out;
  std::string points_out;  // scenario/cluster mode: dump the detected points
  std::string truth_out;   // scenario mode: dump the truth curves

  std::optional<std::uint64_t> seed;  // overrides the scenario's seed
  int n_random_eval = 20;
};

struct RunResult {
  CableMap map;
  std::vector<DetectedPoint> points;
  std::vector<std::string> warnings;
};

// Runs (clusters -> hyperbola fits -> apexes | scenario -> simulation |
// points file) -> normalize -> assign -> prune -> per-cable GP, then writes
// the requested artifacts atomically. Throws the originating module's error;
// exit_code_for maps it to the process exit convention.
RunResult run_pipeline(const PipelineRun& run);

// 2 for input/parse errors, 3 for numerical failures, 4 for I/O errors.
int exit_code_for(const std::exception& e);

}  // namespace cablemap
