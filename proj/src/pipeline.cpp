#include "cablemap/pipeline.hpp"

#include <algorithm>
#include <set>

#include "cablemap/cable_assign.hpp"
#include "cablemap/cluster_extract.hpp"
#include "cablemap/gp_regression.hpp"
#include "cablemap/hyperbola_fit.hpp"
#include "cablemap/svg_render.hpp"

namespace cablemap {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  return 2;  // InputError and anything else malformed about the request
}

RunResult run_pipeline(const PipelineRun& run) {
  const int modes = (!run.scenario_path.empty()) + (!run.points_path.empty()) +
                    (!run.clusters_path.empty());
  if (modes != 1) {
    throw InputError("InvalidArgument: exactly one input mode per run "
                     "(scenario, points or clusters)");
  }
  if (run.map_out.empty()) {
    throw InputError("InvalidArgument: run needs a map output path");
  }
  run.config.validate();

  RunResult result;
  SurveyConfig config = run.config;
  std::vector<TruthCable> truths;
  std::uint64_t eval_seed = run.seed.value_or(0);

  if (!run.scenario_path.empty()) {
    Scenario scenario = load_scenario(run.scenario_path);
    if (run.seed) scenario.seed = *run.seed;
    eval_seed = scenario.seed;
    config.line_positions = scenario.line_positions;
    truths = scenario.cables;
    for (std::size_t k = 0; k < scenario.cables.size(); ++k) {
      // Distinct stream per cable, derived from the scenario seed.
      const std::uint64_t cable_seed =
          scenario.seed * 1000003ULL + static_cast<std::uint64_t>(k);
      const auto pts = sample_detections(scenario.cables[k], config, scenario.noise_y_sd,
                                         scenario.noise_z_sd, cable_seed,
                                         scenario.noise_family);
      result.points.insert(result.points.end(), pts.begin(), pts.end());
    }
  } else if (!run.clusters_path.empty()) {
    const auto clusters = load_clusters(run.clusters_path);
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      try {
        const HyperbolaParams init = algebraic_init(clusters[k]);
        const FitReport report = orthogonal_refine(clusters[k], init);
        result.points.push_back(apex_to_detection(report.params, clusters[k].source_line_x,
                                                  config.wave_speed_v));
      } catch (const NumericalError& e) {
        // Non-hyperbolic junk from the extractor; drop it, keep the batch.
        result.warnings.push_back("cluster " + std::to_string(k + 1) +
                                  " discarded: " + e.what());
      }
    }
  } else {
    result.points = load_points_csv(run.points_path);
  }

  CableMap map;
  if (!result.points.empty()) {
    result.points = normalize_points(std::move(result.points));
    auto traces = assign_points(result.points, config, config.angle_threshold_deg);
    traces = prune_short(std::move(traces), config.min_trace_points);
    if (traces.empty()) {
      result.warnings.push_back("no trace survived pruning; map is empty");
    }
    for (const CableTrace& trace : traces) {
      if (trace.points.size() < 2) {
        result.warnings.push_back("cable " + std::to_string(trace.cable_id) +
                                  " has a single point; skipped");
        continue;
      }
      map.push_back(fit_cable(trace, config));
    }
  } else {
    result.warnings.push_back("no detected points; map is empty");
  }
  result.map = map;

  if (!run.points_out.empty()) save_points_csv(run.points_out, result.points);
  if (!run.truth_out.empty() && !truths.empty()) save_truth_json(run.truth_out, truths);
  save_map_json(run.map_out, map);

  if (!run.report_out.empty()) {
    if (!truths.empty() && !map.empty()) {
      const EvaluationSummary summary =
          evaluate_map(map, truths, config.line_positions, run.n_random_eval, eval_seed);
      save_eval_report_json(run.report_out, summary);
    } else {
      // No ground truth to compare against; record what the run produced.
      std::string text = "{\n  \"detected_points\": " +
                         std::to_string(result.points.size()) +
                         ",\n  \"cables\": " + std::to_string(map.size()) +
                         ",\n  \"warnings\": " + std::to_string(result.warnings.size()) +
                         "\n}\n";
      atomic_write_text(run.report_out, text);
    }
  }

  if (!run.svg_out.empty()) {
    std::vector<double> lines = config.line_positions;
    if (lines.empty()) {
      std::set<double> distinct;
      for (const DetectedPoint& p : result.points) distinct.insert(p.x);
      lines.assign(distinct.begin(), distinct.end());
    }
    atomic_write_text(run.svg_out, render_map_svg(map, result.points, lines));
  }
  return result;
}

}  // namespace cablemap
