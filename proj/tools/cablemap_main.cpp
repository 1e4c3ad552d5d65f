#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cablemap/cable_assign.hpp"
#include "cablemap/cluster_extract.hpp"
#include "cablemap/gp_regression.hpp"
#include "cablemap/hyperbola_fit.hpp"
#include "cablemap/io.hpp"
#include "cablemap/pipeline.hpp"
#include "cablemap/svg_render.hpp"

namespace {

using namespace cablemap;

struct CommonOpts {
  std::string config_path;
  std::optional<double> beta, theta_y, theta_z, sample_step, line_spacing, angle_threshold;
  std::optional<int> min_trace_points;
  std::optional<double> line_x0;
  std::optional<int> line_count;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "survey config file (key = value)");
  cmd->add_option("--beta", opts->beta, "kernel length-scale [m]");
  cmd->add_option("--theta-y", opts->theta_y, "position-noise hyperparameter [m]");
  cmd->add_option("--theta-z", opts->theta_z, "depth-noise hyperparameter [m]");
  cmd->add_option("--sample-step", opts->sample_step, "map output spacing [m]");
  cmd->add_option("--min-trace-points", opts->min_trace_points,
                  "shortest trace kept after pruning");
  cmd->add_option("--angle-threshold", opts->angle_threshold,
                  "max turn when extending a trace [deg]");
  cmd->add_option("--line-spacing", opts->line_spacing, "detection-line spacing [m]");
  cmd->add_option("--line-x0", opts->line_x0, "x of the first detection line [m]");
  cmd->add_option("--line-count", opts->line_count, "number of detection lines");
}

// File values first, then explicit flags on top.
SurveyConfig resolve_config(const CommonOpts& opts) {
  SurveyConfig config;
  if (!opts.config_path.empty()) config = load_survey_config(opts.config_path);
  if (opts.beta) config.beta = *opts.beta;
  if (opts.theta_y) config.theta_y = *opts.theta_y;
  if (opts.theta_z) config.theta_z = *opts.theta_z;
  if (opts.sample_step) config.sample_step = *opts.sample_step;
  if (opts.min_trace_points) config.min_trace_points = *opts.min_trace_points;
  if (opts.angle_threshold) config.angle_threshold_deg = *opts.angle_threshold;
  if (opts.line_spacing || opts.line_x0 || opts.line_count) {
    const double x0 = opts.line_x0.value_or(
        config.line_positions.empty() ? 0.0 : config.line_positions.front());
    const double spacing = opts.line_spacing.value_or(2.0);
    const int count = opts.line_count.value_or(
        config.line_positions.empty() ? 11 : static_cast<int>(config.line_positions.size()));
    config.line_positions.clear();
    for (int i = 0; i < count; ++i) config.line_positions.push_back(x0 + spacing * i);
  }
  config.validate();
  return config;
}

int guarded(const std::string& stage, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "cablemap " << stage << ": " << e.what() << "\n";
    return exit_code_for(e);
  }
}

void print_defaults() {
  SurveyConfig config;
  std::cout << format_survey_config(config);
  std::cout << "threshold_frac = 0.5\n";
  std::cout << "min_cluster_size = 5\n";
  std::cout << "n_random_eval = 20\n";
  std::cout << "seed = 0\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Buried-cable mapping from per-line GPR evidence"};
  app.require_subcommand(0, 1);
  bool show_defaults = false;
  app.add_flag("--print-config", show_defaults, "print all defaults and exit");

  // simulate -------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "generate noisy detected points from a scenario");
  std::string sim_in, sim_out, sim_truth;
  std::optional<std::uint64_t> sim_seed;
  sim->add_option("--input", sim_in, "scenario file")->required();
  sim->add_option("--output", sim_out, "points CSV to write")->required();
  sim->add_option("--truth", sim_truth, "truth JSON to write");
  sim->add_option("--seed", sim_seed, "override the scenario seed");

  // extract ----------------------------------------------------------------
  auto* ext = app.add_subcommand("extract", "extract point clusters from a B-scan grid");
  std::string ext_in, ext_out;
  double ext_threshold_frac = 0.5;
  std::optional<double> ext_threshold_abs;
  int ext_min_size = 5;
  bool ext_eight = false;
  ext->add_option("--input", ext_in, "grid CSV (expects <input>.meta sidecar)")->required();
  ext->add_option("--output", ext_out, "clusters JSON to write")->required();
  ext->add_option("--threshold-frac", ext_threshold_frac,
                  "threshold as a fraction of max |amplitude|");
  ext->add_option("--threshold", ext_threshold_abs, "absolute amplitude threshold");
  ext->add_option("--min-cluster-size", ext_min_size, "smallest component kept");
  ext->add_flag("--eight-connectivity", ext_eight, "use 8-connected components");

  // fit-hyperbolas -----------------------------------------------------------
  auto* fit = app.add_subcommand("fit-hyperbolas",
                                 "fit clusters and emit apex detected points");
  CommonOpts fit_opts;
  std::string fit_in, fit_out, fit_report;
  add_common(fit, &fit_opts);
  fit->add_option("--input", fit_in, "clusters JSON")->required();
  fit->add_option("--output", fit_out, "points CSV to write")->required();
  fit->add_option("--report", fit_report, "fit reports JSON to write");

  // map ---------------------------------------------------------------------
  auto* map_cmd = app.add_subcommand("map", "cluster detected points and fit cable curves");
  CommonOpts map_opts;
  std::string map_in, map_out, map_svg, map_csv, map_traces;
  add_common(map_cmd, &map_opts);
  map_cmd->add_option("--input", map_in, "points CSV")->required();
  map_cmd->add_option("--output", map_out, "cable map JSON to write")->required();
  map_cmd->add_option("--svg", map_svg, "plan-view SVG to write");
  map_cmd->add_option("--csv", map_csv, "cable map CSV to write");
  map_cmd->add_option("--traces", map_traces, "trace JSON to write");

  // evaluate ------------------------------------------------------------------
  auto* ev = app.add_subcommand("evaluate", "compare a cable map against ground truth");
  CommonOpts ev_opts;
  std::string ev_in, ev_truth, ev_out;
  std::uint64_t ev_seed = 0;
  int ev_random = 20;
  add_common(ev, &ev_opts);
  ev->add_option("--input", ev_in, "cable map JSON")->required();
  ev->add_option("--truth", ev_truth, "truth JSON")->required();
  ev->add_option("--output", ev_out, "evaluation report JSON to write");
  ev->add_option("--seed", ev_seed, "seed for the random eval points");
  ev->add_option("--random-points", ev_random, "random eval points per cable");

  // render ---------------------------------------------------------------
  auto* ren = app.add_subcommand("render", "plan-view SVG of a cable map");
  std::string ren_in, ren_points, ren_out;
  CommonOpts ren_opts;
  add_common(ren, &ren_opts);
  ren->add_option("--input", ren_in, "cable map JSON")->required();
  ren->add_option("--points", ren_points, "points CSV to overlay");
  ren->add_option("--output,--svg", ren_out, "SVG to write")->required();

  CLI11_PARSE(app, argc, argv);

  if (show_defaults) {
    print_defaults();
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return 0;
  }

  if (sim->parsed()) {
    return guarded("simulate", [&] {
      Scenario scenario = load_scenario(sim_in);
      if (sim_seed) scenario.seed = *sim_seed;
      SurveyConfig config;
      config.line_positions = scenario.line_positions;
      config.validate();
      std::vector<DetectedPoint> points;
      for (std::size_t k = 0; k < scenario.cables.size(); ++k) {
        const std::uint64_t cable_seed =
            scenario.seed * 1000003ULL + static_cast<std::uint64_t>(k);
        const auto pts =
            sample_detections(scenario.cables[k], config, scenario.noise_y_sd,
                              scenario.noise_z_sd, cable_seed, scenario.noise_family);
        points.insert(points.end(), pts.begin(), pts.end());
      }
      points = normalize_points(std::move(points));
      save_points_csv(sim_out, points);
      if (!sim_truth.empty()) save_truth_json(sim_truth, scenario.cables);
      std::cout << "simulate: wrote " << points.size() << " points to " << sim_out << "\n";
    });
  }

  if (ext->parsed()) {
    return guarded("extract", [&] {
      const BScanGrid grid = load_bscan_grid(ext_in);
      const double threshold = ext_threshold_abs
                                   ? *ext_threshold_abs
                                   : ext_threshold_frac * grid.amplitude.cwiseAbs().maxCoeff();
      const auto clusters = extract_clusters(grid, threshold, ext_min_size, ext_eight);
      save_clusters_json(ext_out, clusters);
      std::cout << "extract: " << clusters.size() << " cluster(s) at threshold " << threshold
                << "\n";
    });
  }

  if (fit->parsed()) {
    return guarded("fit-hyperbolas", [&] {
      const SurveyConfig config = resolve_config(fit_opts);
      const auto clusters = load_clusters(fit_in);
      std::vector<DetectedPoint> points;
      std::vector<std::pair<double, FitReport>> reports;
      for (std::size_t k = 0; k < clusters.size(); ++k) {
        try {
          const HyperbolaParams init = algebraic_init(clusters[k]);
          const FitReport report = orthogonal_refine(clusters[k], init);
          points.push_back(apex_to_detection(report.params, clusters[k].source_line_x,
                                             config.wave_speed_v));
          reports.emplace_back(clusters[k].source_line_x, report);
        } catch (const NumericalError& e) {
          std::cerr << "cablemap fit-hyperbolas: cluster " << (k + 1)
                    << " discarded: " << e.what() << "\n";
        }
      }
      points = points.empty() ? points : normalize_points(std::move(points));
      save_points_csv(fit_out, points);
      if (!fit_report.empty()) save_fit_reports_json(fit_report, reports);
      std::cout << "fit-hyperbolas: " << points.size() << " of " << clusters.size()
                << " cluster(s) fitted\n";
    });
  }

  if (map_cmd->parsed()) {
    return guarded("map", [&] {
      const SurveyConfig config = resolve_config(map_opts);
      auto points = normalize_points(load_points_csv(map_in));
      auto traces = assign_points(points, config, config.angle_threshold_deg);
      traces = prune_short(std::move(traces), config.min_trace_points);
      CableMap map;
      for (const CableTrace& trace : traces) {
        if (trace.points.size() < 2) {
          std::cerr << "cablemap map: warning: cable " << trace.cable_id
                    << " has a single point; skipped\n";
          continue;
        }
        map.push_back(fit_cable(trace, config));
      }
      if (map.empty()) {
        std::cerr << "cablemap map: warning: no trace survived pruning; map is empty\n";
      }
      save_map_json(map_out, map);
      if (!map_csv.empty()) save_map_csv(map_csv, map);
      if (!map_traces.empty()) save_traces_json(map_traces, traces);
      if (!map_svg.empty()) {
        std::vector<double> lines = config.line_positions;
        if (lines.empty()) {
          std::set<double> distinct;
          for (const DetectedPoint& p : points) distinct.insert(p.x);
          lines.assign(distinct.begin(), distinct.end());
        }
        atomic_write_text(map_svg, render_map_svg(map, points, lines));
      }
      std::cout << "map: " << map.size() << " cable(s) written to " << map_out << "\n";
    });
  }

  if (ev->parsed()) {
    return guarded("evaluate", [&] {
      const SurveyConfig config = resolve_config(ev_opts);
      if (config.line_positions.empty()) {
        throw InputError("InvalidArgument: evaluate needs detection-line positions "
                         "(config line_positions or --line-spacing/--line-x0/--line-count)");
      }
      const CableMap map = load_map_json(ev_in);
      const auto truths = load_truth_json(ev_truth);
      const EvaluationSummary summary =
          evaluate_map(map, truths, config.line_positions, ev_random, ev_seed);
      std::cout << format_report_table(summary);
      if (!ev_out.empty()) save_eval_report_json(ev_out, summary);
    });
  }

  if (ren->parsed()) {
    return guarded("render", [&] {
      const CableMap map = load_map_json(ren_in);
      std::vector<DetectedPoint> points;
      if (!ren_points.empty()) points = load_points_csv(ren_points);
      std::vector<double> lines;
      if (!ren_opts.config_path.empty() || ren_opts.line_spacing || ren_opts.line_x0 ||
          ren_opts.line_count) {
        lines = resolve_config(ren_opts).line_positions;
      }
      if (lines.empty()) {
        std::set<double> distinct;
        for (const DetectedPoint& p : points) distinct.insert(p.x);
        lines.assign(distinct.begin(), distinct.end());
      }
      atomic_write_text(ren_out, render_map_svg(map, points, lines));
      std::cout << "render: wrote " << ren_out << "\n";
    });
  }

  return 0;
}
