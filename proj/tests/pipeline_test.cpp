#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cablemap/cable_assign.hpp"
#include "cablemap/gp_regression.hpp"
#include "cablemap/io.hpp"
#include "cablemap/pipeline.hpp"

using namespace cablemap;

namespace {

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "cablemap_pipeline_test";
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

const char* kScenario =
    "line_x0 = 0\n"
    "line_spacing = 2\n"
    "line_count = 11\n"
    "noise_y_sd = 0.1\n"
    "noise_z_sd = 0.05\n"
    "seed = 7\n"
    "cables = 1\n"
    "cable1.y_mean = 5\n"
    "cable1.y_amplitude = 0.5\n"
    "cable1.y_period = 12\n"
    "cable1.z_mean = 0.5\n"
    "cable1.z_amplitude = 0.05\n"
    "cable1.z_period = 9\n";

}  // namespace

TEST_CASE("scenario run produces a one-cable map spanning the line range") {
  const auto dir = temp_dir();
  const std::string scenario = (dir / "scenario.conf").string();
  write_file(scenario, kScenario);

  PipelineRun run;
  run.scenario_path = scenario;
  run.map_out = (dir / "map.json").string();
  run.report_out = (dir / "report.json").string();
  run.truth_out = (dir / "truth.json").string();
  run.points_out = (dir / "points.csv").string();
  run.svg_out = (dir / "map.svg").string();

  const RunResult result = run_pipeline(run);
  REQUIRE(result.map.size() == 1);
  CHECK(result.map[0].samples.front().x == doctest::Approx(0.0));
  CHECK(result.map[0].samples.back().x == doctest::Approx(20.0));

  const CableMap reloaded = load_map_json(run.map_out);
  REQUIRE(reloaded.size() == 1);
  CHECK(reloaded[0].samples.size() == result.map[0].samples.size());
  CHECK(std::filesystem::exists(run.report_out));
  CHECK(std::filesystem::exists(run.truth_out));
  CHECK(std::filesystem::exists(run.svg_out));
  CHECK(!std::filesystem::exists(run.map_out + ".tmp"));
}

TEST_CASE("identical seeds give byte-identical artifacts") {
  const auto dir = temp_dir();
  const std::string scenario = (dir / "scenario_det.conf").string();
  write_file(scenario, kScenario);

  const auto run_once = [&](const std::string& tag) {
    PipelineRun run;
    run.scenario_path = scenario;
    run.map_out = (dir / ("map_" + tag + ".json")).string();
    run.report_out = (dir / ("report_" + tag + ".json")).string();
    run.seed = 99;
    run_pipeline(run);
    return std::make_pair(read_text_file(run.map_out), read_text_file(run.report_out));
  };
  const auto a = run_once("a");
  const auto b = run_once("b");
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);

  PipelineRun other;
  other.scenario_path = scenario;
  other.map_out = (dir / "map_c.json").string();
  other.seed = 100;
  run_pipeline(other);
  CHECK(read_text_file(other.map_out) != a.first);
}

TEST_CASE("the pipeline adds no numerical transformation over the library") {
  const auto dir = temp_dir();
  const std::string scenario = (dir / "scenario_eq.conf").string();
  write_file(scenario, kScenario);

  PipelineRun run;
  run.scenario_path = scenario;
  run.map_out = (dir / "map_eq.json").string();
  const RunResult result = run_pipeline(run);

  const Scenario sc = load_scenario(scenario);
  SurveyConfig config;
  config.line_positions = sc.line_positions;
  auto points = sample_detections(sc.cables[0], config, sc.noise_y_sd, sc.noise_z_sd,
                                  sc.seed * 1000003ULL);
  points = normalize_points(points);
  auto traces = prune_short(assign_points(points, config, config.angle_threshold_deg),
                            config.min_trace_points);
  REQUIRE(traces.size() == 1);
  const CableRecord direct = fit_cable(traces[0], config);

  REQUIRE(result.map.size() == 1);
  REQUIRE(result.map[0].samples.size() == direct.samples.size());
  for (std::size_t i = 0; i < direct.samples.size(); ++i) {
    CHECK(result.map[0].samples[i].y == direct.samples[i].y);  // bit-identical
    CHECK(result.map[0].samples[i].z == direct.samples[i].z);
    CHECK(result.map[0].samples[i].hw_y == direct.samples[i].hw_y);
  }
}

TEST_CASE("single-line input prunes to an empty map with a warning") {
  const auto dir = temp_dir();
  const std::string points = (dir / "single_line.csv").string();
  write_file(points, "x,y,z\n0,1,0.5\n0,4,0.6\n");

  PipelineRun run;
  run.points_path = points;
  run.map_out = (dir / "map_single.json").string();
  run.config.min_trace_points = 3;

  const RunResult result = run_pipeline(run);
  CHECK(result.map.empty());
  REQUIRE(!result.warnings.empty());
  CHECK(result.warnings[0].find("pruning") != std::string::npos);
  CHECK(read_text_file(run.map_out).find("[]") != std::string::npos);
}

TEST_CASE("malformed CSV surfaces a ParseError with its line") {
  const auto dir = temp_dir();
  const std::string points = (dir / "bad.csv").string();
  write_file(points, "x,y,z\n0,1,0.5\n0,oops,0.6\n");

  PipelineRun run;
  run.points_path = points;
  run.map_out = (dir / "map_bad.json").string();
  try {
    run_pipeline(run);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(exit_code_for(e) == 2);
  }
  CHECK(!std::filesystem::exists(run.map_out));  // no partial output
}

TEST_CASE("exactly one input mode is enforced") {
  PipelineRun run;
  run.map_out = "unused.json";
  CHECK_THROWS_AS(run_pipeline(run), InputError);
  run.points_path = "a.csv";
  run.scenario_path = "b.conf";
  CHECK_THROWS_AS(run_pipeline(run), InputError);
}

TEST_CASE("exit codes follow the error family") {
  CHECK(exit_code_for(ParseError("x")) == 2);
  CHECK(exit_code_for(EmptyInput("x")) == 2);
  CHECK(exit_code_for(SingularKernel("x")) == 3);
  CHECK(exit_code_for(DegenerateCluster("x")) == 3);
  CHECK(exit_code_for(IoError("x")) == 4);
}

TEST_CASE("unwritable output raises IoError and leaves no temp file") {
  const auto dir = temp_dir();
  const std::string points = (dir / "ok.csv").string();
  write_file(points, "x,y,z\n0,1,0.5\n2,1,0.5\n4,1,0.5\n");

  PipelineRun run;
  run.points_path = points;
  run.map_out = (dir / "no_such_dir" / "map.json").string();
  CHECK_THROWS_AS(run_pipeline(run), IoError);
}

TEST_CASE("cluster-mode run fits hyperbolas before mapping") {
  const auto dir = temp_dir();
  const std::string clusters_path = (dir / "clusters.json").string();

  // Three lines, one synthetic cluster each (depth 0.5 m at v = 0.1 m/ns),
  // plus one flat junk cluster that must be discarded with a warning.
  std::string doc = "[";
  for (int line = 0; line < 3; ++line) {
    if (line) doc += ",";
    doc += "{\"line_x\": " + std::to_string(2.0 * line) + ", \"samples\": [";
    for (int i = 0; i < 41; ++i) {
      const double phi = -1.0 + 2.0 * i / 40.0;
      const double y = 0.5 * std::sinh(phi) + 3.0;
      const double t = 10.0 * std::cosh(phi);
      if (i) doc += ",";
      doc += "[" + std::to_string(y) + "," + std::to_string(t) + "]";
    }
    doc += "]}";
  }
  doc += ",{\"line_x\": 4, \"samples\": [[0,5],[1,5],[2,5],[3,5],[4,5]]}]";
  write_file(clusters_path, doc);

  PipelineRun run;
  run.clusters_path = clusters_path;
  run.map_out = (dir / "map_clusters.json").string();
  run.config.wave_speed_v = 0.1;
  run.config.min_trace_points = 3;

  const RunResult result = run_pipeline(run);
  REQUIRE(result.map.size() == 1);
  REQUIRE(!result.warnings.empty());
  CHECK(result.warnings[0].find("discarded") != std::string::npos);
  for (const MapSample& s : result.map[0].samples) {
    CHECK(s.y == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(s.z == doctest::Approx(0.5).epsilon(1e-6));
  }
}
