#include "cablemap/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cablemap {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || t.empty()) {
    throw ParseError("ParseError: " + where + ": cannot parse number '" + t + "'");
  }
  return value;
}

long parse_int(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  long value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ParseError("ParseError: " + where + ": cannot parse integer '" + t + "'");
  }
  return value;
}

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    double parsed = 0.0;
    std::from_chars(buf, buf + std::strlen(buf), parsed);
    if (parsed == v) break;
  }
  return buf;
}

// Key-value file: one "key = value" per line, '#' starts a comment.
std::map<std::string, std::string> read_kv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("IoError: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("ParseError: " + path + " line " + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::vector<double> parse_double_list(const std::string& value, const std::string& where) {
  std::vector<double> out;
  for (const std::string& tok : split(value, ',')) {
    out.push_back(parse_double(tok, where));
  }
  return out;
}

json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    const int line =
        1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
    throw ParseError("ParseError: " + path + " line " + std::to_string(line) + ": " + e.what());
  }
}

json curve_to_json(const Curve& curve) {
  json j;
  if (curve.is_sinusoid()) {
    const SinusoidCurve& s = curve.sinusoid();
    j["kind"] = "sinusoid";
    j["mean"] = s.mean;
    j["amplitude"] = s.amplitude;
    j["period"] = s.period;
    j["phase"] = s.phase;
  } else {
    const PolylineCurve& p = curve.polyline();
    j["kind"] = "polyline";
    j["xs"] = std::vector<double>(p.xs.data(), p.xs.data() + p.xs.size());
    j["values"] = std::vector<double>(p.values.data(), p.values.data() + p.values.size());
  }
  return j;
}

Curve curve_from_json(const json& j, const std::string& where) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "sinusoid") {
    SinusoidCurve s;
    s.mean = j.at("mean").get<double>();
    s.amplitude = j.at("amplitude").get<double>();
    s.period = j.at("period").get<double>();
    s.phase = j.at("phase").get<double>();
    if (!(s.period > 0.0)) {
      throw ParseError("ParseError: " + where + ": sinusoid period must be > 0");
    }
    return Curve(s);
  }
  if (kind == "polyline") {
    const auto xs = j.at("xs").get<std::vector<double>>();
    const auto values = j.at("values").get<std::vector<double>>();
    if (xs.size() != values.size() || xs.size() < 2) {
      throw ParseError("ParseError: " + where + ": polyline xs/values mismatch");
    }
    PolylineCurve p;
    p.xs = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    p.values = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
    return Curve(p);
  }
  throw ParseError("ParseError: " + where + ": unknown curve kind '" + kind + "'");
}

}  // namespace

void atomic_write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("IoError: cannot open " + tmp + " for writing");
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("IoError: write to " + tmp + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ec2;
    std::filesystem::remove(tmp, ec2);
    throw IoError("IoError: cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("IoError: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<DetectedPoint> load_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("IoError: cannot open " + path);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) {
    throw ParseError("ParseError: " + path + " line 1: missing 'x,y,z' header");
  }
  ++line_no;
  {
    auto header = split(trim(line), ',');
    if (header.size() != 3 || trim(header[0]) != "x" || trim(header[1]) != "y" ||
        trim(header[2]) != "z") {
      throw ParseError("ParseError: " + path + " line 1: header must be 'x,y,z'");
    }
  }
  std::vector<DetectedPoint> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    const std::string where = path + " line " + std::to_string(line_no);
    if (fields.size() != 3) {
      throw ParseError("ParseError: " + where + ": expected 3 comma-separated values");
    }
    DetectedPoint p;
    p.x = parse_double(fields[0], where);
    p.y = parse_double(fields[1], where);
    p.z = parse_double(fields[2], where);
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw NonFiniteValue("NonFiniteValue: " + where);
    }
    out.push_back(p);
  }
  return out;
}

void save_points_csv(const std::string& path, const std::vector<DetectedPoint>& points) {
  std::string text = "x,y,z\n";
  for (const DetectedPoint& p : points) {
    text += format_double(p.x);
    text += ',';
    text += format_double(p.y);
    text += ',';
    text += format_double(p.z);
    text += '\n';
  }
  atomic_write_text(path, text);
}

namespace {

void apply_line_keys(const std::map<std::string, std::string>& kv,
                     const std::string& path, std::vector<double>* line_positions) {
  const auto has = [&](const char* key) { return kv.count(key) != 0; };
  if (has("line_positions")) {
    *line_positions = parse_double_list(kv.at("line_positions"), path + " line_positions");
    return;
  }
  if (has("line_x0") || has("line_spacing") || has("line_count")) {
    const double x0 = has("line_x0") ? parse_double(kv.at("line_x0"), path) : 0.0;
    const double spacing =
        has("line_spacing") ? parse_double(kv.at("line_spacing"), path) : 2.0;
    const long count = has("line_count") ? parse_int(kv.at("line_count"), path) : 11;
    if (!(spacing > 0.0) || count < 2) {
      throw ParseError("ParseError: " + path + ": line_spacing must be > 0 and line_count >= 2");
    }
    line_positions->clear();
    for (long i = 0; i < count; ++i) {
      line_positions->push_back(x0 + spacing * static_cast<double>(i));
    }
  }
}

}  // namespace

SurveyConfig load_survey_config(const std::string& path) {
  const auto kv = read_kv(path);
  static const char* kKnown[] = {
      "line_positions", "line_x0",  "line_spacing", "line_count",
      "wave_speed_v",   "beta",     "beta_y",       "beta_z",
      "theta_y",        "theta_z",  "min_trace_points", "sample_step",
      "angle_threshold_deg"};
  for (const auto& [key, value] : kv) {
    (void)value;
    if (std::find_if(std::begin(kKnown), std::end(kKnown),
                     [&](const char* k) { return key == k; }) == std::end(kKnown)) {
      throw ParseError("ParseError: " + path + ": unknown config key '" + key + "'");
    }
  }

  SurveyConfig config;
  apply_line_keys(kv, path, &config.line_positions);
  const auto set_double = [&](const char* key, double* field) {
    if (kv.count(key)) *field = parse_double(kv.at(key), path + std::string(" ") + key);
  };
  set_double("wave_speed_v", &config.wave_speed_v);
  set_double("beta", &config.beta);
  set_double("theta_y", &config.theta_y);
  set_double("theta_z", &config.theta_z);
  set_double("sample_step", &config.sample_step);
  set_double("angle_threshold_deg", &config.angle_threshold_deg);
  if (kv.count("beta_y")) config.beta_y = parse_double(kv.at("beta_y"), path + " beta_y");
  if (kv.count("beta_z")) config.beta_z = parse_double(kv.at("beta_z"), path + " beta_z");
  if (kv.count("min_trace_points")) {
    config.min_trace_points = static_cast<int>(parse_int(kv.at("min_trace_points"), path));
  }
  config.validate();
  return config;
}

std::string format_survey_config(const SurveyConfig& config) {
  std::ostringstream out;
  if (!config.line_positions.empty()) {
    out << "line_positions = ";
    for (std::size_t i = 0; i < config.line_positions.size(); ++i) {
      if (i) out << ",";
      out << format_double(config.line_positions[i]);
    }
    out << "\n";
  }
  out << "wave_speed_v = " << format_double(config.wave_speed_v) << "\n";
  out << "beta = " << format_double(config.beta) << "\n";
  if (config.beta_y) out << "beta_y = " << format_double(*config.beta_y) << "\n";
  if (config.beta_z) out << "beta_z = " << format_double(*config.beta_z) << "\n";
  out << "theta_y = " << format_double(config.theta_y) << "\n";
  out << "theta_z = " << format_double(config.theta_z) << "\n";
  out << "min_trace_points = " << config.min_trace_points << "\n";
  out << "sample_step = " << format_double(config.sample_step) << "\n";
  out << "angle_threshold_deg = " << format_double(config.angle_threshold_deg) << "\n";
  return out.str();
}

Scenario load_scenario(const std::string& path) {
  const auto kv = read_kv(path);
  Scenario sc;
  apply_line_keys(kv, path, &sc.line_positions);
  if (sc.line_positions.empty()) {
    for (int i = 0; i < 11; ++i) sc.line_positions.push_back(2.0 * i);
  }
  if (kv.count("noise_y_sd")) sc.noise_y_sd = parse_double(kv.at("noise_y_sd"), path);
  if (kv.count("noise_z_sd")) sc.noise_z_sd = parse_double(kv.at("noise_z_sd"), path);
  if (kv.count("seed")) sc.seed = static_cast<std::uint64_t>(parse_int(kv.at("seed"), path));
  if (kv.count("noise_family")) {
    const std::string family = kv.at("noise_family");
    if (family == "gaussian") {
      sc.noise_family = NoiseFamily::kGaussian;
    } else if (family == "laplace") {
      sc.noise_family = NoiseFamily::kLaplace;
    } else {
      throw ParseError("ParseError: " + path + ": noise_family must be gaussian or laplace");
    }
  }
  if (!(sc.noise_y_sd >= 0.0) || !(sc.noise_z_sd >= 0.0)) {
    throw ParseError("ParseError: " + path + ": noise sds must be >= 0");
  }

  long n_cables = 1;
  if (kv.count("cables")) n_cables = parse_int(kv.at("cables"), path);
  if (n_cables < 1) throw ParseError("ParseError: " + path + ": cables must be >= 1");

  const double x_lo = sc.line_positions.front();
  const double x_hi = sc.line_positions.back();
  for (long k = 1; k <= n_cables; ++k) {
    const std::string prefix = "cable" + std::to_string(k) + ".";
    const auto get = [&](const std::string& key, double fallback) {
      const auto it = kv.find(prefix + key);
      return it == kv.end() ? fallback : parse_double(it->second, path + " " + prefix + key);
    };
    TruthCable cable;
    cable.x_min = get("x_min", x_lo);
    cable.x_max = get("x_max", x_hi);
    SinusoidCurve y{get("y_mean", 5.0), get("y_amplitude", 0.5), get("y_period", 12.0),
                    get("y_phase", 0.0)};
    SinusoidCurve z{get("z_mean", 0.5), get("z_amplitude", 0.05), get("z_period", 9.0),
                    get("z_phase", 0.0)};
    if (!(y.period > 0.0) || !(z.period > 0.0)) {
      throw ParseError("ParseError: " + path + ": periods must be > 0");
    }
    if (z.mean - std::abs(z.amplitude) < 0.0) {
      throw ParseError("ParseError: " + path + ": cable depth must stay >= 0");
    }
    cable.y_curve = Curve(y);
    cable.z_curve = Curve(z);
    sc.cables.push_back(std::move(cable));
  }

  // Reject stray cableN.* keys beyond the declared count and typos.
  for (const auto& [key, value] : kv) {
    (void)value;
    if (key.rfind("cable", 0) != 0 || key == "cables") continue;
    const std::size_t dot = key.find('.');
    if (dot == std::string::npos) {
      throw ParseError("ParseError: " + path + ": unknown key '" + key + "'");
    }
    const long idx = parse_int(key.substr(5, dot - 5), path + " " + key);
    if (idx < 1 || idx > n_cables) {
      throw ParseError("ParseError: " + path + ": key '" + key +
                       "' references an undeclared cable");
    }
  }
  return sc;
}

void save_clusters_json(const std::string& path, const std::vector<PointCluster>& clusters) {
  json doc = json::array();
  for (const PointCluster& cluster : clusters) {
    json samples = json::array();
    for (Eigen::Index i = 0; i < cluster.samples.rows(); ++i) {
      samples.push_back({cluster.samples(i, 0), cluster.samples(i, 1)});
    }
    doc.push_back({{"line_x", cluster.source_line_x}, {"samples", std::move(samples)}});
  }
  atomic_write_text(path, doc.dump(2) + "\n");
}

BScanGrid load_bscan_grid(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw IoError("IoError: cannot open " + csv_path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = csv_path + " line " + std::to_string(line_no);
    std::vector<double> row;
    for (const std::string& tok : split(line, ',')) row.push_back(parse_double(tok, where));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ParseError: " + where + ": ragged row");
    }
    rows.push_back(std::move(row));
  }

  const auto kv = read_kv(csv_path + ".meta");
  if (!kv.count("dt") || !kv.count("dy")) {
    throw ParseError("ParseError: " + csv_path + ".meta: needs dt and dy keys");
  }
  BScanGrid grid;
  grid.dt = parse_double(kv.at("dt"), csv_path + ".meta dt");
  grid.dy = parse_double(kv.at("dy"), csv_path + ".meta dy");
  if (kv.count("line_x")) grid.line_x = parse_double(kv.at("line_x"), csv_path + ".meta line_x");
  grid.amplitude.resize(static_cast<Eigen::Index>(rows.size()),
                        rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      grid.amplitude(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  grid.validate();
  return grid;
}

void save_bscan_grid(const std::string& csv_path, const BScanGrid& grid) {
  std::string text;
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      if (c) text += ',';
      text += format_double(grid.amplitude(r, c));
    }
    text += '\n';
  }
  atomic_write_text(csv_path, text);
  std::string meta = "dt = " + format_double(grid.dt) + "\ndy = " + format_double(grid.dy) +
                     "\nline_x = " + format_double(grid.line_x) + "\n";
  atomic_write_text(csv_path + ".meta", meta);
}

void save_traces_json(const std::string& path, const std::vector<CableTrace>& traces) {
  json doc = json::array();
  for (const CableTrace& trace : traces) {
    json points = json::array();
    for (const DetectedPoint& p : trace.points) points.push_back({p.x, p.y, p.z});
    doc.push_back({{"cable_id", trace.cable_id}, {"points", std::move(points)}});
  }
  atomic_write_text(path, doc.dump(2) + "\n");
}

std::vector<CableTrace> load_traces_json(const std::string& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_array()) throw ParseError("ParseError: " + path + ": expected a JSON array");
  std::vector<CableTrace> out;
  try {
    for (const auto& obj : doc) {
      CableTrace trace;
      trace.cable_id = obj.at("cable_id").get<int>();
      for (const auto& p : obj.at("points")) {
        if (!p.is_array() || p.size() != 3) {
          throw ParseError("ParseError: " + path + ": trace points must be [x,y,z]");
        }
        trace.points.push_back(
            DetectedPoint{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
      }
      out.push_back(std::move(trace));
    }
  } catch (const json::exception& e) {
    throw ParseError("ParseError: " + path + ": " + e.what());
  }
  return out;
}

void save_map_json(const std::string& path, const CableMap& map) {
  json doc = json::array();
  for (const CableRecord& record : map) {
    json samples = json::array();
    for (const MapSample& s : record.samples) {
      samples.push_back(
          {{"x", s.x}, {"y", s.y}, {"z", s.z}, {"hw_y", s.hw_y}, {"hw_z", s.hw_z}});
    }
    doc.push_back({{"cable_id", record.cable_id}, {"samples", std::move(samples)}});
  }
  atomic_write_text(path, doc.dump(2) + "\n");
}

CableMap load_map_json(const std::string& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_array()) throw ParseError("ParseError: " + path + ": expected a JSON array");
  CableMap map;
  try {
    for (const auto& obj : doc) {
      CableRecord record;
      record.cable_id = obj.at("cable_id").get<int>();
      for (const auto& s : obj.at("samples")) {
        MapSample sample;
        sample.x = s.at("x").get<double>();
        sample.y = s.at("y").get<double>();
        sample.z = s.at("z").get<double>();
        sample.hw_y = s.at("hw_y").get<double>();
        sample.hw_z = s.at("hw_z").get<double>();
        record.samples.push_back(sample);
      }
      map.push_back(std::move(record));
    }
  } catch (const json::exception& e) {
    throw ParseError("ParseError: " + path + ": " + e.what());
  }
  return map;
}

void save_map_csv(const std::string& path, const CableMap& map) {
  std::string text = "cable_id,x,y,z,hw_y,hw_z\n";
  for (const CableRecord& record : map) {
    for (const MapSample& s : record.samples) {
      text += std::to_string(record.cable_id);
      for (double v : {s.x, s.y, s.z, s.hw_y, s.hw_z}) {
        text += ',';
        text += format_double(v);
      }
      text += '\n';
    }
  }
  atomic_write_text(path, text);
}

void save_truth_json(const std::string& path, const std::vector<TruthCable>& truths) {
  json doc = json::array();
  for (const TruthCable& truth : truths) {
    doc.push_back({{"x_min", truth.x_min},
                   {"x_max", truth.x_max},
                   {"y", curve_to_json(truth.y_curve)},
                   {"z", curve_to_json(truth.z_curve)}});
  }
  atomic_write_text(path, doc.dump(2) + "\n");
}

std::vector<TruthCable> load_truth_json(const std::string& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_array()) throw ParseError("ParseError: " + path + ": expected a JSON array");
  std::vector<TruthCable> out;
  try {
    for (const auto& obj : doc) {
      TruthCable truth;
      truth.x_min = obj.at("x_min").get<double>();
      truth.x_max = obj.at("x_max").get<double>();
      truth.y_curve = curve_from_json(obj.at("y"), path);
      truth.z_curve = curve_from_json(obj.at("z"), path);
      out.push_back(std::move(truth));
    }
  } catch (const json::exception& e) {
    throw ParseError("ParseError: " + path + ": " + e.what());
  }
  return out;
}

void save_fit_reports_json(const std::string& path,
                           const std::vector<std::pair<double, FitReport>>& reports) {
  json doc = json::array();
  for (const auto& [line_x, report] : reports) {
    doc.push_back({{"line_x", line_x},
                   {"A", report.params.A},
                   {"B", report.params.B},
                   {"C", report.params.C},
                   {"iterations", report.iterations},
                   {"rms", report.rms_orthogonal_distance},
                   {"converged", report.converged},
                   {"scale_factor", report.scale_factor}});
  }
  atomic_write_text(path, doc.dump(2) + "\n");
}

namespace {

json error_report_to_json(const ErrorReport& r) {
  return {{"avg_depth_error", r.avg_depth_error},
          {"avg_position_error", r.avg_position_error},
          {"coverage_rate", r.coverage_rate},
          {"n_eval_points", r.n_eval_points}};
}

}  // namespace

void save_eval_report_json(const std::string& path, const EvaluationSummary& summary) {
  json cables = json::array();
  for (const CableEvaluation& ce : summary.cables) {
    cables.push_back({{"cable_id", ce.cable_id},
                      {"truth_index", ce.truth_index},
                      {"detection_line", error_report_to_json(ce.detection_line)},
                      {"random_points", error_report_to_json(ce.random_points)},
                      {"altogether", error_report_to_json(ce.altogether)}});
  }
  const json doc = {{"cables", std::move(cables)},
                    {"overall", error_report_to_json(summary.overall)}};
  atomic_write_text(path, doc.dump(2) + "\n");
}

}  // namespace cablemap
