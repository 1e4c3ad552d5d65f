#include "cablemap/cluster_extract.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace cablemap {

void BScanGrid::validate() const {
  if (rows() < 2 || cols() < 2) {
    throw InvalidGrid("InvalidGrid: need at least 2 rows and 2 columns");
  }
  if (!(dt > 0.0)) throw InvalidGrid("InvalidGrid: dt must be > 0");
  if (!(dy > 0.0)) throw InvalidGrid("InvalidGrid: dy must be > 0");
  if (!amplitude.allFinite()) {
    throw InvalidGrid("InvalidGrid: amplitude contains NaN/inf");
  }
}

namespace {

struct Cell {
  int r;
  int c;
};

}  // namespace

std::vector<PointCluster> extract_clusters(const BScanGrid& grid, double threshold,
                                           int min_cluster_size, bool eight_connectivity) {
  grid.validate();
  if (min_cluster_size < kMinClusterSamples) {
    throw InputError("InvalidArgument: min_cluster_size must be >= 5");
  }

  const int rows = static_cast<int>(grid.rows());
  const int cols = static_cast<int>(grid.cols());
  const auto above = [&](int r, int c) {
    return std::abs(grid.amplitude(r, c)) >= threshold;
  };

  std::vector<std::int8_t> visited(static_cast<std::size_t>(rows) * cols, 0);
  const auto idx = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };

  static constexpr int kDr4[] = {-1, 1, 0, 0};
  static constexpr int kDc4[] = {0, 0, -1, 1};
  static constexpr int kDr8[] = {-1, 1, 0, 0, -1, -1, 1, 1};
  static constexpr int kDc8[] = {0, 0, -1, 1, -1, 1, -1, 1};
  const int n_dirs = eight_connectivity ? 8 : 4;
  const int* dr = eight_connectivity ? kDr8 : kDr4;
  const int* dc = eight_connectivity ? kDc8 : kDc4;

  std::vector<PointCluster> out;
  std::vector<Cell> stack;
  std::vector<Cell> component;

  for (int r0 = 0; r0 < rows; ++r0) {
    for (int c0 = 0; c0 < cols; ++c0) {
      if (visited[idx(r0, c0)] || !above(r0, c0)) continue;

      component.clear();
      stack.assign(1, {r0, c0});
      visited[idx(r0, c0)] = 1;
      while (!stack.empty()) {
        Cell cell = stack.back();
        stack.pop_back();
        component.push_back(cell);
        for (int k = 0; k < n_dirs; ++k) {
          int r = cell.r + dr[k];
          int c = cell.c + dc[k];
          if (r < 0 || r >= rows || c < 0 || c >= cols) continue;
          if (visited[idx(r, c)] || !above(r, c)) continue;
          visited[idx(r, c)] = 1;
          stack.push_back({r, c});
        }
      }

      if (static_cast<int>(component.size()) < min_cluster_size) continue;

      // Downward-opening check: the top (minimum-t) cells must not touch the
      // component's lateral boundary.
      int min_r = component[0].r;
      int min_c = component[0].c, max_c = component[0].c;
      for (const Cell& cell : component) {
        min_r = std::min(min_r, cell.r);
        min_c = std::min(min_c, cell.c);
        max_c = std::max(max_c, cell.c);
      }
      bool apex_interior = true;
      for (const Cell& cell : component) {
        if (cell.r == min_r && (cell.c <= min_c || cell.c >= max_c)) {
          apex_interior = false;
          break;
        }
      }
      if (!apex_interior) continue;

      std::sort(component.begin(), component.end(), [](const Cell& a, const Cell& b) {
        return a.c != b.c ? a.c < b.c : a.r < b.r;
      });
      PointCluster cluster;
      cluster.source_line_x = grid.line_x;
      cluster.samples.resize(static_cast<Eigen::Index>(component.size()), 2);
      for (Eigen::Index i = 0; i < cluster.samples.rows(); ++i) {
        cluster.samples(i, 0) = (component[static_cast<std::size_t>(i)].c + 0.5) * grid.dy;
        cluster.samples(i, 1) = (component[static_cast<std::size_t>(i)].r + 0.5) * grid.dt;
      }
      out.push_back(std::move(cluster));
    }
  }
  return out;
}

namespace {

// Line number of a byte offset, for parse diagnostics.
int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

}  // namespace

std::vector<PointCluster> load_clusters(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("IoError: cannot open cluster file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("ParseError: " + path + " line " +
                     std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_array()) {
    throw ParseError("ParseError: " + path + ": expected a JSON array of clusters");
  }

  std::vector<PointCluster> out;
  out.reserve(doc.size());
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const auto& obj = doc[k];
    const std::string label = "cluster " + std::to_string(k + 1);
    if (!obj.is_object() || !obj.contains("line_x") || !obj.contains("samples") ||
        !obj.at("line_x").is_number()) {
      throw ParseError("ParseError: " + path + ": " + label +
                       " must be {\"line_x\": number, \"samples\": [[y,t],...]}");
    }
    PointCluster cluster;
    cluster.source_line_x = obj.at("line_x").get<double>();
    const auto& samples = obj.at("samples");
    if (!samples.is_array()) {
      throw ParseError("ParseError: " + path + ": " + label + " samples must be an array");
    }
    if (static_cast<int>(samples.size()) < kMinClusterSamples) {
      throw TooFewSamples("TooFewSamples: " + label + " in " + path + " has " +
                          std::to_string(samples.size()) + " samples, need >= " +
                          std::to_string(kMinClusterSamples));
    }
    cluster.samples.resize(static_cast<Eigen::Index>(samples.size()), 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& pair = samples[i];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number()) {
        throw ParseError("ParseError: " + path + ": " + label + " sample " +
                         std::to_string(i + 1) + " must be [y, t]");
      }
      const double y = pair[0].get<double>();
      const double t = pair[1].get<double>();
      if (!std::isfinite(y) || !std::isfinite(t)) {
        throw NonFiniteValue("NonFiniteValue: " + label + " sample " + std::to_string(i + 1));
      }
      if (!(t > 0.0)) {
        throw InputError("InvalidCluster: " + label + " sample " + std::to_string(i + 1) +
                         " has non-positive travel time");
      }
      cluster.samples(static_cast<Eigen::Index>(i), 0) = y;
      cluster.samples(static_cast<Eigen::Index>(i), 1) = t;
    }
    out.push_back(std::move(cluster));
  }
  return out;
}

}  // namespace cablemap
