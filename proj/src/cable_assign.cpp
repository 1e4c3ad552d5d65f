#include "cablemap/cable_assign.hpp"

#include <algorithm>
#include <cmath>

namespace cablemap {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct OpenTrace {
  int id;
  DetectedPoint last;
  Vector3 direction;  // unit vector of the last segment (+X for a fresh trace)
  std::vector<DetectedPoint> points;
};

struct Candidate {
  double cosine;
  std::size_t trace;  // index into open traces
  std::size_t point;  // index into the current line's points
};

}  // namespace

std::vector<CableTrace> assign_points(const std::vector<DetectedPoint>& points,
                                      const SurveyConfig& config,
                                      double angle_threshold_deg) {
  (void)config;  // the +X prior makes the virtual-predecessor spacing cancel out
  if (!(angle_threshold_deg > 0.0 && angle_threshold_deg <= 90.0)) {
    throw InputError("InvalidArgument: angle_threshold_deg must be in (0, 90]");
  }
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i].x > points[i + 1].x) {
      throw InputError("InvalidArgument: points must be normalized (x-sorted)");
    }
  }
  const double cos_min = std::cos(angle_threshold_deg * kPi / 180.0);

  std::vector<OpenTrace> open;
  int next_id = 1;

  std::size_t begin = 0;
  while (begin < points.size()) {
    std::size_t end = begin;
    while (end < points.size() && points[end].x == points[begin].x) ++end;
    const std::size_t line_size = end - begin;

    // Rank every admissible (trace, point) pair of this line by cosine.
    // Ties break on trace id and point coordinates, never on input order,
    // so permuting same-line points cannot change the outcome.
    std::vector<Candidate> candidates;
    for (std::size_t k = 0; k < open.size(); ++k) {
      for (std::size_t j = 0; j < line_size; ++j) {
        const DetectedPoint& p = points[begin + j];
        Vector3 ext(p.x - open[k].last.x, p.y - open[k].last.y, p.z - open[k].last.z);
        const double norm = ext.norm();
        if (!(norm > 0.0)) continue;
        const double cosine = ext.dot(open[k].direction) / norm;
        if (cosine >= cos_min - 1e-12) candidates.push_back({cosine, k, j});
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](const Candidate& a, const Candidate& b) {
                if (a.cosine != b.cosine) return a.cosine > b.cosine;
                if (open[a.trace].id != open[b.trace].id) {
                  return open[a.trace].id < open[b.trace].id;
                }
                const DetectedPoint& pa = points[begin + a.point];
                const DetectedPoint& pb = points[begin + b.point];
                if (pa.y != pb.y) return pa.y < pb.y;
                return pa.z < pb.z;
              });

    std::vector<char> trace_used(open.size(), 0);
    std::vector<char> point_used(line_size, 0);
    for (const Candidate& c : candidates) {
      if (trace_used[c.trace] || point_used[c.point]) continue;
      trace_used[c.trace] = 1;
      point_used[c.point] = 1;
      const DetectedPoint& p = points[begin + c.point];
      OpenTrace& trace = open[c.trace];
      Vector3 ext(p.x - trace.last.x, p.y - trace.last.y, p.z - trace.last.z);
      trace.direction = ext.normalized();
      trace.last = p;
      trace.points.push_back(p);
    }

    // Leftover points seed new traces; take them in coordinate order so ids
    // do not depend on input order either.
    std::vector<std::size_t> leftover;
    for (std::size_t j = 0; j < line_size; ++j) {
      if (!point_used[j]) leftover.push_back(j);
    }
    std::sort(leftover.begin(), leftover.end(), [&](std::size_t a, std::size_t b) {
      const DetectedPoint& pa = points[begin + a];
      const DetectedPoint& pb = points[begin + b];
      if (pa.y != pb.y) return pa.y < pb.y;
      return pa.z < pb.z;
    });
    for (std::size_t j : leftover) {
      const DetectedPoint& p = points[begin + j];
      OpenTrace trace;
      trace.id = next_id++;
      trace.last = p;
      trace.direction = Vector3(1.0, 0.0, 0.0);
      trace.points.push_back(p);
      open.push_back(std::move(trace));
    }

    begin = end;
  }

  std::vector<CableTrace> out;
  out.reserve(open.size());
  for (OpenTrace& trace : open) {
    out.push_back(CableTrace{trace.id, std::move(trace.points)});
  }
  return out;
}

std::vector<CableTrace> prune_short(std::vector<CableTrace> traces, int min_trace_points) {
  if (min_trace_points < 1) {
    throw InputError("InvalidArgument: min_trace_points must be >= 1");
  }
  std::vector<CableTrace> out;
  out.reserve(traces.size());
  int id = 1;
  for (CableTrace& trace : traces) {
    if (static_cast<int>(trace.points.size()) >= min_trace_points) {
      trace.cable_id = id++;
      out.push_back(std::move(trace));
    }
  }
  return out;
}

}  // namespace cablemap
