#include "cablemap/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cablemap {

double average_error(const std::vector<double>& calculated,
                     const std::vector<double>& measured) {
  if (calculated.size() != measured.size()) {
    throw LengthMismatch("LengthMismatch: calculated has " +
                         std::to_string(calculated.size()) + " values, measured " +
                         std::to_string(measured.size()));
  }
  if (calculated.empty()) {
    throw EmptyInput("EmptyInput: average_error needs at least one pair");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < calculated.size(); ++i) {
    sum += std::abs(calculated[i] - measured[i]);
  }
  return sum / static_cast<double>(calculated.size());
}

namespace {

// Linear interpolation of a map record at x; throws OutOfRange outside the
// sample span.
MapSample interpolate_record(const CableRecord& record, double x) {
  if (record.samples.empty()) {
    throw OutOfRange("OutOfRange: map record has no samples");
  }
  const double x_first = record.samples.front().x;
  const double x_last = record.samples.back().x;
  if (x < x_first - 1e-9 || x > x_last + 1e-9) {
    throw OutOfRange("OutOfRange: x = " + std::to_string(x) + " outside map span [" +
                     std::to_string(x_first) + ", " + std::to_string(x_last) + "]");
  }
  const auto it = std::lower_bound(
      record.samples.begin(), record.samples.end(), x,
      [](const MapSample& s, double value) { return s.x < value; });
  if (it == record.samples.begin()) return record.samples.front();
  if (it == record.samples.end()) return record.samples.back();
  const MapSample& hi = *it;
  const MapSample& lo = *(it - 1);
  const double w = (x - lo.x) / (hi.x - lo.x);
  MapSample out;
  out.x = x;
  out.y = lo.y * (1.0 - w) + hi.y * w;
  out.z = lo.z * (1.0 - w) + hi.z * w;
  out.hw_y = lo.hw_y * (1.0 - w) + hi.hw_y * w;
  out.hw_z = lo.hw_z * (1.0 - w) + hi.hw_z * w;
  return out;
}

}  // namespace

double coverage_rate(const CableRecord& record, const TruthCable& truth,
                     const std::vector<double>& eval_xs) {
  if (eval_xs.empty()) {
    throw EmptyInput("EmptyInput: coverage_rate needs at least one eval point");
  }
  int inside = 0;
  for (double x : eval_xs) {
    const MapSample s = interpolate_record(record, x);
    const bool ok_y = std::abs(truth.y_curve(x) - s.y) <= s.hw_y;
    const bool ok_z = std::abs(truth.z_curve(x) - s.z) <= s.hw_z;
    if (ok_y && ok_z) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(eval_xs.size());
}

std::pair<double, double> baseline_linear(const CableTrace& trace, double x_star) {
  const auto& pts = trace.points;
  if (pts.empty()) throw TooFewPoints("TooFewPoints: empty trace");
  if (x_star < pts.front().x - 1e-9 || x_star > pts.back().x + 1e-9) {
    throw OutOfRange("OutOfRange: x outside trace span");
  }
  const auto it = std::lower_bound(
      pts.begin(), pts.end(), x_star,
      [](const DetectedPoint& p, double value) { return p.x < value; });
  if (it == pts.begin()) return {pts.front().y, pts.front().z};
  if (it == pts.end()) return {pts.back().y, pts.back().z};
  const DetectedPoint& hi = *it;
  const DetectedPoint& lo = *(it - 1);
  const double w = (x_star - lo.x) / (hi.x - lo.x);
  return {lo.y * (1.0 - w) + hi.y * w, lo.z * (1.0 - w) + hi.z * w};
}

NaturalCubicSpline::NaturalCubicSpline(const Vector& xs, const Vector& values) {
  const Eigen::Index n = xs.size();
  if (n < 3) throw TooFewPoints("TooFewPoints: spline needs >= 3 knots");
  if (values.size() != n) throw LengthMismatch("LengthMismatch: spline knots");
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (!(xs(i) < xs(i + 1))) {
      throw InputError("InvalidArgument: spline knots must be strictly increasing");
    }
  }
  xs_ = xs;
  values_ = values;

  // Natural boundary: zero second derivative at both ends; the interior
  // system is tridiagonal (Thomas algorithm).
  const Eigen::Index interior = n - 2;
  second_derivs_ = Vector::Zero(n);
  if (interior > 0) {
    Vector diag(interior), upper(interior), rhs(interior);
    for (Eigen::Index i = 0; i < interior; ++i) {
      const double h_lo = xs(i + 1) - xs(i);
      const double h_hi = xs(i + 2) - xs(i + 1);
      diag(i) = 2.0 * (h_lo + h_hi);
      upper(i) = h_hi;
      rhs(i) = 6.0 * ((values(i + 2) - values(i + 1)) / h_hi -
                      (values(i + 1) - values(i)) / h_lo);
    }
    for (Eigen::Index i = 1; i < interior; ++i) {
      const double lower = xs(i + 1) - xs(i);  // equals previous upper
      const double w = lower / diag(i - 1);
      diag(i) -= w * upper(i - 1);
      rhs(i) -= w * rhs(i - 1);
    }
    second_derivs_(interior) = rhs(interior - 1) / diag(interior - 1);
    for (Eigen::Index i = interior - 1; i >= 1; --i) {
      second_derivs_(i) = (rhs(i - 1) - upper(i - 1) * second_derivs_(i + 1)) / diag(i - 1);
    }
  }
}

double NaturalCubicSpline::operator()(double x) const {
  const Eigen::Index n = xs_.size();
  if (x < xs_(0) - 1e-9 || x > xs_(n - 1) + 1e-9) {
    throw OutOfRange("OutOfRange: x outside spline span");
  }
  x = std::clamp(x, xs_(0), xs_(n - 1));
  Eigen::Index hi = 1;
  while (hi < n - 1 && xs_(hi) < x) ++hi;
  const Eigen::Index lo = hi - 1;
  const double h = xs_(hi) - xs_(lo);
  const double a = (xs_(hi) - x) / h;
  const double b = (x - xs_(lo)) / h;
  return a * values_(lo) + b * values_(hi) +
         ((a * a * a - a) * second_derivs_(lo) + (b * b * b - b) * second_derivs_(hi)) *
             (h * h) / 6.0;
}

std::pair<double, double> baseline_spline(const CableTrace& trace, double x_star) {
  const std::size_t n = trace.points.size();
  if (n < 3) throw TooFewPoints("TooFewPoints: spline baseline needs >= 3 points");
  Vector xs(n), ys(n), zs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs(static_cast<Eigen::Index>(i)) = trace.points[i].x;
    ys(static_cast<Eigen::Index>(i)) = trace.points[i].y;
    zs(static_cast<Eigen::Index>(i)) = trace.points[i].z;
  }
  const NaturalCubicSpline sy(xs, ys);
  const NaturalCubicSpline sz(xs, zs);
  return {sy(x_star), sz(x_star)};
}

namespace {

ErrorReport report_at(const CableRecord& record, const TruthCable& truth,
                      const std::vector<double>& xs) {
  ErrorReport rep;
  rep.n_eval_points = static_cast<int>(xs.size());
  if (xs.empty()) return rep;
  double pos = 0.0, depth = 0.0;
  int inside = 0;
  for (double x : xs) {
    const MapSample s = interpolate_record(record, x);
    const double ty = truth.y_curve(x);
    const double tz = truth.z_curve(x);
    pos += std::abs(s.y - ty);
    depth += std::abs(s.z - tz);
    if (std::abs(ty - s.y) <= s.hw_y && std::abs(tz - s.z) <= s.hw_z) ++inside;
  }
  rep.avg_position_error = pos / static_cast<double>(xs.size());
  rep.avg_depth_error = depth / static_cast<double>(xs.size());
  rep.coverage_rate = static_cast<double>(inside) / static_cast<double>(xs.size());
  return rep;
}

ErrorReport pool(const ErrorReport& a, const ErrorReport& b) {
  ErrorReport out;
  out.n_eval_points = a.n_eval_points + b.n_eval_points;
  if (out.n_eval_points == 0) return out;
  const double na = a.n_eval_points, nb = b.n_eval_points;
  out.avg_depth_error = (a.avg_depth_error * na + b.avg_depth_error * nb) / (na + nb);
  out.avg_position_error =
      (a.avg_position_error * na + b.avg_position_error * nb) / (na + nb);
  out.coverage_rate = (a.coverage_rate * na + b.coverage_rate * nb) / (na + nb);
  return out;
}

}  // namespace

EvaluationSummary evaluate_map(const CableMap& map, const std::vector<TruthCable>& truths,
                               const std::vector<double>& line_positions, int n_random,
                               std::uint64_t seed) {
  if (truths.empty()) throw EmptyInput("EmptyInput: no truth cables");
  if (n_random < 0) throw InputError("InvalidArgument: n_random must be >= 0");

  EvaluationSummary summary;
  for (const CableRecord& record : map) {
    if (record.samples.empty()) continue;
    const double x_first = record.samples.front().x;
    const double x_last = record.samples.back().x;

    // Match the truth cable with the closest mean y over the map samples.
    int best_truth = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < truths.size(); ++k) {
      double score = 0.0;
      for (const MapSample& s : record.samples) {
        score += std::abs(truths[k].y_curve(s.x) - s.y);
      }
      if (score < best_score) {
        best_score = score;
        best_truth = static_cast<int>(k);
      }
    }
    const TruthCable& truth = truths[static_cast<std::size_t>(best_truth)];

    std::vector<double> line_xs;
    for (double x : line_positions) {
      if (x >= x_first - 1e-9 && x <= x_last + 1e-9) {
        line_xs.push_back(std::clamp(x, x_first, x_last));
      }
    }
    Rng rng(seed ^ (static_cast<std::uint64_t>(record.cable_id) * 0x9e3779b97f4a7c15ULL));
    std::vector<double> random_xs;
    for (int i = 0; i < n_random; ++i) {
      random_xs.push_back(x_first + rng.uniform() * (x_last - x_first));
    }

    CableEvaluation ce;
    ce.cable_id = record.cable_id;
    ce.truth_index = best_truth;
    ce.detection_line = report_at(record, truth, line_xs);
    ce.random_points = report_at(record, truth, random_xs);
    ce.altogether = pool(ce.detection_line, ce.random_points);
    summary.overall = pool(summary.overall, ce.altogether);
    summary.cables.push_back(ce);
  }
  return summary;
}

std::string format_report_table(const EvaluationSummary& summary) {
  std::ostringstream out;
  char buf[160];
  out << "cable            points   depth(cm)   position(cm)   coverage\n";
  const auto row = [&](const std::string& label, const ErrorReport& r) {
    std::snprintf(buf, sizeof(buf), "  %-14s %6d %11.2f %14.2f %10.3f\n", label.c_str(),
                  r.n_eval_points, r.avg_depth_error * 100.0, r.avg_position_error * 100.0,
                  r.coverage_rate);
    out << buf;
  };
  for (const CableEvaluation& ce : summary.cables) {
    out << "cable " << ce.cable_id << " (truth " << (ce.truth_index + 1) << ")\n";
    row("detection line", ce.detection_line);
    row("random points", ce.random_points);
    row("altogether", ce.altogether);
  }
  out << "overall\n";
  row("altogether", summary.overall);
  return out.str();
}

}  // namespace cablemap
