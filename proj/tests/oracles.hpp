#pragma once

// Brute-force reference implementations used only by tests. Each computes the
// same quantity as a library routine through an independent route, so the two
// can be checked against each other.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "cablemap/cable_assign.hpp"
#include "cablemap/cluster_extract.hpp"
#include "cablemap/hyperbola_fit.hpp"
#include "cablemap/survey_frame.hpp"
#include "cablemap/types.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Nearest point on the hyperbola by dense grid scan plus golden-section.
// ---------------------------------------------------------------------------

inline double hyperbola_sq_dist(double y, double t, const cablemap::HyperbolaParams& p,
                                double phi) {
  const double dy = y - (p.B * std::sinh(phi) + p.C);
  const double dt = t - p.A * std::cosh(phi);
  return dy * dy + dt * dt;
}

inline double nearest_param_grid(double y, double t, const cablemap::HyperbolaParams& p,
                                 double lo = -5.0, double hi = 5.0) {
  const int cells = 20000;
  int best = 0;
  double best_g = hyperbola_sq_dist(y, t, p, lo);
  for (int i = 1; i <= cells; ++i) {
    const double phi = lo + (hi - lo) * i / cells;
    const double g = hyperbola_sq_dist(y, t, p, phi);
    if (g < best_g) {
      best_g = g;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best - 1) / cells;
  double b = lo + (hi - lo) * std::min(cells, best + 1) / cells;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = hyperbola_sq_dist(y, t, p, x1);
  double f2 = hyperbola_sq_dist(y, t, p, x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = hyperbola_sq_dist(y, t, p, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = hyperbola_sq_dist(y, t, p, x2);
    }
  }
  return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Matrix inverse by cofactor expansion (n <= 6 in practice).
// ---------------------------------------------------------------------------

inline double det_cofactor(const cablemap::Matrix& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) return m(0, 0);
  double det = 0.0;
  double sign = 1.0;
  for (Eigen::Index col = 0; col < n; ++col) {
    cablemap::Matrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == col) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    det += sign * m(0, col) * det_cofactor(minor);
    sign = -sign;
  }
  return det;
}

inline cablemap::Matrix inverse_cofactor(const cablemap::Matrix& m) {
  const Eigen::Index n = m.rows();
  const double det = det_cofactor(m);
  cablemap::Matrix inv(n, n);
  if (n == 1) {
    inv(0, 0) = 1.0 / det;
    return inv;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      cablemap::Matrix minor(n - 1, n - 1);
      Eigen::Index rr = 0;
      for (Eigen::Index r = 0; r < n; ++r) {
        if (r == j) continue;  // adjugate transposes the cofactor matrix
        Eigen::Index cc = 0;
        for (Eigen::Index c = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      inv(i, j) = (((i + j) % 2 == 0) ? 1.0 : -1.0) * det_cofactor(minor) / det;
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Connected components by iterated label propagation until fixpoint.
// ---------------------------------------------------------------------------

inline std::vector<std::vector<std::pair<int, int>>> components_by_propagation(
    const cablemap::Matrix& amplitude, double threshold, bool eight_connectivity = false) {
  const int rows = static_cast<int>(amplitude.rows());
  const int cols = static_cast<int>(amplitude.cols());
  std::vector<int> label(static_cast<std::size_t>(rows) * cols, -1);
  const auto at = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };

  int next = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (std::abs(amplitude(r, c)) >= threshold) label[at(r, c)] = next++;
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (label[at(r, c)] < 0) continue;
        int best = label[at(r, c)];
        const auto consider = [&](int rr, int cc) {
          if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) return;
          if (label[at(rr, cc)] >= 0) best = std::min(best, label[at(rr, cc)]);
        };
        consider(r - 1, c);
        consider(r + 1, c);
        consider(r, c - 1);
        consider(r, c + 1);
        if (eight_connectivity) {
          consider(r - 1, c - 1);
          consider(r - 1, c + 1);
          consider(r + 1, c - 1);
          consider(r + 1, c + 1);
        }
        if (best < label[at(r, c)]) {
          label[at(r, c)] = best;
          changed = true;
        }
      }
    }
  }

  std::vector<int> roots;
  std::vector<std::vector<std::pair<int, int>>> out;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int l = label[at(r, c)];
      if (l < 0) continue;
      auto it = std::find(roots.begin(), roots.end(), l);
      std::size_t idx;
      if (it == roots.end()) {
        roots.push_back(l);
        out.emplace_back();
        idx = out.size() - 1;
      } else {
        idx = static_cast<std::size_t>(it - roots.begin());
      }
      out[idx].emplace_back(r, c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-line assignment by exhaustive enumeration. Enumerates every feasible
// matching of a line's points to the open traces and keeps the one that is
// lexicographically greatest when its pairs are listed best-cosine-first
// (ties on trace id, then point coordinates) -- the same selection the greedy
// pass is specified to make, derived by a different route.
// ---------------------------------------------------------------------------

struct ExhaustiveTrace {
  int id = 0;
  cablemap::DetectedPoint last;
  cablemap::Vector3 direction{1.0, 0.0, 0.0};
  std::vector<cablemap::DetectedPoint> points;
};

struct PairKey {
  double cosine;
  int trace_id;
  double y;
  double z;

  bool operator<(const PairKey& o) const {  // "better than"
    if (cosine != o.cosine) return cosine > o.cosine;
    if (trace_id != o.trace_id) return trace_id < o.trace_id;
    if (y != o.y) return y < o.y;
    return z < o.z;
  }
};

inline std::vector<std::vector<cablemap::DetectedPoint>> assign_points_exhaustive(
    const std::vector<cablemap::DetectedPoint>& points, double angle_threshold_deg) {
  const double cos_min = std::cos(angle_threshold_deg * 3.14159265358979323846 / 180.0);
  std::vector<ExhaustiveTrace> open;
  int next_id = 1;

  std::size_t begin = 0;
  while (begin < points.size()) {
    std::size_t end = begin;
    while (end < points.size() && points[end].x == points[begin].x) ++end;
    const std::size_t m = end - begin;

    struct Pair {
      std::size_t trace;
      std::size_t point;
      PairKey key;
    };
    std::vector<Pair> feasible;
    for (std::size_t k = 0; k < open.size(); ++k) {
      for (std::size_t j = 0; j < m; ++j) {
        const auto& p = points[begin + j];
        cablemap::Vector3 ext(p.x - open[k].last.x, p.y - open[k].last.y,
                              p.z - open[k].last.z);
        if (!(ext.norm() > 0.0)) continue;
        const double cosine = ext.normalized().dot(open[k].direction);
        if (cosine >= cos_min - 1e-12) {
          feasible.push_back({k, j, PairKey{cosine, open[k].id, p.y, p.z}});
        }
      }
    }

    // Enumerate all matchings over the feasible pairs.
    std::vector<std::vector<Pair>> matchings;
    std::vector<Pair> current;
    std::vector<char> trace_used(open.size(), 0);
    const auto recurse = [&](auto&& self, std::size_t point_idx) -> void {
      if (point_idx == m) {
        matchings.push_back(current);
        return;
      }
      self(self, point_idx + 1);  // leave this point unmatched
      for (const Pair& pr : feasible) {
        if (pr.point != point_idx || trace_used[pr.trace]) continue;
        trace_used[pr.trace] = 1;
        current.push_back(pr);
        self(self, point_idx + 1);
        current.pop_back();
        trace_used[pr.trace] = 0;
      }
    };
    recurse(recurse, 0);

    const auto sorted_keys = [](const std::vector<Pair>& match) {
      std::vector<PairKey> keys;
      for (const Pair& pr : match) keys.push_back(pr.key);
      std::sort(keys.begin(), keys.end());
      return keys;
    };
    std::size_t best = 0;
    std::vector<PairKey> best_keys = sorted_keys(matchings[0]);
    for (std::size_t i = 1; i < matchings.size(); ++i) {
      std::vector<PairKey> keys = sorted_keys(matchings[i]);
      bool better = false;
      const std::size_t shared = std::min(keys.size(), best_keys.size());
      std::size_t p = 0;
      while (p < shared && !(keys[p] < best_keys[p]) && !(best_keys[p] < keys[p])) ++p;
      if (p < shared) {
        better = keys[p] < best_keys[p];
      } else {
        better = keys.size() > best_keys.size();
      }
      if (better) {
        best = i;
        best_keys = std::move(keys);
      }
    }

    std::vector<char> matched(m, 0);
    for (const Pair& pr : matchings[best]) {
      const auto& p = points[begin + pr.point];
      auto& trace = open[pr.trace];
      cablemap::Vector3 ext(p.x - trace.last.x, p.y - trace.last.y, p.z - trace.last.z);
      trace.direction = ext.normalized();
      trace.last = p;
      trace.points.push_back(p);
      matched[pr.point] = 1;
    }
    std::vector<std::size_t> leftover;
    for (std::size_t j = 0; j < m; ++j) {
      if (!matched[j]) leftover.push_back(j);
    }
    std::sort(leftover.begin(), leftover.end(), [&](std::size_t a, std::size_t b) {
      const auto& pa = points[begin + a];
      const auto& pb = points[begin + b];
      if (pa.y != pb.y) return pa.y < pb.y;
      return pa.z < pb.z;
    });
    for (std::size_t j : leftover) {
      ExhaustiveTrace trace;
      trace.id = next_id++;
      trace.last = points[begin + j];
      trace.points.push_back(points[begin + j]);
      open.push_back(std::move(trace));
    }

    begin = end;
  }

  std::vector<std::vector<cablemap::DetectedPoint>> partition;
  for (const auto& trace : open) partition.push_back(trace.points);
  return partition;
}

// Canonical form of a partition for structural comparison.
inline std::vector<std::vector<std::array<double, 3>>> canonical_partition(
    const std::vector<std::vector<cablemap::DetectedPoint>>& parts) {
  std::vector<std::vector<std::array<double, 3>>> out;
  for (const auto& part : parts) {
    std::vector<std::array<double, 3>> points;
    for (const auto& p : part) points.push_back({p.x, p.y, p.z});
    std::sort(points.begin(), points.end());
    out.push_back(std::move(points));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::vector<cablemap::DetectedPoint>> trace_points(
    const std::vector<cablemap::CableTrace>& traces) {
  std::vector<std::vector<cablemap::DetectedPoint>> out;
  for (const auto& trace : traces) out.push_back(trace.points);
  return out;
}

}  // namespace oracle
