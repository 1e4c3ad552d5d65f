#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cablemap/cable_assign.hpp"
#include "cablemap/survey_frame.hpp"
#include "cablemap/synthetic_oracle.hpp"
#include "cablemap/types.hpp"

namespace cablemap {

struct ErrorReport {
  double avg_depth_error = 0.0;     // meters
  double avg_position_error = 0.0;  // meters
  double coverage_rate = 0.0;       // fraction in [0, 1]
  int n_eval_points = 0;
};

// Mean absolute difference between the two equal-length lists.
double average_error(const std::vector<double>& calculated,
                     const std::vector<double>& measured);

// Fraction of eval points where the truth lies inside mean +- halfwidth on
// both axes; map values are linearly interpolated between samples. Throws
// OutOfRange for eval points outside the sample span.
double coverage_rate(const CableRecord& record, const TruthCable& truth,
                     const std::vector<double>& eval_xs);

// Straight-segment connection of the trace points.
std::pair<double, double> baseline_linear(const CableTrace& trace, double x_star);

// Natural cubic spline through the trace points, evaluated per axis.
// Needs >= 3 points.
std::pair<double, double> baseline_spline(const CableTrace& trace, double x_star);

class NaturalCubicSpline {
 public:
  // xs strictly increasing, size >= 3 (TooFewPoints otherwise).
  NaturalCubicSpline(const Vector& xs, const Vector& values);
  double operator()(double x) const;  // OutOfRange outside [xs.front, xs.back]

 private:
  Vector xs_;
  Vector values_;
  Vector second_derivs_;
};

// Per-cable evaluation against truth, split into detection-line points,
// randomly chosen checkpoints, and the two pooled.
struct CableEvaluation {
  int cable_id = 0;
  int truth_index = -1;
  ErrorReport detection_line;
  ErrorReport random_points;
  ErrorReport altogether;
};

struct EvaluationSummary {
  std::vector<CableEvaluation> cables;
  ErrorReport overall;  // every cable's "altogether" pooled
};

// Evaluates each map cable against the best-matching truth cable at all
// detection-line positions inside the cable's span plus n_random uniformly
// drawn x per cable (deterministic under seed).
EvaluationSummary evaluate_map(const CableMap& map, const std::vector<TruthCable>& truths,
                               const std::vector<double>& line_positions, int n_random,
                               std::uint64_t seed);

// Aligned-column text table of an evaluation summary, errors in centimeters.
std::string format_report_table(const EvaluationSummary& summary);

}  // namespace cablemap
