#pragma once

#include "cablemap/cluster_extract.hpp"
#include "cablemap/survey_frame.hpp"
#include "cablemap/types.hpp"

namespace cablemap {

// Restricted hyperbola t^2/A^2 - (y - C)^2/B^2 = 1 with its center on the
// t = 0 axis. A is the time semi-axis in nanoseconds (the apex two-way travel
// time t0), B the spatial semi-axis in meters (v*t0/2 for a consistent wave
// speed), C the apex position y0 in meters. Lower branch parametrization:
// y = B*sinh(phi) + C, t = A*cosh(phi).
struct HyperbolaParams {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};

struct FitReport {
  HyperbolaParams params;
  int iterations = 0;
  double rms_orthogonal_distance = 0.0;  // in the isotropic (y, scale*t) metric
  bool converged = false;
  double scale_factor = 1.0;  // t multiplier that made the metric isotropic
};

// Linear least squares on t^2 = a + b*y + c*y^2 mapped back to (A, B, C).
// Throws TooFewSamples, or DegenerateCluster when the system is singular,
// c <= 0 (not downward-opening) or A^2 <= 0.
HyperbolaParams algebraic_init(const PointCluster& cluster);

// Parameter of the point on the lower branch nearest to (y, t): Newton on the
// stationarity of the squared distance, verified to be a local minimum, with
// a bracketed-scan fallback. init_phi, when finite, seeds the Newton
// iteration. Throws NoConvergence if every strategy fails.
double nearest_param(double y, double t, const HyperbolaParams& params);
double nearest_param(double y, double t, const HyperbolaParams& params, double init_phi);

// Gauss-Newton minimization of the summed squared orthogonal distances over
// (phi_1..phi_m, A, B, C), with damped steps and the phi block re-seeded via
// nearest_param each sweep. Distances are measured isotropically after
// rescaling t by the cluster's y-range/t-range ratio (undone on output).
// The reported rms never exceeds the rms of init.
FitReport orthogonal_refine(const PointCluster& cluster, const HyperbolaParams& init,
                            int max_iter = 50, double tol = 1e-10);

// Orthogonal-distance rms of params against cluster in the same scaled metric
// orthogonal_refine uses; lets callers compare an initialization with a
// refined fit.
double orthogonal_rms(const PointCluster& cluster, const HyperbolaParams& params);

// Apex of the fitted hyperbola as a detected point: (line_x, C, v*A/2).
DetectedPoint apex_to_detection(const HyperbolaParams& params, double line_x, double v);

// |B - v*A/2|; nonzero values flag a wave-speed mismatch.
double velocity_consistency(const HyperbolaParams& params, double v);

// Stacked residuals of the orthogonal-distance system and their Jacobian,
// exposed so the analytic derivatives can be checked against finite
// differences. Rows alternate (y-residual, t-residual) per sample; Jacobian
// columns are ordered [phi_0 .. phi_{m-1}, A, B, C].
Vector odr_residuals(const Vector& ys, const Vector& ts, const Vector& phis,
                     const HyperbolaParams& params);
Matrix odr_jacobian(const Vector& ys, const Vector& ts, const Vector& phis,
                    const HyperbolaParams& params);

}  // namespace cablemap
