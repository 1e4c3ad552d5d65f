#pragma once

#include "cablemap/cable_assign.hpp"
#include "cablemap/survey_frame.hpp"
#include "cablemap/types.hpp"

namespace cablemap {

// Zero-mean Gaussian process fitted to scalar targets over 1-D inputs.
// chol_factor is the lower Cholesky factor of the kernel matrix and alpha
// solves K * alpha = targets.
struct GpModel {
  Vector train_x;
  Vector alpha;
  Matrix chol_factor;
  double beta = 1.0;
  double theta = 0.0;
};

struct Prediction {
  double mean = 0.0;
  double stddev = 0.0;
};

// Squared-exponential covariance with additive observation noise on the
// diagonal: exp(-(xi - xj)^2 / (2 beta^2)) + theta^2 [same_index].
double kernel(double x_i, double x_j, bool same_index, double beta, double theta);

// Kernel matrix over all input pairs; symmetric by construction.
Matrix kernel_matrix(const Vector& xs, double beta, double theta);

// Builds and factorizes the kernel matrix. Throws SingularKernel when the
// Cholesky factorization breaks down (e.g. duplicate inputs with theta = 0).
GpModel gp_fit(const Vector& xs, const Vector& targets, double beta, double theta);

// Posterior at x_star: mean k*^T alpha, variance 1 - k*^T K^-1 k* clamped at
// zero before the square root. The prior variance of the latent value is 1,
// so stddev never exceeds 1.
Prediction gp_predict(const GpModel& model, double x_star);

// Per-axis GP regression over one trace: (x, y) with theta_y and (x, z) with
// theta_z, sampled from the first to the last trace x at config.sample_step
// with both endpoints always included. Half-widths are 2 * posterior stddev.
// Targets are centered on their sample mean before fitting and the mean is
// added back to the predictions, so the zero-mean prior acts on deviations
// rather than absolute survey coordinates.
CableRecord fit_cable(const CableTrace& trace, const SurveyConfig& config);

}  // namespace cablemap
