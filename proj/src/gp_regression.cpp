#include "cablemap/gp_regression.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace cablemap {

double kernel(double x_i, double x_j, bool same_index, double beta, double theta) {
  const double d = x_i - x_j;
  double k = std::exp(-d * d / (2.0 * beta * beta));
  if (same_index) k += theta * theta;
  return k;
}

Matrix kernel_matrix(const Vector& xs, double beta, double theta) {
  const Eigen::Index n = xs.size();
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0 + theta * theta;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = kernel(xs(i), xs(j), false, beta, theta);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

GpModel gp_fit(const Vector& xs, const Vector& targets, double beta, double theta) {
  if (xs.size() == 0) throw EmptyInput("EmptyInput: gp_fit needs at least one sample");
  if (xs.size() != targets.size()) {
    throw LengthMismatch("LengthMismatch: inputs and targets differ in length");
  }
  if (!(beta > 0.0)) throw InputError("InvalidArgument: beta must be > 0");
  if (!(theta >= 0.0)) throw InputError("InvalidArgument: theta must be >= 0");

  const Matrix k = kernel_matrix(xs, beta, theta);
  Eigen::LLT<Matrix> llt(k);
  if (llt.info() != Eigen::Success) {
    throw SingularKernel("SingularKernel: kernel matrix factorization failed"
                         " (duplicate inputs with theta = 0, or numerical breakdown)");
  }

  GpModel model;
  model.train_x = xs;
  model.alpha = llt.solve(targets);
  model.chol_factor = llt.matrixL();
  model.beta = beta;
  model.theta = theta;
  return model;
}

Prediction gp_predict(const GpModel& model, double x_star) {
  // Covariances to the latent values carry no noise term.
  const Vector k_star =
      ((model.train_x.array() - x_star).square() * (-0.5 / (model.beta * model.beta)))
          .exp()
          .matrix();

  Prediction pred;
  pred.mean = k_star.dot(model.alpha);
  const Vector v = model.chol_factor.triangularView<Eigen::Lower>().solve(k_star);
  const double variance = std::max(0.0, 1.0 - v.squaredNorm());
  pred.stddev = std::sqrt(variance);
  return pred;
}

CableRecord fit_cable(const CableTrace& trace, const SurveyConfig& config) {
  const std::size_t n = trace.points.size();
  if (n < 2) throw TooFewPoints("TooFewPoints: fit_cable needs a trace of >= 2 points");

  Vector xs(n), ys(n), zs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs(static_cast<Eigen::Index>(i)) = trace.points[i].x;
    ys(static_cast<Eigen::Index>(i)) = trace.points[i].y;
    zs(static_cast<Eigen::Index>(i)) = trace.points[i].z;
  }
  const double y_mean = ys.mean();
  const double z_mean = zs.mean();

  const GpModel gp_y =
      gp_fit(xs, Vector(ys.array() - y_mean), config.effective_beta_y(), config.theta_y);
  const GpModel gp_z =
      gp_fit(xs, Vector(zs.array() - z_mean), config.effective_beta_z(), config.theta_z);

  const double x_first = xs(0);
  const double x_last = xs(xs.size() - 1);

  CableRecord record;
  record.cable_id = trace.cable_id;
  for (std::size_t k = 0;; ++k) {
    const double x = x_first + static_cast<double>(k) * config.sample_step;
    if (x >= x_last - 1e-9) break;
    record.samples.push_back(MapSample{x, 0.0, 0.0, 0.0, 0.0});
  }
  record.samples.push_back(MapSample{x_last, 0.0, 0.0, 0.0, 0.0});

  for (MapSample& s : record.samples) {
    const Prediction py = gp_predict(gp_y, s.x);
    const Prediction pz = gp_predict(gp_z, s.x);
    s.y = py.mean + y_mean;
    s.z = pz.mean + z_mean;
    s.hw_y = 2.0 * py.stddev;
    s.hw_z = 2.0 * pz.stddev;
  }
  return record;
}

}  // namespace cablemap
