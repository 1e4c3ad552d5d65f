#include "cablemap/synthetic_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace cablemap {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

double SinusoidCurve::operator()(double x) const {
  return mean + amplitude * std::sin(kTwoPi * x / period + phase);
}

double PolylineCurve::operator()(double x) const {
  const Eigen::Index n = xs.size();
  if (n == 0) return 0.0;
  if (x <= xs(0)) return values(0);
  if (x >= xs(n - 1)) return values(n - 1);
  Eigen::Index hi = 1;
  while (xs(hi) < x) ++hi;
  const double w = (x - xs(hi - 1)) / (xs(hi) - xs(hi - 1));
  return values(hi - 1) * (1.0 - w) + values(hi) * w;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Rng::laplace() {
  const double u = uniform() - 0.5;
  const double b = 1.0 / std::sqrt(2.0);  // unit variance
  return (u < 0.0 ? b : -b) * std::log(1.0 - 2.0 * std::abs(u));
}

std::vector<DetectedPoint> sample_detections(const TruthCable& truth,
                                             const SurveyConfig& config,
                                             double noise_y_sd, double noise_z_sd,
                                             std::uint64_t seed, NoiseFamily family) {
  if (!(noise_y_sd >= 0.0) || !(noise_z_sd >= 0.0)) {
    throw InputError("InvalidArgument: noise standard deviations must be >= 0");
  }
  Rng rng(seed);
  const auto draw = [&]() {
    return family == NoiseFamily::kGaussian ? rng.gaussian() : rng.laplace();
  };

  std::vector<DetectedPoint> out;
  for (double x : config.line_positions) {
    if (x < truth.x_min - 1e-12 || x > truth.x_max + 1e-12) continue;
    DetectedPoint p;
    p.x = x;
    p.y = truth.y_curve(x) + noise_y_sd * draw();
    p.z = truth.z_curve(x) + noise_z_sd * draw();
    out.push_back(p);
  }
  return out;
}

PointCluster synth_cluster(double apex_y, double depth, double v, int n, double phi_max,
                           double noise_t_sd, std::uint64_t seed) {
  if (!(depth > 0.0)) throw InputError("InvalidArgument: depth must be > 0");
  if (!(v > 0.0)) throw InputError("InvalidArgument: wave speed must be > 0");
  if (n < kMinClusterSamples) {
    throw InputError("InvalidArgument: n must be >= " + std::to_string(kMinClusterSamples));
  }
  if (!(phi_max > 0.0)) throw InputError("InvalidArgument: phi_max must be > 0");

  const double t0 = 2.0 * depth / v;
  const double a = t0;
  const double b = v * t0 / 2.0;
  Rng rng(seed);

  PointCluster cluster;
  cluster.samples.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    const double phi = -phi_max + 2.0 * phi_max * static_cast<double>(i) / (n - 1);
    cluster.samples(i, 0) = b * std::sinh(phi) + apex_y;
    cluster.samples(i, 1) = a * std::cosh(phi) + noise_t_sd * rng.gaussian();
  }
  return cluster;
}

BScanGrid rasterize_cluster(const PointCluster& cluster, double dt, double dy, int rows,
                            int cols, bool blur) {
  if (rows < 2 || cols < 2 || !(dt > 0.0) || !(dy > 0.0)) {
    throw InvalidGrid("InvalidGrid: rasterization target is malformed");
  }

  Matrix amp = Matrix::Zero(rows, cols);
  for (Eigen::Index i = 0; i < cluster.samples.rows(); ++i) {
    const double y = cluster.samples(i, 0);
    const double t = cluster.samples(i, 1);
    const int c = static_cast<int>(std::floor(y / dy));
    const int r = static_cast<int>(std::floor(t / dt));
    if (r < 0 || r >= rows || c < 0 || c >= cols) {
      throw SampleOutOfGrid("SampleOutOfGrid: sample " + std::to_string(i + 1) + " (y=" +
                            std::to_string(y) + ", t=" + std::to_string(t) +
                            ") falls outside the grid");
    }
    amp(r, c) = 1.0;
  }

  if (blur) {
    // Separable [1 2 1]/4 kernel in each direction.
    const auto blur_1d = [](const Matrix& src, bool along_rows) {
      Matrix dst = Matrix::Zero(src.rows(), src.cols());
      for (Eigen::Index r = 0; r < src.rows(); ++r) {
        for (Eigen::Index c = 0; c < src.cols(); ++c) {
          double acc = 2.0 * src(r, c);
          if (along_rows) {
            if (r > 0) acc += src(r - 1, c);
            if (r + 1 < src.rows()) acc += src(r + 1, c);
          } else {
            if (c > 0) acc += src(r, c - 1);
            if (c + 1 < src.cols()) acc += src(r, c + 1);
          }
          dst(r, c) = acc / 4.0;
        }
      }
      return dst;
    };
    amp = blur_1d(blur_1d(amp, true), false);
  }

  BScanGrid grid;
  grid.dt = dt;
  grid.dy = dy;
  grid.line_x = cluster.source_line_x;
  grid.amplitude = std::move(amp);
  return grid;
}

}  // namespace cablemap
