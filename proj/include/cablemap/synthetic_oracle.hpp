#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "cablemap/cluster_extract.hpp"
#include "cablemap/survey_frame.hpp"
#include "cablemap/types.hpp"

namespace cablemap {

struct SinusoidCurve {
  double mean = 0.0;
  double amplitude = 0.0;
  double period = 1.0;
  double phase = 0.0;
  double operator()(double x) const;
};

struct PolylineCurve {
  Vector xs;      // strictly increasing
  Vector values;
  double operator()(double x) const;  // linear between knots, clamped outside
};

// Single-valued smooth curve over x, either family.
class Curve {
 public:
  Curve() : impl_(SinusoidCurve{}) {}
  explicit Curve(SinusoidCurve s) : impl_(s) {}
  explicit Curve(PolylineCurve p) : impl_(std::move(p)) {}

  double operator()(double x) const {
    return std::visit([x](const auto& c) { return c(x); }, impl_);
  }
  bool is_sinusoid() const { return std::holds_alternative<SinusoidCurve>(impl_); }
  const SinusoidCurve& sinusoid() const { return std::get<SinusoidCurve>(impl_); }
  const PolylineCurve& polyline() const { return std::get<PolylineCurve>(impl_); }

 private:
  std::variant<SinusoidCurve, PolylineCurve> impl_;
};

// Ground-truth cable: y(x) and z(x) over an x interval, z(x) >= 0.
struct TruthCable {
  Curve y_curve;
  Curve z_curve;
  double x_min = 0.0;
  double x_max = 0.0;
};

enum class NoiseFamily { kGaussian, kLaplace };

// Deterministic random stream: the standard-pinned mt19937_64 engine with
// hand-rolled transforms (std distributions are implementation-defined), so
// the same seed gives the same draws everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();   // [0, 1)
  double gaussian();  // standard normal, Box-Muller
  double laplace();   // unit variance

 private:
  std::mt19937_64 engine_;
};

// One noisy detected point per detection line falling inside the truth's
// x range. Noise draws are y then z per line, in line order.
std::vector<DetectedPoint> sample_detections(const TruthCable& truth,
                                             const SurveyConfig& config,
                                             double noise_y_sd, double noise_z_sd,
                                             std::uint64_t seed,
                                             NoiseFamily family = NoiseFamily::kGaussian);

// Hyperbolic signature of a cable at apex_y buried at depth (meters) under a
// medium with wave speed v (m/ns): t0 = 2*depth/v, samples at n equally
// spaced phi in [-phi_max, phi_max] via y = B sinh(phi) + apex_y,
// t = A cosh(phi) with A = t0, B = v*t0/2, plus Gaussian noise on t.
PointCluster synth_cluster(double apex_y, double depth, double v, int n, double phi_max,
                           double noise_t_sd, std::uint64_t seed);

// Paints each sample's cell with amplitude 1 and (by default) applies a
// one-cell Gaussian blur. Throws SampleOutOfGrid naming the first offending
// sample.
BScanGrid rasterize_cluster(const PointCluster& cluster, double dt, double dy, int rows,
                            int cols, bool blur = true);

}  // namespace cablemap
