#include "cablemap/hyperbola_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace cablemap {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Squared distance from (u, t) to the curve point at phi, in apex-centered
// coordinates u = y - C, plus its first two derivatives in phi.
struct DistDerivs {
  double g;
  double g1;
  double g2;
};

DistDerivs dist_derivs(double u, double t, double A, double B, double phi) {
  const double sh = std::sinh(phi);
  const double ch = std::cosh(phi);
  const double ry = u - B * sh;
  const double rt = t - A * ch;
  DistDerivs d;
  d.g = ry * ry + rt * rt;
  d.g1 = -2.0 * (B * ch * ry + A * sh * rt);
  d.g2 = 2.0 * (B * B * ch * ch + A * A * sh * sh - B * sh * ry - A * ch * rt);
  return d;
}

double sq_dist(double u, double t, double A, double B, double phi) {
  const double ry = u - B * std::sinh(phi);
  const double rt = t - A * std::cosh(phi);
  return ry * ry + rt * rt;
}

// Newton on the stationarity condition g'(phi) = 0, descending only while
// the local curvature is positive. Returns NaN on failure.
double newton_min(double u, double t, double A, double B, double phi0, double tol_g) {
  double phi = phi0;
  for (int it = 0; it < 50; ++it) {
    const DistDerivs d = dist_derivs(u, t, A, B, phi);
    if (!std::isfinite(d.g1) || !std::isfinite(d.g2)) return kNan;
    if (std::abs(d.g1) <= tol_g && d.g2 > 0.0) return phi;
    if (d.g2 <= 0.0) return kNan;  // heading toward a maximum or saddle
    const double step = d.g1 / d.g2;
    phi -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(phi))) {
      return dist_derivs(u, t, A, B, phi).g2 > 0.0 ? phi : kNan;
    }
  }
  const DistDerivs d = dist_derivs(u, t, A, B, phi);
  return (std::abs(d.g1) <= tol_g && d.g2 > 0.0) ? phi : kNan;
}

bool is_local_min(double u, double t, double A, double B, double phi) {
  const double h = 1e-5 * (1.0 + std::abs(phi));
  const double g0 = sq_dist(u, t, A, B, phi);
  const double gm = sq_dist(u, t, A, B, phi - h);
  const double gp = sq_dist(u, t, A, B, phi + h);
  const double slack = 1e-9 * (1.0 + g0);
  return gm + slack >= g0 && gp + slack >= g0;
}

}  // namespace

HyperbolaParams algebraic_init(const PointCluster& cluster) {
  const Eigen::Index n = cluster.samples.rows();
  if (n < kMinClusterSamples) {
    throw TooFewSamples("TooFewSamples: cluster has " + std::to_string(n) +
                        " samples, need >= " + std::to_string(kMinClusterSamples));
  }
  const auto ys = cluster.samples.col(0);
  const auto ts = cluster.samples.col(1);

  std::vector<double> sorted(ys.data(), ys.data() + n);
  std::sort(sorted.begin(), sorted.end());
  Eigen::Index distinct = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] != sorted[i - 1]) ++distinct;
  }
  if (distinct < 3) {
    throw DegenerateCluster("DegenerateCluster: fewer than 3 distinct y values");
  }

  Matrix design(n, 3);
  design.col(0).setOnes();
  design.col(1) = ys;
  design.col(2) = ys.array().square();
  const Vector target = ts.array().square();

  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < 3) {
    throw DegenerateCluster("DegenerateCluster: singular normal equations");
  }
  const Vector coef = qr.solve(target);
  const double a = coef(0), b = coef(1), c = coef(2);

  // c has units t^2/y^2; reject curvatures indistinguishable from zero.
  const double y_range = ys.maxCoeff() - ys.minCoeff();
  const double c_floor = 1e-10 * target.maxCoeff() / std::max(y_range * y_range, 1e-300);
  if (!(c > c_floor)) {
    throw DegenerateCluster("DegenerateCluster: cluster is flat or opens upward (c <= 0)");
  }
  const double a_sq = a - b * b / (4.0 * c);
  if (!(a_sq > 0.0)) {
    throw DegenerateCluster("DegenerateCluster: no real time semi-axis (A^2 <= 0)");
  }

  HyperbolaParams p;
  p.A = std::sqrt(a_sq);
  p.B = p.A / std::sqrt(c);
  p.C = -b / (2.0 * c);
  return p;
}

double nearest_param(double y, double t, const HyperbolaParams& params) {
  return nearest_param(y, t, params, kNan);
}

double nearest_param(double y, double t, const HyperbolaParams& params, double init_phi) {
  const double A = params.A, B = params.B;
  if (!(A > 0.0) || !(B > 0.0)) {
    throw InputError("InvalidArgument: hyperbola semi-axes must be positive");
  }
  const double u = y - params.C;
  const double tol_g = 1e-12 * (A * A + B * B + u * u + t * t);

  const double phi_proj = std::asinh(u / B);
  double phi = newton_min(u, t, A, B, std::isfinite(init_phi) ? init_phi : phi_proj, tol_g);
  if (std::isfinite(phi) && is_local_min(u, t, A, B, phi)) return phi;

  // Bracketed scan. The nearest point's phi cannot be far outside the y
  // projection of the query point, but widen until the best cell is interior.
  double lo = std::min(0.0, phi_proj) - 3.0;
  double hi = std::max(0.0, phi_proj) + 3.0;
  for (int expand = 0; expand < 6; ++expand) {
    constexpr int kCells = 512;
    const double step = (hi - lo) / kCells;
    int best = 0;
    double best_g = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kCells; ++i) {
      const double g = sq_dist(u, t, A, B, lo + i * step);
      if (g < best_g) {
        best_g = g;
        best = i;
      }
    }
    if (best == 0 || best == kCells) {
      const double span = hi - lo;
      lo -= span;
      hi += span;
      continue;
    }

    phi = newton_min(u, t, A, B, lo + best * step, tol_g);
    if (std::isfinite(phi) && is_local_min(u, t, A, B, phi)) return phi;

    // Bisection on g' over the bracketing grid neighbors.
    double a_phi = lo + (best - 1) * step;
    double b_phi = lo + (best + 1) * step;
    double ga = dist_derivs(u, t, A, B, a_phi).g1;
    double gb = dist_derivs(u, t, A, B, b_phi).g1;
    if (ga <= 0.0 && gb >= 0.0) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a_phi + b_phi);
        const double gm = dist_derivs(u, t, A, B, mid).g1;
        if (gm <= 0.0) {
          a_phi = mid;
        } else {
          b_phi = mid;
        }
      }
      phi = 0.5 * (a_phi + b_phi);
      if (is_local_min(u, t, A, B, phi)) return phi;
    }
    break;
  }
  throw NoConvergence("NoConvergence: nearest-point search failed for sample");
}

namespace {

struct ScaledCluster {
  Vector ys;
  Vector ts;      // pre-multiplied by scale
  double scale;
};

ScaledCluster scale_cluster(const PointCluster& cluster) {
  ScaledCluster s;
  s.ys = cluster.samples.col(0);
  s.ts = cluster.samples.col(1);
  const double y_range = s.ys.maxCoeff() - s.ys.minCoeff();
  const double t_range = s.ts.maxCoeff() - s.ts.minCoeff();
  s.scale = (y_range > 0.0 && t_range > 0.0) ? y_range / t_range : 1.0;
  s.ts *= s.scale;
  return s;
}

double objective(const ScaledCluster& sc, const HyperbolaParams& p, Vector& phis) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < sc.ys.size(); ++i) {
    phis(i) = nearest_param(sc.ys(i), sc.ts(i), p, phis(i));
    f += sq_dist(sc.ys(i) - p.C, sc.ts(i), p.A, p.B, phis(i));
  }
  return f;
}

}  // namespace

FitReport orthogonal_refine(const PointCluster& cluster, const HyperbolaParams& init,
                            int max_iter, double tol) {
  if (max_iter < 1) throw InputError("InvalidArgument: max_iter must be >= 1");
  if (!(tol > 0.0)) throw InputError("InvalidArgument: tol must be > 0");
  if (!(init.A > 0.0) || !(init.B > 0.0)) {
    throw NonPositiveAxes("NonPositiveAxes: initialization has non-positive semi-axis");
  }

  const ScaledCluster sc = scale_cluster(cluster);
  const Eigen::Index m = sc.ys.size();

  HyperbolaParams p{init.A * sc.scale, init.B, init.C};
  Vector phis = Vector::Constant(m, kNan);
  double f = objective(sc, p, phis);

  int iterations = 0;
  bool converged = false;

  for (; iterations < max_iter;) {
    ++iterations;

    // Normal equations of the 2m x (m+3) system have arrow structure:
    // a diagonal phi block D, a 3-column coupling U and a dense 3x3 head S.
    // Eliminate the phi block (Schur complement) and solve for (dA, dB, dC).
    Eigen::Matrix3d head = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double sh = std::sinh(phis(i));
      const double ch = std::cosh(phis(i));
      const double ry = sc.ys(i) - p.C - p.B * sh;
      const double rt = sc.ts(i) - p.A * ch;
      const double jy_phi = -p.B * ch;  // d(y-residual)/d(phi_i)
      const double jt_phi = -p.A * sh;  // d(t-residual)/d(phi_i)
      const double diag = jy_phi * jy_phi + jt_phi * jt_phi;
      if (!(diag > 0.0) || !std::isfinite(diag)) {
        throw DegenerateCluster("DegenerateCluster: singular Gauss-Newton system");
      }
      const Eigen::Vector3d coupling(jt_phi * -ch, jy_phi * -sh, jy_phi * -1.0);
      const double rhs_phi = -(jy_phi * ry + jt_phi * rt);

      Eigen::Matrix3d s_i = Eigen::Matrix3d::Zero();
      s_i(0, 0) = ch * ch;
      s_i(1, 1) = sh * sh;
      s_i(1, 2) = sh;
      s_i(2, 1) = sh;
      s_i(2, 2) = 1.0;
      head += s_i - coupling * coupling.transpose() / diag;
      rhs += Eigen::Vector3d(ch * rt, sh * ry, ry) - coupling * (rhs_phi / diag);
    }

    Eigen::LDLT<Eigen::Matrix3d> ldlt(head);
    if (ldlt.info() != Eigen::Success) {
      throw DegenerateCluster("DegenerateCluster: singular Gauss-Newton system");
    }
    const Eigen::Vector3d delta = ldlt.solve(rhs);
    if (!delta.allFinite()) {
      throw DegenerateCluster("DegenerateCluster: non-finite Gauss-Newton step");
    }

    // Damped step on the true orthogonal objective; semi-axes must stay
    // positive for the step to be admissible.
    double alpha = 1.0;
    bool accepted = false;
    bool any_feasible = false;
    HyperbolaParams cand;
    Vector cand_phis;
    double f_new = f;
    for (int halving = 0; halving <= 20; ++halving, alpha *= 0.5) {
      cand = HyperbolaParams{p.A + alpha * delta(0), p.B + alpha * delta(1),
                             p.C + alpha * delta(2)};
      if (!(cand.A > 0.0) || !(cand.B > 0.0) || !std::isfinite(cand.C)) continue;
      any_feasible = true;
      cand_phis = phis;
      f_new = objective(sc, cand, cand_phis);
      if (f_new <= f) {
        accepted = true;
        break;
      }
    }
    if (!any_feasible) {
      throw NonPositiveAxes("NonPositiveAxes: no feasible damped step keeps A, B positive");
    }
    if (!accepted) {
      converged = true;  // stagnated at a local minimum
      break;
    }

    const double decrease = f - f_new;
    p = cand;
    phis.swap(cand_phis);
    f = f_new;
    if (decrease <= tol * std::max(f, 1e-300)) {
      converged = true;
      break;
    }
  }

  FitReport report;
  report.params = HyperbolaParams{p.A / sc.scale, p.B, p.C};
  report.iterations = iterations;
  report.rms_orthogonal_distance = std::sqrt(f / static_cast<double>(m));
  report.converged = converged;
  report.scale_factor = sc.scale;
  return report;
}

double orthogonal_rms(const PointCluster& cluster, const HyperbolaParams& params) {
  const ScaledCluster sc = scale_cluster(cluster);
  const HyperbolaParams p{params.A * sc.scale, params.B, params.C};
  double f = 0.0;
  for (Eigen::Index i = 0; i < sc.ys.size(); ++i) {
    const double phi = nearest_param(sc.ys(i), sc.ts(i), p);
    f += sq_dist(sc.ys(i) - p.C, sc.ts(i), p.A, p.B, phi);
  }
  return std::sqrt(f / static_cast<double>(sc.ys.size()));
}

DetectedPoint apex_to_detection(const HyperbolaParams& params, double line_x, double v) {
  if (!(params.A > 0.0) || !(params.B > 0.0)) {
    throw InputError("InvalidArgument: hyperbola semi-axes must be positive");
  }
  if (!(v > 0.0)) throw InputError("InvalidArgument: wave speed must be > 0");
  return DetectedPoint{line_x, params.C, v * params.A / 2.0};
}

double velocity_consistency(const HyperbolaParams& params, double v) {
  return std::abs(params.B - v * params.A / 2.0);
}

Vector odr_residuals(const Vector& ys, const Vector& ts, const Vector& phis,
                     const HyperbolaParams& params) {
  const Eigen::Index m = ys.size();
  Vector r(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    r(2 * i) = ys(i) - params.C - params.B * std::sinh(phis(i));
    r(2 * i + 1) = ts(i) - params.A * std::cosh(phis(i));
  }
  return r;
}

Matrix odr_jacobian(const Vector& ys, const Vector& ts, const Vector& phis,
                    const HyperbolaParams& params) {
  (void)ys;
  (void)ts;
  const Eigen::Index m = phis.size();
  Matrix jac = Matrix::Zero(2 * m, m + 3);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sh = std::sinh(phis(i));
    const double ch = std::cosh(phis(i));
    jac(2 * i, i) = -params.B * ch;
    jac(2 * i, m + 1) = -sh;
    jac(2 * i, m + 2) = -1.0;
    jac(2 * i + 1, i) = -params.A * sh;
    jac(2 * i + 1, m) = -ch;
  }
  return jac;
}

}  // namespace cablemap
