#include "lacsh/spatial.hpp"

#include <cmath>

#include "lacsh/error.hpp"

namespace lacsh {

double great_circle_distance(double lat1, double lon1, double lat2, double lon2,
                             double radius) {
  if (lat1 < -90.0 || lat1 > 90.0 || lat2 < -90.0 || lat2 > 90.0 || lon1 <= -180.0 ||
      lon1 > 180.0 || lon2 <= -180.0 || lon2 > 180.0)
    throw InvalidCoordinateError("great_circle_distance: coordinate out of range");
  const double rad = M_PI / 180.0;
  const double phi1 = lat1 * rad, phi2 = lat2 * rad;
  const double dphi = (lat2 - lat1) * rad;
  const double dlam = (lon2 - lon1) * rad;
  const double s1 = std::sin(0.5 * dphi), s2 = std::sin(0.5 * dlam);
  const double a = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * radius * std::atan2(std::sqrt(a), std::sqrt(std::max(0.0, 1.0 - a)));
}

DistanceMatrix distance_matrix(const std::vector<std::pair<double, double>>& coords,
                               double radius) {
  const int n = static_cast<int>(coords.size());
  DistanceMatrix out;
  out.earth_radius = radius;
  out.D = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = great_circle_distance(coords[i].first, coords[i].second,
                                             coords[j].first, coords[j].second, radius);
      out.D(i, j) = d;
      out.D(j, i) = d;
    }
  }
  return out;
}

SpatialCorrelation correlation_matrix(const DistanceMatrix& D, double phi) {
  if (!(phi > 0.0)) throw NonpositivePhiError("correlation_matrix: phi must be > 0");
  SpatialCorrelation out;
  out.phi = phi;
  out.Omega = (-D.D / phi).array().exp();
  out.Omega.diagonal().setOnes();
  return out;
}

MatrixXd h_covariance(double sigma2_H, const SpatialCorrelation& Omega) {
  if (!(sigma2_H > 0.0))
    throw NonpositiveVarianceError("h_covariance: sigma2_H must be > 0");
  return sigma2_H * Omega.Omega;
}

CorrelationContext CorrelationContext::build(const DistanceMatrix& D, double phi) {
  CorrelationContext ctx;
  ctx.phi = phi;
  ctx.omega = correlation_matrix(D, phi).Omega;
  // jitter policy: one retry with 1e-10 on the (unit) diagonal, then fail
  ctx.chol = cholesky_with_jitter(ctx.omega, 1e-10);
  const int n = ctx.chol.dimension;
  ctx.omega_inv = ctx.chol.L.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(n, n));
  ctx.omega_inv = ctx.chol.L.transpose().triangularView<Eigen::Upper>().solve(ctx.omega_inv);
  ctx.log_det = 0.0;
  for (int i = 0; i < n; ++i) ctx.log_det += 2.0 * std::log(ctx.chol.L(i, i));
  return ctx;
}

CorrelationContext CorrelationContext::build_identity(int n) {
  CorrelationContext ctx;
  ctx.identity = true;
  ctx.omega = MatrixXd::Identity(n, n);
  ctx.chol = {MatrixXd::Identity(n, n), n};
  ctx.omega_inv = MatrixXd::Identity(n, n);
  ctx.log_det = 0.0;
  return ctx;
}

}  // namespace lacsh
