#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lacsh/stats.hpp"

namespace lacsh {

// Mean Earth radius in megameters; distances throughout are in Mm so the
// inferred decay parameter phi is comparable across runs.
constexpr double kEarthRadiusMm = 6.371;

// Haversine great-circle distance between (lat, lon) points in degrees.
double great_circle_distance(double lat1, double lon1, double lat2, double lon2,
                             double radius = kEarthRadiusMm);

struct DistanceMatrix {
  MatrixXd D;  // symmetric, zero diagonal, entries in megameters
  double earth_radius = kEarthRadiusMm;
};

DistanceMatrix distance_matrix(const std::vector<std::pair<double, double>>& coords,
                               double radius = kEarthRadiusMm);

struct SpatialCorrelation {
  MatrixXd Omega;  // exp(-D/phi), unit diagonal
  double phi = 1.0;
};

SpatialCorrelation correlation_matrix(const DistanceMatrix& D, double phi);

MatrixXd h_covariance(double sigma2_H, const SpatialCorrelation& Omega);

// Factorization cache for Omega(phi): Cholesky factor, inverse and log
// determinant, rebuilt only when phi changes. The identity context serves
// the base model's diagonal Sigma_H.
struct CorrelationContext {
  double phi = 0.0;
  MatrixXd omega;
  CholeskyFactor chol;
  MatrixXd omega_inv;
  double log_det = 0.0;
  bool identity = false;

  static CorrelationContext build(const DistanceMatrix& D, double phi);
  static CorrelationContext build_identity(int n);
  int n() const { return chol.dimension; }
};

}  // namespace lacsh
