#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lacsh/rng.hpp"

namespace lacsh {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Lower-triangular Cholesky factor, L * L^T = A.
struct CholeskyFactor {
  MatrixXd L;
  int dimension = 0;
};

// Throws NotPositiveDefiniteError; input must be symmetric to 1e-10.
CholeskyFactor cholesky(const MatrixXd& A);

// Cholesky with a single retry after adding jitter * I to the diagonal.
// Throws FactorizationFailureError if the jittered attempt also fails.
CholeskyFactor cholesky_with_jitter(const MatrixXd& A, double jitter);

double normal_pdf(double x, double mean, double var);

// Log density of MVN(mean, L L^T) at x, given the Cholesky factor.
double mvn_log_pdf(const VectorXd& x, const VectorXd& mean, const CholeskyFactor& chol);

// mean + L z with z iid standard normal drawn in index order.
VectorXd sample_mvn_chol(const VectorXd& mean, const CholeskyFactor& chol, RngStream& rng);
VectorXd sample_mvn(const VectorXd& mean, const MatrixXd& cov, RngStream& rng);

// Draw from N(mean, var) conditioned on the value being < upper.
// Inverse CDF in the bulk; Robert's exponential rejection when the
// truncation point is more than 4 sd below the mean.
double sample_truncated_normal_upper(double mean, double var, double upper, RngStream& rng);

// Inverse-Wishart(df, scale) via Bartlett decomposition on the inverted scale.
MatrixXd sample_inverse_wishart(double df, const MatrixXd& scale, RngStream& rng);

// Inverse-gamma with density scale^shape/Gamma(shape) x^-(shape+1) exp(-scale/x).
double sample_inverse_gamma(double shape, double scale, RngStream& rng);

// Scores of the first principal component of the column-centered matrix.
// Sign fixed so the loading with the largest magnitude is positive.
VectorXd first_principal_component(const MatrixXd& X);

struct RegressionFit {
  VectorXd coefficients;
  double residual_se = 0.0;
  VectorXd coefficient_se;
  VectorXd p_values;   // two-sided Wald, normal approximation
  bool separation = false;
  int iterations = 0;
};

// Ordinary least squares; X must include any intercept column. residual_se
// uses denominator n - k.
RegressionFit fit_linear_regression(const MatrixXd& X, const VectorXd& y);

// Logistic regression by IRLS (max 100 iterations, convergence when the
// largest coefficient change is < 1e-8). Quasi-separation is reported via
// fit.separation with p-values forced to 0.
RegressionFit fit_logistic_regression(const MatrixXd& X, const VectorXd& y);

// Type-7 empirical quantile of an unsorted sample.
double quantile_type7(std::vector<double> values, double q);
// Same, for a sample that is already sorted ascending.
double quantile_type7_sorted(const std::vector<double>& sorted, double q);

// Effective sample size via Geyer's initial positive sequence.
double effective_sample_size(const std::vector<double>& chain);

}  // namespace lacsh
