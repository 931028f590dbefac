#include "lacsh/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lacsh/error.hpp"

namespace lacsh {

CholeskyFactor cholesky(const MatrixXd& A) {
  if (A.rows() != A.cols()) throw NotPositiveDefiniteError("cholesky: matrix not square");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if (((A - A.transpose()).cwiseAbs().maxCoeff()) > 1e-10 * scale)
    throw NotPositiveDefiniteError("cholesky: matrix not symmetric to 1e-10");
  Eigen::LLT<MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefiniteError("cholesky: matrix not positive definite");
  return {llt.matrixL(), static_cast<int>(A.rows())};
}

CholeskyFactor cholesky_with_jitter(const MatrixXd& A, double jitter) {
  try {
    return cholesky(A);
  } catch (const NotPositiveDefiniteError&) {
    MatrixXd B = A;
    B.diagonal().array() += jitter;
    Eigen::LLT<MatrixXd> llt(B);
    if (llt.info() != Eigen::Success)
      throw FactorizationFailureError("cholesky failed after diagonal jitter");
    return {llt.matrixL(), static_cast<int>(A.rows())};
  }
}

double normal_pdf(double x, double mean, double var) {
  if (!(var > 0.0)) throw NonpositiveVarianceError("normal_pdf: var must be > 0");
  const double z = (x - mean) / std::sqrt(var);
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI * var);
}

double mvn_log_pdf(const VectorXd& x, const VectorXd& mean, const CholeskyFactor& chol) {
  const int n = chol.dimension;
  if (x.size() != n || mean.size() != n)
    throw LengthMismatchError("mvn_log_pdf: dimension mismatch");
  VectorXd u = chol.L.triangularView<Eigen::Lower>().solve(x - mean);
  double log_det = 0.0;
  for (int i = 0; i < n; ++i) log_det += std::log(chol.L(i, i));
  return -0.5 * n * std::log(2.0 * M_PI) - log_det - 0.5 * u.squaredNorm();
}

VectorXd sample_mvn_chol(const VectorXd& mean, const CholeskyFactor& chol, RngStream& rng) {
  VectorXd z(chol.dimension);
  for (int i = 0; i < chol.dimension; ++i) z[i] = rng.normal();
  return mean + chol.L.triangularView<Eigen::Lower>() * z;
}

VectorXd sample_mvn(const VectorXd& mean, const MatrixXd& cov, RngStream& rng) {
  return sample_mvn_chol(mean, cholesky(cov), rng);
}

double sample_truncated_normal_upper(double mean, double var, double upper, RngStream& rng) {
  if (!(var > 0.0)) throw NonpositiveVarianceError("truncated normal: var must be > 0");
  const double sd = std::sqrt(var);
  if (std::isinf(upper) && upper > 0) return mean + sd * rng.normal();
  const double b = (upper - mean) / sd;
  if (b >= -4.0) {
    const double pb = normal_cdf(b);
    const double z = normal_quantile(rng.uniform() * pb);
    return mean + sd * z;
  }
  // Deep tail: sample Z ~ N(0,1) | Z > a with a = -b via Robert (1995),
  // return the mirrored value.
  const double a = -b;
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a + rng.exponential() / alpha;
    const double d = z - alpha;
    if (rng.uniform() <= std::exp(-0.5 * d * d)) return mean - sd * z;
  }
}

MatrixXd sample_inverse_wishart(double df, const MatrixXd& scale, RngStream& rng) {
  const int p = static_cast<int>(scale.rows());
  if (!(df > p - 1)) throw InvalidDfError("inverse wishart: df must exceed dim - 1");
  CholeskyFactor scale_chol = cholesky(scale);
  // S = scale^{-1}; draw W ~ Wishart(df, S), return W^{-1} ~ IW(df, scale).
  MatrixXd identity = MatrixXd::Identity(p, p);
  MatrixXd Linv = scale_chol.L.triangularView<Eigen::Lower>().solve(identity);
  MatrixXd S = Linv.transpose() * Linv;
  CholeskyFactor LS = cholesky(S);
  MatrixXd A = MatrixXd::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    A(j, j) = std::sqrt(rng.chi_square(df - j));
    for (int i = j + 1; i < p; ++i) A(i, j) = rng.normal();
  }
  MatrixXd LA = LS.L.triangularView<Eigen::Lower>() * A;
  MatrixXd W = LA * LA.transpose();
  Eigen::LLT<MatrixXd> lltW(W);
  if (lltW.info() != Eigen::Success)
    throw NotPositiveDefiniteError("inverse wishart: degenerate draw");
  MatrixXd Winv = lltW.solve(identity);
  return 0.5 * (Winv + Winv.transpose());
}

double sample_inverse_gamma(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw InvalidParameterError("inverse gamma: shape and scale must be > 0");
  return scale / rng.gamma(shape);
}

VectorXd first_principal_component(const MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  const int k = static_cast<int>(X.cols());
  if (n < 2 || k < 1) throw DegenerateInputError("pca: need at least 2 rows, 1 column");
  MatrixXd Xc = X.rowwise() - X.colwise().mean();
  MatrixXd cov = (Xc.transpose() * Xc) / static_cast<double>(n - 1);
  if (cov.trace() <= 1e-14)
    throw DegenerateInputError("pca: all columns have zero variance");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(cov);
  VectorXd loading = es.eigenvectors().col(k - 1);  // largest eigenvalue last
  int imax = 0;
  loading.cwiseAbs().maxCoeff(&imax);
  if (loading[imax] < 0) loading = -loading;
  return Xc * loading;
}

namespace {

VectorXd wald_p_values(const VectorXd& coef, const VectorXd& se) {
  VectorXd p(coef.size());
  for (int j = 0; j < coef.size(); ++j) {
    if (se[j] > 0.0) {
      p[j] = 2.0 * normal_cdf(-std::fabs(coef[j]) / se[j]);
    } else {
      p[j] = (coef[j] == 0.0) ? 1.0 : 0.0;
    }
  }
  return p;
}

}  // namespace

RegressionFit fit_linear_regression(const MatrixXd& X, const VectorXd& y) {
  const int n = static_cast<int>(X.rows());
  const int k = static_cast<int>(X.cols());
  if (y.size() != n) throw LengthMismatchError("linear regression: X rows != y length");
  if (n <= k) throw RankDeficientError("linear regression: need n > k");
  Eigen::ColPivHouseholderQR<MatrixXd> qr(X);
  if (qr.rank() < k) throw RankDeficientError("linear regression: X is rank deficient");
  RegressionFit fit;
  fit.coefficients = qr.solve(y);
  VectorXd resid = y - X * fit.coefficients;
  const double ssr = resid.squaredNorm();
  fit.residual_se = std::sqrt(ssr / static_cast<double>(n - k));
  MatrixXd gram_inv = (X.transpose() * X).ldlt().solve(MatrixXd::Identity(k, k));
  fit.coefficient_se = (fit.residual_se * fit.residual_se * gram_inv.diagonal())
                           .cwiseMax(0.0).cwiseSqrt();
  fit.p_values = wald_p_values(fit.coefficients, fit.coefficient_se);
  return fit;
}

RegressionFit fit_logistic_regression(const MatrixXd& X, const VectorXd& y) {
  const int n = static_cast<int>(X.rows());
  const int k = static_cast<int>(X.cols());
  if (y.size() != n) throw LengthMismatchError("logistic regression: X rows != y length");
  if (n <= k) throw RankDeficientError("logistic regression: need n > k");
  bool any0 = false, any1 = false;
  for (int i = 0; i < n; ++i) {
    if (y[i] == 0.0) any0 = true;
    else if (y[i] == 1.0) any1 = true;
    else throw InvalidParameterError("logistic regression: y must be 0/1");
  }
  if (!any0 || !any1) throw SingleClassError("logistic regression: only one class present");

  RegressionFit fit;
  VectorXd beta = VectorXd::Zero(k);
  MatrixXd info(k, k);
  double prev_max_abs = 0.0;
  int growth_streak = 0;
  for (int iter = 0; iter < 100; ++iter) {
    VectorXd eta = X * beta;
    VectorXd mu(n), w(n);
    for (int i = 0; i < n; ++i) {
      mu[i] = 1.0 / (1.0 + std::exp(-eta[i]));
      w[i] = std::max(mu[i] * (1.0 - mu[i]), 1e-10);
    }
    info = X.transpose() * w.asDiagonal() * X;
    VectorXd score = X.transpose() * (y - mu);
    Eigen::LDLT<MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success)
      throw RankDeficientError("logistic regression: singular information matrix");
    VectorXd delta = ldlt.solve(score);
    beta += delta;
    fit.iterations = iter + 1;
    const double max_abs = beta.cwiseAbs().maxCoeff();
    growth_streak = (max_abs >= prev_max_abs) ? growth_streak + 1 : 0;
    prev_max_abs = max_abs;
    if (max_abs > 15.0 && growth_streak >= 3) {
      fit.separation = true;
      break;
    }
    if (delta.cwiseAbs().maxCoeff() < 1e-8) break;
  }
  fit.coefficients = beta;
  MatrixXd cov = info.ldlt().solve(MatrixXd::Identity(k, k));
  fit.coefficient_se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  if (fit.separation) {
    fit.p_values = VectorXd::Zero(k);
  } else {
    fit.p_values = wald_p_values(fit.coefficients, fit.coefficient_se);
  }
  return fit;
}

double quantile_type7_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw EmptyChainError("quantile of empty sample");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile_type7(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return quantile_type7_sorted(values, q);
}

double effective_sample_size(const std::vector<double>& chain) {
  const std::size_t n = chain.size();
  if (n < 4) return static_cast<double>(n);
  double mean = 0.0;
  for (double v : chain) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : chain) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (var <= 0.0) return static_cast<double>(n);
  auto acov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += (chain[i] - mean) * (chain[i + lag] - mean);
    return s / static_cast<double>(n);
  };
  // Geyer initial positive sequence over pair sums.
  double sum = 0.0;
  for (std::size_t lag = 1; lag + 1 < n; lag += 2) {
    const double pair = acov(lag) + acov(lag + 1);
    if (pair <= 0.0) break;
    sum += pair;
  }
  const double tau = 1.0 + 2.0 * sum / var;
  return static_cast<double>(n) / std::max(tau, 1.0);
}

}  // namespace lacsh
