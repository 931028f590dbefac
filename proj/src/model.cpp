#include "lacsh/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lacsh/error.hpp"
#include "lacsh/stats.hpp"

namespace lacsh {

ModelVariant parse_model_variant(const std::string& s) {
  if (s == "base_lhfi") return ModelVariant::base_lhfi;
  if (s == "lacsh") return ModelVariant::lacsh;
  throw ConfigError("unknown model variant: " + s);
}

OutcomeTerms parse_outcome_terms(const std::string& s) {
  if (s == "full") return OutcomeTerms::full;
  if (s == "linear_only") return OutcomeTerms::linear_only;
  throw ConfigError("unknown outcome terms: " + s);
}

std::string model_variant_name(ModelVariant v) {
  return v == ModelVariant::base_lhfi ? "base_lhfi" : "lacsh";
}

std::string outcome_terms_name(OutcomeTerms t) {
  return t == OutcomeTerms::full ? "full" : "linear_only";
}

ParameterState ParameterState::initial(const Dataset& data, ModelVariant variant) {
  ParameterState s;
  const int N = data.n(), P = data.p();
  s.a = VectorXd::Ones(P);
  s.H = VectorXd::Zero(N);
  s.H[data.anchor_index] = -0.1;
  s.Sigma_Y = MatrixXd::Identity(P, P);
  s.beta = VectorXd::Zero(6);
  s.gamma = VectorXd::Zero(1 + data.k() + data.q());
  s.sigma2_T = 1.0;
  s.sigma2_H = 1.0;
  s.phi = 1.0;
  if (variant == ModelVariant::base_lhfi) s.zeta = VectorXd::Zero(2 + data.k() + data.q());
  return s;
}

double gps_density(double t, const VectorXd& z, const VectorXd& gamma, double sigma2_T) {
  if (z.size() != gamma.size())
    throw LengthMismatchError("gps_density: z and gamma length mismatch");
  return normal_pdf(t, z.dot(gamma), sigma2_T);
}

VectorXd gps_vector(const Dataset& data, const VectorXd& gamma, double sigma2_T) {
  const MatrixXd Z = data.Zstar();
  if (Z.cols() != gamma.size())
    throw LengthMismatchError("gps_vector: gamma length mismatch");
  VectorXd fitted = Z * gamma;
  VectorXd R(data.n());
  for (int i = 0; i < data.n(); ++i) R[i] = normal_pdf(data.T[i], fitted[i], sigma2_T);
  return R;
}

double h_mean_scalar(const VectorXd& beta, double t, double r) {
  return beta[0] + beta[1] * t + beta[2] * t * t + beta[3] * r + beta[4] * r * r +
         beta[5] * t * r;
}

VectorXd h_mean(const VectorXd& beta, const VectorXd& T, const VectorXd& R) {
  if (beta.size() != 6) throw LengthMismatchError("h_mean: beta must have 6 entries");
  if (T.size() != R.size()) throw LengthMismatchError("h_mean: T and R length mismatch");
  VectorXd mu(T.size());
  for (int i = 0; i < T.size(); ++i) mu[i] = h_mean_scalar(beta, T[i], R[i]);
  return mu;
}

VectorXd h_level_mean(const ParameterState& state, const Dataset& data,
                      ModelVariant variant, const VectorXd& R) {
  if (variant == ModelVariant::lacsh) return h_mean(state.beta, data.T, R);
  return data.Wstar() * state.zeta;
}

std::vector<int> active_beta_indices(OutcomeTerms terms) {
  if (terms == OutcomeTerms::full) return {0, 1, 2, 3, 4, 5};
  return {0, 1, 3};
}

std::pair<double, double> anchor_conditional(const VectorXd& H, const VectorXd& mu,
                                             const CorrelationContext& ctx,
                                             double sigma2_H, int anchor) {
  // With Q = Omega^-1 / sigma2_H: D = 1/Q_aa, m = H_a - (Q r)_a / Q_aa.
  const VectorXd r = H - mu;
  const double q_aa = ctx.omega_inv(anchor, anchor);
  const double qr_a = ctx.omega_inv.row(anchor).dot(r);
  const double cond_var = sigma2_H / q_aa;
  const double cond_mean = H[anchor] - qr_a / q_aa;
  return {cond_mean, cond_var};
}

namespace {

double log_normal_density(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * std::log(2.0 * M_PI * var) - 0.5 * d * d / var;
}

}  // namespace

double h_level_log_density(const ParameterState& state, const Dataset& data,
                           const CorrelationContext& ctx, const PriorSpec& priors,
                           ModelVariant variant, OutcomeTerms terms, const VectorXd& R) {
  const int N = data.n();
  const int anchor = data.anchor_index;
  if (!(state.sigma2_H > 0.0))
    throw NonpositiveVarianceError("h_level_log_density: sigma2_H must be > 0");
  if (state.H[anchor] >= 0.0) return -std::numeric_limits<double>::infinity();

  const VectorXd mu = h_level_mean(state, data, variant, R);
  const VectorXd r = state.H - mu;
  const VectorXd omega_inv_r = ctx.omega_inv * r;
  const double quad = r.dot(omega_inv_r) / state.sigma2_H;
  double log_dens = -0.5 * (N * std::log(2.0 * M_PI) + N * std::log(state.sigma2_H) +
                            ctx.log_det + quad);

  // anchored TMVN: divide by the conditional truncation probability
  const double q_aa = ctx.omega_inv(anchor, anchor);
  const double cond_var = state.sigma2_H / q_aa;
  const double cond_mean = state.H[anchor] - omega_inv_r[anchor] / q_aa;
  const double trunc_prob = normal_cdf(-cond_mean / std::sqrt(cond_var));
  if (trunc_prob <= 0.0) return -std::numeric_limits<double>::infinity();
  log_dens -= std::log(trunc_prob);

  if (variant == ModelVariant::lacsh) {
    for (int k : active_beta_indices(terms))
      log_dens += log_normal_density(state.beta[k], priors.coef_mean, priors.coef_var);
    log_dens += log_normal_density(std::log(state.sigma2_H), priors.log_sigma2H_mean,
                                   priors.log_sigma2H_var);
    log_dens += log_normal_density(std::log(state.phi), priors.log_phi_mean,
                                   priors.log_phi_var);
  } else {
    for (int k = 0; k < state.zeta.size(); ++k)
      log_dens += log_normal_density(state.zeta[k], priors.coef_mean, priors.coef_var);
    log_dens += log_normal_density(std::log(state.sigma2_H), priors.log_sigma2H_mean,
                                   priors.log_sigma2H_var);
  }
  return log_dens;
}

VectorXd y_log_likelihood(const ParameterState& state, const MatrixXd& Y) {
  const int N = static_cast<int>(Y.rows());
  const int P = static_cast<int>(Y.cols());
  if (state.a.size() != P || state.H.size() != N)
    throw LengthMismatchError("y_log_likelihood: dimension mismatch");
  CholeskyFactor chol = cholesky(state.Sigma_Y);
  double log_det = 0.0;
  for (int i = 0; i < P; ++i) log_det += 2.0 * std::log(chol.L(i, i));
  VectorXd out(N);
  const double c = -0.5 * (P * std::log(2.0 * M_PI) + log_det);
  for (int i = 0; i < N; ++i) {
    VectorXd v = Y.row(i).transpose() - state.a * state.H[i];
    VectorXd u = chol.L.triangularView<Eigen::Lower>().solve(v);
    out[i] = c - 0.5 * u.squaredNorm();
  }
  return out;
}

double y_unit_log_likelihood(const ParameterState& state, const MatrixXd& Y, int unit) {
  const int P = static_cast<int>(Y.cols());
  CholeskyFactor chol = cholesky(state.Sigma_Y);
  double log_det = 0.0;
  for (int i = 0; i < P; ++i) log_det += 2.0 * std::log(chol.L(i, i));
  VectorXd v = Y.row(unit).transpose() - state.a * state.H[unit];
  VectorXd u = chol.L.triangularView<Eigen::Lower>().solve(v);
  return -0.5 * (P * std::log(2.0 * M_PI) + log_det + u.squaredNorm());
}

VectorXd base_lhfi_residuals(const MatrixXd& H_draws, const Dataset& data,
                             const MatrixXd& zeta_draws) {
  const int S = static_cast<int>(H_draws.rows());
  const int N = data.n();
  if (H_draws.cols() != N || zeta_draws.rows() != S ||
      zeta_draws.cols() != 2 + data.k() + data.q())
    throw ShapeMismatchError("base_lhfi_residuals: draw shapes do not align");
  const MatrixXd W = data.Wstar();
  VectorXd out(N);
  std::vector<double> buf(S);
  for (int i = 0; i < N; ++i) {
    for (int s = 0; s < S; ++s)
      buf[s] = H_draws(s, i) - W.row(i).dot(zeta_draws.row(s));
    std::sort(buf.begin(), buf.end());
    out[i] = quantile_type7_sorted(buf, 0.5);
  }
  return out;
}

}  // namespace lacsh
