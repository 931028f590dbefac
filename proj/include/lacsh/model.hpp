#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lacsh/data.hpp"
#include "lacsh/spatial.hpp"

namespace lacsh {

enum class ModelVariant { base_lhfi, lacsh };
enum class OutcomeTerms { full, linear_only };

ModelVariant parse_model_variant(const std::string& s);
OutcomeTerms parse_outcome_terms(const std::string& s);
std::string model_variant_name(ModelVariant v);
std::string outcome_terms_name(OutcomeTerms t);

// One MCMC state. The lacsh variant uses beta/gamma/sigma2_T/phi; the base
// variant uses zeta with a diagonal H covariance.
struct ParameterState {
  VectorXd a;        // P health loadings
  VectorXd H;        // N latent health, H[anchor] < 0
  MatrixXd Sigma_Y;  // P x P
  VectorXd beta;     // 6: beta0..beta5
  VectorXd gamma;    // 1+K+Q
  double sigma2_T = 1.0;
  double sigma2_H = 1.0;
  double phi = 1.0;
  VectorXd zeta;     // 2+K+Q, base variant only

  static ParameterState initial(const Dataset& data, ModelVariant variant);
};

struct PriorSpec {
  double coef_mean = 0.0;
  double coef_var = 100.0;  // a_j, beta_k, gamma, zeta
  double log_sigma2H_mean = 0.0;
  double log_sigma2H_var = 100.0;
  double log_phi_mean = 0.0;
  double log_phi_var = 100.0;
  double sigmaY_df_offset = 2.0;  // df = P + offset
  double sigma2T_shape = 1.0;
  double sigma2T_scale = 0.01;
};

// Generalized propensity score: conditional density of the treatment at t.
double gps_density(double t, const VectorXd& z, const VectorXd& gamma, double sigma2_T);

// R_i for every unit at the observed treatment values.
VectorXd gps_vector(const Dataset& data, const VectorXd& gamma, double sigma2_T);

// beta0 + beta1 T + beta2 T^2 + beta3 R + beta4 R^2 + beta5 T R, elementwise.
VectorXd h_mean(const VectorXd& beta, const VectorXd& T, const VectorXd& R);
double h_mean_scalar(const VectorXd& beta, double t, double r);

// H-level mean for the given variant (lacsh: quadratic GPS form; base: W* zeta).
VectorXd h_level_mean(const ParameterState& state, const Dataset& data,
                      ModelVariant variant, const VectorXd& R);

// Log density of the H level plus the priors of the parameters sampled in
// the Metropolis block. The anchored TMVN is the joint MVN times the
// indicator, divided by the one-dimensional conditional truncation
// probability of the anchor coordinate; -inf when H[anchor] >= 0.
double h_level_log_density(const ParameterState& state, const Dataset& data,
                           const CorrelationContext& ctx, const PriorSpec& priors,
                           ModelVariant variant, OutcomeTerms terms, const VectorXd& R);

// Per-unit log MVN(y_i; a H_i, Sigma_Y); feeds the sampler and CPO/LPML.
VectorXd y_log_likelihood(const ParameterState& state, const MatrixXd& Y);
double y_unit_log_likelihood(const ParameterState& state, const MatrixXd& Y, int unit);

// Per-unit posterior median of H - W* zeta across aligned draws.
VectorXd base_lhfi_residuals(const MatrixXd& H_draws, const Dataset& data,
                             const MatrixXd& zeta_draws);

// Conditional mean/variance of the anchor coordinate given the others under
// MVN(mu, sigma2_H * Omega); used by the truncation normalizer.
std::pair<double, double> anchor_conditional(const VectorXd& H, const VectorXd& mu,
                                             const CorrelationContext& ctx,
                                             double sigma2_H, int anchor);

// Index set of beta coefficients sampled under the outcome-terms setting.
std::vector<int> active_beta_indices(OutcomeTerms terms);

}  // namespace lacsh
