#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lacsh/model.hpp"
#include "lacsh/rng.hpp"

namespace lacsh {

struct McmcConfig {
  std::int64_t n_scans = 120000;
  std::int64_t burn_in = 20000;
  int thin = 10;
  std::uint64_t seed = 1;
  int adapt_start = 200;
  double proposal_scale_v = 2.38;  // 5 improves mixing on slow targets
  double mixture_weight = 0.9;
  int anchor_index = 0;  // must equal the dataset's anchor
  ModelVariant variant = ModelVariant::lacsh;
  OutcomeTerms terms = OutcomeTerms::full;
  int n_chains = 1;
  int chain_index = 0;
  double earth_radius = kEarthRadiusMm;
  std::int64_t progress_every = 0;  // 0 = auto, -1 = silent
  std::int64_t checkpoint_every = 0;  // 0 = only at completion/error

  // Update switches; disabling a step freezes those parameters (used by the
  // validation suite to isolate conditionals).
  bool update_H = true;
  bool update_a = true;
  bool update_sigma_Y = true;
  bool update_sigma2_T = true;
  bool update_gamma = true;
  bool update_block = true;
  bool block_includes_coeffs = true;
  bool block_includes_sigma2H = true;
  bool block_includes_phi = true;

  void validate(const Dataset& data) const;
};

struct ChainStore {
  std::vector<ParameterState> draws;  // post burn-in, thinned
  std::vector<std::int64_t> scan_index;
  std::vector<std::uint8_t> accepted;  // block acceptance at the retained scan
  std::int64_t acceptance_count = 0;
  std::int64_t block_steps = 0;
  MatrixXd proposal_covariance_snapshot;
  std::uint64_t seed = 0;
  McmcConfig config;

  double acceptance_rate() const {
    return block_steps > 0 ? static_cast<double>(acceptance_count) / block_steps : 0.0;
  }
};

// Random-walk Metropolis with the scan-indexed proposal: narrow
// MVN(u, 0.01 I/d) while s <= adapt_start, afterwards the mixture
// w * MVN(u, v^2 S_s / d) + (1-w) * MVN(u, 0.01 I/d) with S_s the running
// empirical covariance of all past block states.
class AdaptiveMhBlock {
 public:
  AdaptiveMhBlock(int dim, int adapt_start, double v, double mixture_weight);

  std::pair<VectorXd, bool> step(const VectorXd& u,
                                 const std::function<double(const VectorXd&)>& log_target,
                                 RngStream& rng);
  void accumulate(const VectorXd& u);

  MatrixXd empirical_covariance() const;
  std::int64_t scans() const { return scan_; }
  std::int64_t samples() const { return count_; }

  // flat serialization for checkpoints: scan, count, mean, scatter
  std::vector<double> serialize() const;
  void deserialize(const std::vector<double>& raw);

 private:
  int dim_;
  int adapt_start_;
  double v_;
  double weight_;
  std::int64_t scan_ = 0;
  std::int64_t count_ = 0;
  VectorXd mean_;
  MatrixXd scatter_;
};

// --- Appendix-style single updates (exposed for conditional testing) ---

// Step 1: per-site normal full conditional for every non-anchor H_i,
// ascending unit index. mu is the current H-level mean.
void update_H_nonanchor(ParameterState& state, const Dataset& data,
                        const CorrelationContext& ctx, const VectorXd& mu,
                        RngStream& rng);

// Conditional (mean, var) the step-1 update draws from at site i, given the
// current state; exposed for oracles.
std::pair<double, double> h_site_conditional(const ParameterState& state,
                                             const Dataset& data,
                                             const CorrelationContext& ctx,
                                             const VectorXd& mu, int i);

// Step 2: conjugate MVN update of the loadings.
void update_loadings(ParameterState& state, const Dataset& data, const PriorSpec& priors,
                     RngStream& rng);

// Step 3: inverse-Wishart update of Sigma_Y.
void update_Sigma_Y(ParameterState& state, const Dataset& data, const PriorSpec& priors,
                    RngStream& rng);

// Step 4: inverse-gamma update of sigma2_T.
void update_sigma2_T(ParameterState& state, const Dataset& data, const PriorSpec& priors,
                     RngStream& rng);

// Step 5: cut-feedback MVN update of gamma; ignores the outcome level.
void update_gamma_cutfeedback(ParameterState& state, const Dataset& data,
                              const PriorSpec& priors, RngStream& rng);

// Block coordinate packing for step 6 (beta or zeta, log sigma2_H, log phi,
// H_anchor), in this order, restricted to the coordinates the config samples.
std::vector<std::string> block_coordinate_names(const McmcConfig& config,
                                                const Dataset& data);
VectorXd pack_block(const ParameterState& state, const McmcConfig& config,
                    const Dataset& data);
void unpack_block(const VectorXd& u, const McmcConfig& config, const Dataset& data,
                  ParameterState& state);

struct Checkpoint {
  std::int64_t completed_scans = 0;
  ParameterState state;
  std::vector<double> block_accumulators;
  std::int64_t acceptance_count = 0;
  std::int64_t block_steps = 0;
  std::array<std::array<std::uint64_t, Philox4x64::kStateWords>, 6> rng_states{};
  McmcConfig config;
};

void write_checkpoint(const std::string& path, const Checkpoint& ckpt,
                      const Dataset& data);
Checkpoint read_checkpoint(const std::string& path, const Dataset& data);

// Runs the fixed scan order (H non-anchor, a, Sigma_Y, sigma2_T, gamma with
// GPS refresh, adaptive MH block). Each step consumes its own derived RNG
// stream so the (gamma, sigma2_T) sub-chain is untouched by the rest of the
// model. On error a resumable checkpoint is written to checkpoint_path.
ChainStore run_chain(const McmcConfig& config, const Dataset& data,
                     const PriorSpec& priors = {},
                     const std::string& checkpoint_path = "",
                     const Checkpoint* resume = nullptr);

// Independent chains (seed shared, streams split by chain index), capped by
// LACSH_THREADS.
std::vector<ChainStore> run_chains(const McmcConfig& config, const Dataset& data,
                                   const PriorSpec& priors = {});

// --- chain persistence ---

struct McmcMeta {
  ModelVariant variant = ModelVariant::lacsh;
  OutcomeTerms terms = OutcomeTerms::full;
  std::uint64_t seed = 0;
  std::int64_t n_scans = 0;
  std::int64_t burn_in = 0;
  int thin = 1;
  int adapt_start = 200;
  double proposal_scale_v = 2.38;
  double mixture_weight = 0.9;
  int anchor_index = 0;
  int N = 0, P = 0, K = 0, Q = 0;
  double acceptance_rate = 0.0;
  std::int64_t retained = 0;
};

// Scalar parameter columns of the wide chain CSV, in order.
std::vector<std::string> chain_columns(ModelVariant variant, int N, int P, int K, int Q);

// Row packing between ParameterState and the wide CSV layout.
struct RowCodec {
  ModelVariant variant;
  int N, P, K, Q;
  int width() const;
  VectorXd encode(const ParameterState& state) const;
  ParameterState decode(const VectorXd& row) const;
};

struct ChainTable {
  std::vector<std::string> names;
  MatrixXd values;  // retained draws x parameters
  std::vector<std::int64_t> scan;
  std::vector<std::uint8_t> accepted;
  McmcMeta meta;

  int column(const std::string& name) const;
  std::vector<double> column_values(const std::string& name) const;
  ParameterState state_at(int row) const;
};

ChainTable chain_table(const ChainStore& store, const Dataset& data);
void write_chain_csv(const std::string& path, const ChainStore& store, const Dataset& data);
void write_chain_meta(const std::string& path, const ChainStore& store, const Dataset& data);
ChainTable read_chain_csv(const std::string& csv_path, const std::string& meta_path = "");

}  // namespace lacsh
