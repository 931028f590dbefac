#pragma once

#include <array>
#include <cstdint>

namespace lacsh {

// Philox4x64-10 counter-based generator (Salmon et al. 2011), with the same
// round constants as Random123 and NumPy. A stream is identified by the
// 128-bit key (seed, stream_id); outputs are a pure function of
// (key, counter), so any position is reproducible from the serialized state.
class Philox4x64 {
 public:
  static constexpr int kStateWords = 11;

  Philox4x64(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Full engine state (key, counter, buffer fill) for checkpointing.
  std::array<std::uint64_t, kStateWords> state() const;
  void set_state(const std::array<std::uint64_t, kStateWords>& s);

  std::uint64_t seed() const { return key_[0]; }
  std::uint64_t stream_id() const { return key_[1]; }

 private:
  void refill();

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 4> buf_;
  int buf_pos_;  // next index into buf_, 4 = empty
};

// Seedable random stream with the distributions the samplers need.
// Normal deviates use the inverse-CDF method (Wichura's AS 241), so two
// implementations of this class agree at the uniform-deviate level.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : engine_(seed, stream_id) {}

  // Child stream derived by hashing (stream_id, purpose); documented so
  // other implementations can reproduce the split tree.
  RngStream substream(std::uint64_t purpose) const;

  std::uint64_t next_u64() { return engine_.next_u64(); }

  // Uniform on (0,1): ((x >> 11) + 0.5) * 2^-53.
  double uniform();
  double uniform(double lo, double hi);

  double normal();  // standard normal via inverse CDF
  double normal(double mean, double sd);

  double exponential();            // rate 1
  double gamma(double shape);      // scale 1, Marsaglia-Tsang
  double chi_square(double df);    // 2 * gamma(df/2)

  Philox4x64& engine() { return engine_; }
  const Philox4x64& engine() const { return engine_; }

 private:
  Philox4x64 engine_;
};

// Standard normal CDF, quantile (AS 241) and density.
double normal_cdf(double x);
double normal_quantile(double p);
double std_normal_pdf(double x);

// SplitMix64 hash step, used for substream derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace lacsh
