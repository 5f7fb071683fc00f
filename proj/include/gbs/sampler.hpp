#pragma once

#include <cstdint>
#include <vector>

#include "gbs/probability.hpp"

namespace gbs {

/// Counter-based RNG with one independent stream per (seed, shot) pair:
/// the stream state is splitmix64(seed) xor shot * 0xd1b54a32d192ed03, and
/// uniform() advances it by one splitmix64 step, taking the top 53 bits.
/// Draws depend only on (seed, shot, draw index), so shots can be generated
/// in any order or in parallel with identical results.
class ShotRng {
 public:
  ShotRng(std::uint64_t seed, std::uint64_t shot);
  /// Uniform in [0, 1).
  double uniform();

 private:
  std::uint64_t state_;
};

struct SampleConfig {
  std::uint64_t seed = 0;
  int n_max = 0;        // total-photon truncation
  int per_mode_max = 1; // per-mode truncation, >= 1
  enum class Method { enumerate, chain } method = Method::enumerate;
};

struct SampleResult {
  std::vector<PhotonPattern> samples;  // ordered by shot index
  int aborted = 0;                     // chain shots lost to underflow
};

/// Inverse-CDF draws from the truncated table, renormalized by its mass.
/// Refuses to sample when the retained mass is below 0.5.
SampleResult sample_enumerate(const GaussianState& state,
                              const SampleConfig& cfg, int shots);

/// Mode-by-mode conditional sampling: the k-mode marginal is evaluated on the
/// state reduced to the leading k modes, and the conditional tail beyond the
/// truncation bounds is renormalized away. Underflowing shots are dropped and
/// counted, never retried.
SampleResult sample_chain(const GaussianState& state, const SampleConfig& cfg,
                          int shots);

}  // namespace gbs
