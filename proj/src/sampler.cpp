#include "gbs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace gbs {

namespace {

std::uint64_t splitmix_step(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void check_config(const SampleConfig& cfg) {
  if (cfg.n_max < 0) {
    throw std::invalid_argument("sampler: n_max must be non-negative");
  }
  if (cfg.per_mode_max < 1) {
    throw std::invalid_argument("sampler: per_mode_max must be at least one");
  }
}

}  // namespace

ShotRng::ShotRng(std::uint64_t seed, std::uint64_t shot) {
  std::uint64_t s = seed;
  state_ = splitmix_step(s) ^ (shot * 0xd1b54a32d192ed03ull);
}

double ShotRng::uniform() {
  return static_cast<double>(splitmix_step(state_) >> 11) * 0x1.0p-53;
}

SampleResult sample_enumerate(const GaussianState& state,
                              const SampleConfig& cfg, int shots) {
  check_config(cfg);
  if (shots < 0) throw std::invalid_argument("sampler: negative shot count");
  const ProbabilityTable table =
      enumerate_table(state, cfg.n_max, cfg.per_mode_max);
  if (table.mass < 0.5) {
    throw std::runtime_error(
        "sample_enumerate: truncated mass below 0.5; tighten the state or raise the bounds");
  }

  std::vector<const PhotonPattern*> patterns;
  std::vector<double> cumulative;
  patterns.reserve(table.entries.size());
  cumulative.reserve(table.entries.size());
  double running = 0.0;
  for (const auto& [pattern, p] : table.entries) {
    running += p;
    patterns.push_back(&pattern);
    cumulative.push_back(running);
  }

  SampleResult result;
  result.samples.reserve(shots);
  for (int shot = 0; shot < shots; ++shot) {
    ShotRng rng(cfg.seed, static_cast<std::uint64_t>(shot));
    const double u = rng.uniform() * table.mass;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t index =
        std::min(static_cast<std::size_t>(it - cumulative.begin()),
                 patterns.size() - 1);
    result.samples.push_back(*patterns[index]);
  }
  return result;
}

SampleResult sample_chain(const GaussianState& state, const SampleConfig& cfg,
                          int shots) {
  check_config(cfg);
  if (shots < 0) throw std::invalid_argument("sampler: negative shot count");
  const Eigen::Index m = state.modes();

  // Marginal states over the leading k modes; dropping rows/columns of the
  // covariance is exact, the marginal of a Gaussian state is Gaussian.
  std::vector<SystemMatrices> marginal(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    if (k + 1 == m) {
      marginal[k] = system_matrices(state);
    } else {
      std::vector<int> keep(k + 1);
      std::iota(keep.begin(), keep.end(), 0);
      marginal[k] = system_matrices(reduce_modes(state, keep));
    }
  }

  // Conditional weight tables are shared across shots; draws depend only on
  // the per-shot stream, so memoization cannot change the sampled law.
  std::map<PhotonPattern, std::vector<double>> cumulative_by_prefix;
  auto conditional = [&](const PhotonPattern& prefix,
                         Eigen::Index mode) -> const std::vector<double>& {
    const auto found = cumulative_by_prefix.find(prefix);
    if (found != cumulative_by_prefix.end()) return found->second;
    const int limit =
        std::min(cfg.per_mode_max, cfg.n_max - total_photons(prefix));
    PhotonPattern extended = prefix;
    extended.push_back(0);
    std::vector<double> cumulative;
    cumulative.reserve(limit + 1);
    double running = 0.0;
    for (int count = 0; count <= limit; ++count) {
      extended.back() = count;
      running += pattern_probability(marginal[mode], extended);
      cumulative.push_back(running);
    }
    return cumulative_by_prefix.emplace(prefix, std::move(cumulative))
        .first->second;
  };

  SampleResult result;
  result.samples.reserve(shots);
  for (int shot = 0; shot < shots; ++shot) {
    ShotRng rng(cfg.seed, static_cast<std::uint64_t>(shot));
    PhotonPattern prefix;
    prefix.reserve(m);
    bool ok = true;
    for (Eigen::Index mode = 0; mode < m; ++mode) {
      const std::vector<double>& cumulative = conditional(prefix, mode);
      const double total = cumulative.back();
      if (!(total > 0.0) || !std::isfinite(total)) {
        ok = false;  // zero-probability prefix: drop the shot, keep the count
        break;
      }
      const double u = rng.uniform() * total;
      const auto it =
          std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const int count = static_cast<int>(
          std::min(static_cast<std::size_t>(it - cumulative.begin()),
                   cumulative.size() - 1));
      prefix.push_back(count);
    }
    if (ok) {
      result.samples.push_back(std::move(prefix));
    } else {
      ++result.aborted;
    }
  }
  return result;
}

}  // namespace gbs
