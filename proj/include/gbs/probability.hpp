#pragma once

#include <map>

#include "gbs/gaussian.hpp"

namespace gbs {

/// Truncated probability table over photon patterns, keyed lexicographically.
struct ProbabilityTable {
  std::map<PhotonPattern, double> entries;
  int n_max = 0;
  int per_mode_max = 0;
  double mass = 0.0;
};

/// Pr(pattern) = prefactor / (n! sqrt|sigma_q|) * displaced_haf_sum(A_S, F_S).
/// Without displacement this is Haf(A_S) / (n! sqrt|sigma_q|).
double pattern_probability(const GaussianState& state,
                           const PhotonPattern& pattern);
double pattern_probability(const SystemMatrices& sys,
                           const PhotonPattern& pattern);

/// Pure-squeezing route: |Haf(B_S)|^2 / (n! sqrt|sigma_q|) with
/// sqrt|sigma_q| = prod_j cosh r_j. Returns 0 for odd photon totals; rejects
/// instances carrying displacement.
double pattern_probability_squeezed(const GbsInstance& inst,
                                    const PhotonPattern& pattern);

/// Thermal input light through t, evaluated by the same hafnian pipeline.
double thermal_probability(const Eigen::VectorXd& mean_photons,
                           const Eigen::MatrixXcd& t,
                           const PhotonPattern& pattern);

/// All patterns with total <= n_max and per-mode count <= per_mode_max,
/// in lexicographic order, with the retained mass reported.
ProbabilityTable enumerate_table(const GaussianState& state, int n_max,
                                 int per_mode_max);

}  // namespace gbs
