#pragma once

#include "gbs/gaussian.hpp"

namespace gbs {

/// Scattershot setup: M herald modes paired with M sampling modes, equal
/// squeezing everywhere, and an M x M interferometer on the sampling arm.
struct SbsInstance {
  double squeezing = 0.0;
  Eigen::MatrixXcd unitary;  // sampling-arm interferometer

  Eigen::Index modes() const { return unitary.rows(); }
  void validate() const;
};

/// The equivalent 2M-mode squeezer experiment: herald modes occupy indices
/// 0..M-1 and sampling modes M..2M-1; pair j couples modes (j, j+M) through
/// the phase-shifter/beam-splitter front end diag(1, i) followed by
/// [[1, 1], [-1, 1]]/sqrt(2), after which the sampling arm passes through the
/// given interferometer and the herald arm through the identity.
GbsInstance sbs_to_gbs(const SbsInstance& inst);

/// |Perm(T_S)|^2 / (n! h!) for {0,1} patterns: columns of T are picked by the
/// herald (input) pattern, rows by the sample (output) pattern. Returns 0 when
/// the photon totals disagree.
double sbs_conditional(const SbsInstance& inst, const PhotonPattern& sample,
                       const PhotonPattern& herald);

struct BayesCheck {
  double gbs_joint;        // combined-pattern probability of the 2M-mode state
  double herald_prob;      // sech^(2M)(r) tanh^(2N)(r)
  double sbs_conditional;  // permanent route
  double residual;         // |gbs_joint / herald_prob - sbs_conditional|
};

/// Executable form of the scattershot-as-GBS equivalence for one pattern pair.
BayesCheck bayes_check(const SbsInstance& inst, const PhotonPattern& sample,
                       const PhotonPattern& herald);

}  // namespace gbs
