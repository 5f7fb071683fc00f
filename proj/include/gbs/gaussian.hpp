#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gbs/linalg.hpp"

namespace gbs {

/// Photon counts per output mode.
using PhotonPattern = std::vector<int>;

int total_photons(const PhotonPattern& pattern);

/// Exact up to 20!, double-precision products beyond.
double factorial(int n);

/// prod_j n_j!
double pattern_factorial(const PhotonPattern& pattern);

/// Experiment description: single-mode squeezers feeding an interferometer,
/// with optional coherent displacement at the input modes.
struct GbsInstance {
  Eigen::VectorXd squeezing;      // r_j >= 0, one per mode
  Eigen::MatrixXcd unitary;       // modes x modes
  Eigen::VectorXcd displacement;  // empty, or one amplitude per input mode

  Eigen::Index modes() const { return unitary.rows(); }
  bool has_displacement() const { return displacement.size() > 0; }
  void validate() const;
};

/// Gaussian state in the fixed operator ordering [a_1..a_M, a_1^+..a_M^+]:
/// a 2M x 2M covariance matrix plus a length-2M displacement vector with
/// d[j + M] = conj(d[j]).
struct GaussianState {
  Eigen::MatrixXcd sigma;
  Eigen::VectorXcd d;

  Eigen::Index modes() const { return sigma.rows() / 2; }
  void validate() const;
};

/// Quantities derived from one state that every pattern probability needs.
struct SystemMatrices {
  Eigen::MatrixXcd sigma_q;   // sigma + I/2
  Complex det_sigma_q;        // real positive within 1e-9 relative
  Eigen::MatrixXcd a_mat;     // [[0,I],[I,0]] (I - sigma_q^-1), symmetrized
  Eigen::VectorXcd f_vec;     // d^+ sigma_q^-1, zero without displacement
  double prefactor;           // exp(-d^+ sigma_q^-1 d / 2)

  Eigen::Index modes() const { return sigma_q.rows() / 2; }
};

/// Output covariance sigma = (T + T*) S S^+ (T^+ + T^t) / 2 for squeezer
/// inputs, with the displacement propagated linearly through T.
GaussianState build_state(const GbsInstance& inst);

/// Thermal light with the given per-mode mean photon numbers sent through t.
GaussianState thermal_state(const Eigen::VectorXd& mean_photons,
                            const Eigen::MatrixXcd& t);

SystemMatrices system_matrices(const GaussianState& state);

/// B = T diag(tanh r_j) T^t, the pure-squeezing block of the A matrix.
Eigen::MatrixXcd b_matrix(const GbsInstance& inst);

/// Keep only the listed modes; rows/columns j and j+M are retained for each
/// kept mode j and re-indexed. The reduced state is again Gaussian.
GaussianState reduce_modes(const GaussianState& state,
                           const std::vector<int>& keep);

/// Doubled index list for a pattern: each mode j with n_j photons contributes
/// j repeated n_j times, followed by j+M repeated n_j times, ascending.
std::vector<int> pattern_indices(const PhotonPattern& pattern,
                                 Eigen::Index modes);

/// 2N x 2N submatrix of a 2M x 2M matrix on the doubled pattern indices.
Eigen::MatrixXcd select_submatrix(const Eigen::Ref<const Eigen::MatrixXcd>& m,
                                  const PhotonPattern& pattern);

/// N x N submatrix of an M x M matrix with index j repeated n_j times.
Eigen::MatrixXcd select_b_submatrix(
    const Eigen::Ref<const Eigen::MatrixXcd>& b, const PhotonPattern& pattern);

}  // namespace gbs
