#include "gbs/gaussian.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <set>

namespace gbs {

namespace {

double floor_tol(double norm, double rel) {
  return std::max(1e-12, rel * norm);
}

void validate_pattern(const PhotonPattern& pattern, Eigen::Index modes) {
  if (static_cast<Eigen::Index>(pattern.size()) != modes) {
    throw std::invalid_argument("pattern length must equal the mode count");
  }
  for (int n : pattern) {
    if (n < 0) throw std::invalid_argument("pattern counts must be non-negative");
  }
}

}  // namespace

int total_photons(const PhotonPattern& pattern) {
  int total = 0;
  for (int n : pattern) total += n;
  return total;
}

double factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  static const double exact[] = {
      1.0,
      1.0,
      2.0,
      6.0,
      24.0,
      120.0,
      720.0,
      5040.0,
      40320.0,
      362880.0,
      3628800.0,
      39916800.0,
      479001600.0,
      6227020800.0,
      87178291200.0,
      1307674368000.0,
      20922789888000.0,
      355687428096000.0,
      6402373705728000.0,
      121645100408832000.0,
      2432902008176640000.0};
  if (n <= 20) return exact[n];
  double result = exact[20];
  for (int k = 21; k <= n; ++k) result *= k;
  return result;
}

double pattern_factorial(const PhotonPattern& pattern) {
  double result = 1.0;
  for (int n : pattern) result *= factorial(n);
  return result;
}

void GbsInstance::validate() const {
  const Eigen::Index m = modes();
  if (m < 1) throw std::invalid_argument("instance: at least one mode required");
  if (unitary.cols() != m) {
    throw std::invalid_argument("instance: interferometer must be square");
  }
  if (squeezing.size() != m) {
    throw std::invalid_argument("instance: squeezing length must equal the mode count");
  }
  if (!squeezing.allFinite() || (squeezing.array() < 0.0).any()) {
    throw std::invalid_argument("instance: squeezing parameters must be finite and non-negative");
  }
  if (!is_unitary(unitary, 1e-10)) {
    throw std::invalid_argument("instance: interferometer is not unitary within 1e-10");
  }
  if (displacement.size() != 0) {
    if (displacement.size() != m) {
      throw std::invalid_argument("instance: displacement length must equal the mode count");
    }
    if (!displacement.allFinite()) {
      throw std::invalid_argument("instance: displacement has non-finite entries");
    }
  }
}

void GaussianState::validate() const {
  const Eigen::Index m2 = sigma.rows();
  if (m2 < 2 || m2 % 2 != 0 || sigma.cols() != m2) {
    throw std::invalid_argument("state: covariance must be square with even dimension");
  }
  if (d.size() != m2) {
    throw std::invalid_argument("state: displacement length must be twice the mode count");
  }
  if (!sigma.allFinite() || !d.allFinite()) {
    throw std::invalid_argument("state: non-finite entries");
  }
  const Eigen::Index m = m2 / 2;
  const double norm = inf_norm(sigma);
  if (inf_norm(sigma - sigma.adjoint()) > floor_tol(norm, 1e-10)) {
    throw std::invalid_argument("state: covariance is not Hermitian");
  }
  if (inf_norm(sigma.bottomRightCorner(m, m) -
               sigma.topLeftCorner(m, m).conjugate()) > floor_tol(norm, 1e-10)) {
    throw std::invalid_argument("state: covariance lacks the conjugate block structure");
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    if (std::abs(d(j + m) - std::conj(d(j))) > floor_tol(inf_norm(d), 1e-10)) {
      throw std::invalid_argument("state: displacement lacks the conjugate structure");
    }
  }
  // sigma_q = sigma + I/2 must be positive definite
  const Eigen::MatrixXcd sigma_q =
      sigma + 0.5 * Eigen::MatrixXcd::Identity(m2, m2);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(sigma_q);
  if (ldlt.info() != Eigen::Success ||
      (ldlt.vectorD().real().array() <= 0.0).any()) {
    throw std::invalid_argument("state: sigma + I/2 is not positive definite");
  }
}

GaussianState build_state(const GbsInstance& inst) {
  inst.validate();
  const Eigen::Index m = inst.modes();
  const Eigen::VectorXd two_r = 2.0 * inst.squeezing;
  const Eigen::VectorXd cosh2r = two_r.array().cosh();
  const Eigen::VectorXd sinh2r = two_r.array().sinh();
  const Eigen::MatrixXcd& t = inst.unitary;

  // sigma = (T (+) T*) S S^+ (T^+ (+) T^t) / 2 with
  // S S^+ = [[diag cosh 2r, diag sinh 2r], [diag sinh 2r, diag cosh 2r]]
  const Eigen::MatrixXcd upper_left =
      0.5 * (t * cosh2r.asDiagonal() * t.adjoint());
  const Eigen::MatrixXcd upper_right =
      0.5 * (t * sinh2r.asDiagonal() * t.transpose());

  GaussianState state;
  state.sigma.resize(2 * m, 2 * m);
  state.sigma.topLeftCorner(m, m) = upper_left;
  state.sigma.topRightCorner(m, m) = upper_right;
  state.sigma.bottomLeftCorner(m, m) = upper_right.conjugate();
  state.sigma.bottomRightCorner(m, m) = upper_left.conjugate();

  state.d = Eigen::VectorXcd::Zero(2 * m);
  if (inst.has_displacement()) {
    const Eigen::VectorXcd propagated = t * inst.displacement;
    state.d.head(m) = propagated;
    state.d.tail(m) = propagated.conjugate();
  }
  return state;
}

GaussianState thermal_state(const Eigen::VectorXd& mean_photons,
                            const Eigen::MatrixXcd& t) {
  const Eigen::Index m = t.rows();
  if (mean_photons.size() != m) {
    throw std::invalid_argument("thermal_state: mean length must equal the mode count");
  }
  if (!mean_photons.allFinite() || (mean_photons.array() < 0.0).any()) {
    throw std::invalid_argument("thermal_state: mean photon numbers must be finite and non-negative");
  }
  if (!is_unitary(t, 1e-10)) {
    throw std::invalid_argument("thermal_state: interferometer is not unitary within 1e-10");
  }
  const Eigen::MatrixXcd mixed = t * mean_photons.asDiagonal() * t.adjoint();
  const Eigen::MatrixXcd upper_left =
      0.5 * (mixed + mixed.adjoint()) +
      0.5 * Eigen::MatrixXcd::Identity(m, m);

  GaussianState state;
  state.sigma = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  state.sigma.topLeftCorner(m, m) = upper_left;
  state.sigma.bottomRightCorner(m, m) = upper_left.conjugate();
  state.d = Eigen::VectorXcd::Zero(2 * m);
  return state;
}

SystemMatrices system_matrices(const GaussianState& state) {
  const Eigen::Index m2 = state.sigma.rows();
  if (m2 % 2 != 0 || state.sigma.cols() != m2 || state.d.size() != m2) {
    throw std::invalid_argument("system_matrices: malformed state");
  }
  const Eigen::Index m = m2 / 2;

  SystemMatrices sys;
  sys.sigma_q = state.sigma + 0.5 * Eigen::MatrixXcd::Identity(m2, m2);
  const DetInverse di = det_and_inverse(sys.sigma_q);
  sys.det_sigma_q = di.det;
  if (std::abs(di.det.imag()) > 1e-9 * std::abs(di.det)) {
    throw std::runtime_error("system_matrices: |sigma_q| has a non-real residue; state is inconsistent");
  }
  if (di.det.real() <= 0.0) {
    throw std::runtime_error("system_matrices: |sigma_q| is not positive; state is inconsistent");
  }

  const Eigen::MatrixXcd complement =
      Eigen::MatrixXcd::Identity(m2, m2) - di.inverse;
  Eigen::MatrixXcd a_raw(m2, m2);
  a_raw.topRows(m) = complement.bottomRows(m);
  a_raw.bottomRows(m) = complement.topRows(m);
  const double gap = inf_norm(a_raw - a_raw.transpose());
  if (gap > std::max(1e-12, 1e-9 * std::max(1.0, inf_norm(a_raw)))) {
    throw std::runtime_error("system_matrices: A matrix asymmetry exceeds tolerance; state is inconsistent");
  }
  sys.a_mat = 0.5 * (a_raw + a_raw.transpose());

  if (inf_norm(state.d) > 0.0) {
    sys.f_vec = di.inverse.transpose() * state.d.conjugate();
    const Complex quad = state.d.dot(di.inverse * state.d);
    if (std::abs(quad.imag()) > 1e-9 * std::max(1.0, std::abs(quad))) {
      throw std::runtime_error("system_matrices: displacement quadratic form has a non-real residue");
    }
    sys.prefactor = std::exp(-0.5 * quad.real());
  } else {
    sys.f_vec = Eigen::VectorXcd::Zero(m2);
    sys.prefactor = 1.0;
  }
  return sys;
}

Eigen::MatrixXcd b_matrix(const GbsInstance& inst) {
  inst.validate();
  const Eigen::VectorXd tanh_r = inst.squeezing.array().tanh();
  return inst.unitary * tanh_r.asDiagonal() * inst.unitary.transpose();
}

GaussianState reduce_modes(const GaussianState& state,
                           const std::vector<int>& keep) {
  const Eigen::Index m = state.modes();
  if (keep.empty()) {
    throw std::invalid_argument("reduce_modes: keep set must be non-empty");
  }
  std::set<int> seen;
  for (int j : keep) {
    if (j < 0 || j >= m) {
      throw std::invalid_argument("reduce_modes: mode index out of range");
    }
    if (!seen.insert(j).second) {
      throw std::invalid_argument("reduce_modes: duplicate mode index");
    }
  }
  std::vector<int> idx;
  idx.reserve(2 * keep.size());
  for (int j : keep) idx.push_back(j);
  for (int j : keep) idx.push_back(j + static_cast<int>(m));

  GaussianState reduced;
  reduced.sigma = state.sigma(idx, idx);
  reduced.d = state.d(idx);
  return reduced;
}

std::vector<int> pattern_indices(const PhotonPattern& pattern,
                                 Eigen::Index modes) {
  validate_pattern(pattern, modes);
  std::vector<int> idx;
  idx.reserve(2 * total_photons(pattern));
  for (Eigen::Index j = 0; j < modes; ++j) {
    for (int k = 0; k < pattern[j]; ++k) idx.push_back(static_cast<int>(j));
  }
  for (Eigen::Index j = 0; j < modes; ++j) {
    for (int k = 0; k < pattern[j]; ++k) {
      idx.push_back(static_cast<int>(j + modes));
    }
  }
  return idx;
}

Eigen::MatrixXcd select_submatrix(const Eigen::Ref<const Eigen::MatrixXcd>& m,
                                  const PhotonPattern& pattern) {
  const Eigen::Index modes = static_cast<Eigen::Index>(pattern.size());
  if (m.rows() != 2 * modes || m.cols() != 2 * modes) {
    throw std::invalid_argument("select_submatrix: matrix must be 2M x 2M for an M-mode pattern");
  }
  const std::vector<int> idx = pattern_indices(pattern, modes);
  return m(idx, idx);
}

Eigen::MatrixXcd select_b_submatrix(
    const Eigen::Ref<const Eigen::MatrixXcd>& b, const PhotonPattern& pattern) {
  const Eigen::Index modes = static_cast<Eigen::Index>(pattern.size());
  if (b.rows() != modes || b.cols() != modes) {
    throw std::invalid_argument("select_b_submatrix: matrix must be M x M for an M-mode pattern");
  }
  validate_pattern(pattern, modes);
  std::vector<int> idx;
  idx.reserve(total_photons(pattern));
  for (Eigen::Index j = 0; j < modes; ++j) {
    for (int k = 0; k < pattern[j]; ++k) idx.push_back(static_cast<int>(j));
  }
  return b(idx, idx);
}

}  // namespace gbs
