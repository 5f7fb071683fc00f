#include "gbs/probability.hpp"

#include <cmath>

#include "gbs/matrix_functions.hpp"

namespace gbs {

namespace {

// Shared residue and clamping rules: imaginary parts below 1e-9 relative are
// rounding noise, negatives past -1e-12 or values past 1 + 1e-12 are bugs.
double finalize_probability(Complex value) {
  if (std::abs(value.imag()) > 1e-9 * std::max(1.0, std::abs(value))) {
    throw std::runtime_error("pattern probability has a non-real residue; state is inconsistent");
  }
  double p = value.real();
  if (p < 0.0) {
    if (p < -1e-12) {
      throw std::runtime_error("pattern probability is negative beyond rounding noise");
    }
    p = 0.0;
  } else if (p > 1.0) {
    if (p > 1.0 + 1e-12) {
      throw std::runtime_error("pattern probability exceeds one beyond rounding noise");
    }
    p = 1.0;
  }
  return p;
}

}  // namespace

double pattern_probability(const SystemMatrices& sys,
                           const PhotonPattern& pattern) {
  const Eigen::Index m = sys.modes();
  const std::vector<int> idx = pattern_indices(pattern, m);
  const int photons = total_photons(pattern);

  Complex numerator;
  const bool displaced = inf_norm(sys.f_vec) > 0.0;
  if (displaced) {
    const Eigen::MatrixXcd a_sub = sys.a_mat(idx, idx);
    const Eigen::VectorXcd f_sub = sys.f_vec(idx);
    numerator = displaced_haf_sum(a_sub, f_sub);
  } else {
    const double cross = std::max(
        inf_norm(sys.a_mat.topRightCorner(m, m)),
        inf_norm(sys.a_mat.bottomLeftCorner(m, m)));
    if (cross <= 1e-13 * std::max(1.0, inf_norm(sys.a_mat))) {
      // A = B (+) B*: the hafnian of the block-diagonal submatrix factors,
      // and odd blocks admit no perfect matching.
      if (photons % 2 != 0) {
        numerator = 0.0;
      } else {
        const std::vector<int> lower(idx.begin(), idx.begin() + photons);
        const std::vector<int> upper(idx.begin() + photons, idx.end());
        numerator = hafnian(sys.a_mat(lower, lower)) *
                    hafnian(sys.a_mat(upper, upper));
      }
    } else {
      numerator = hafnian(sys.a_mat(idx, idx));
    }
  }

  const double scale =
      pattern_factorial(pattern) * std::sqrt(sys.det_sigma_q.real());
  return finalize_probability(sys.prefactor * numerator / scale);
}

double pattern_probability(const GaussianState& state,
                           const PhotonPattern& pattern) {
  return pattern_probability(system_matrices(state), pattern);
}

double pattern_probability_squeezed(const GbsInstance& inst,
                                    const PhotonPattern& pattern) {
  if (inst.has_displacement()) {
    throw std::invalid_argument("pattern_probability_squeezed: instance carries displacement");
  }
  const int photons = total_photons(pattern);  // validates counts via b route below
  const Eigen::MatrixXcd b = b_matrix(inst);
  const Eigen::MatrixXcd b_sub = select_b_submatrix(b, pattern);
  if (photons % 2 != 0) return 0.0;

  // |sigma_q| = prod_j cosh^2 r_j for squeezer inputs through any unitary
  double sqrt_det = 1.0;
  for (Eigen::Index j = 0; j < inst.modes(); ++j) {
    sqrt_det *= std::cosh(inst.squeezing(j));
  }
  const double numerator = std::norm(hafnian(b_sub));
  return finalize_probability(numerator /
                              (pattern_factorial(pattern) * sqrt_det));
}

double thermal_probability(const Eigen::VectorXd& mean_photons,
                           const Eigen::MatrixXcd& t,
                           const PhotonPattern& pattern) {
  return pattern_probability(thermal_state(mean_photons, t), pattern);
}

namespace {

void enumerate_rec(const SystemMatrices& sys, int n_max, int per_mode_max,
                   PhotonPattern& pattern, Eigen::Index mode, int used,
                   ProbabilityTable& table) {
  if (mode == sys.modes()) {
    const double p = pattern_probability(sys, pattern);
    table.entries.emplace(pattern, p);
    table.mass += p;
    return;
  }
  const int limit = std::min(per_mode_max, n_max - used);
  for (int count = 0; count <= limit; ++count) {
    pattern[mode] = count;
    enumerate_rec(sys, n_max, per_mode_max, pattern, mode + 1, used + count,
                  table);
  }
  pattern[mode] = 0;
}

}  // namespace

ProbabilityTable enumerate_table(const GaussianState& state, int n_max,
                                 int per_mode_max) {
  if (n_max < 0 || per_mode_max < 0) {
    throw std::invalid_argument("enumerate_table: bounds must be non-negative");
  }
  const SystemMatrices sys = system_matrices(state);
  ProbabilityTable table;
  table.n_max = n_max;
  table.per_mode_max = per_mode_max;
  PhotonPattern pattern(sys.modes(), 0);
  enumerate_rec(sys, n_max, per_mode_max, pattern, 0, 0, table);
  if (table.mass > 1.0 + 1e-9) {
    throw std::runtime_error("enumerate_table: retained mass exceeds one");
  }
  return table;
}

}  // namespace gbs
