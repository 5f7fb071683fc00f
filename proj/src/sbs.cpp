#include "gbs/sbs.hpp"

#include <cmath>

#include "gbs/matrix_functions.hpp"
#include "gbs/probability.hpp"

namespace gbs {

namespace {

void check_binary_pattern(const PhotonPattern& pattern, Eigen::Index modes,
                          const char* name) {
  if (static_cast<Eigen::Index>(pattern.size()) != modes) {
    throw std::invalid_argument(std::string(name) + ": pattern length must equal the mode count");
  }
  for (int n : pattern) {
    if (n != 0 && n != 1) {
      throw std::invalid_argument(std::string(name) + ": pattern entries must be 0 or 1");
    }
  }
}

}  // namespace

void SbsInstance::validate() const {
  if (modes() < 1) {
    throw std::invalid_argument("sbs: at least one mode required");
  }
  if (!(squeezing >= 0.0) || !std::isfinite(squeezing)) {
    throw std::invalid_argument("sbs: squeezing must be finite and non-negative");
  }
  if (!is_unitary(unitary, 1e-10)) {
    throw std::invalid_argument("sbs: interferometer is not unitary within 1e-10");
  }
}

GbsInstance sbs_to_gbs(const SbsInstance& inst) {
  const Eigen::Index m = inst.modes();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // U_BS U_PS = [[1, i], [-1, i]] / sqrt(2) on each (herald, sampling) pair
  const Complex ps(0.0, inv_sqrt2);

  Eigen::MatrixXcd front = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    front(j, j) = inv_sqrt2;
    front(j, j + m) = ps;
    front(j + m, j) = -inv_sqrt2;
    front(j + m, j + m) = ps;
  }

  Eigen::MatrixXcd routing = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  routing.topLeftCorner(m, m) = Eigen::MatrixXcd::Identity(m, m);
  routing.bottomRightCorner(m, m) = inst.unitary;

  GbsInstance gbs;
  gbs.squeezing = Eigen::VectorXd::Constant(2 * m, inst.squeezing);
  gbs.unitary = routing * front;
  return gbs;
}

double sbs_conditional(const SbsInstance& inst, const PhotonPattern& sample,
                       const PhotonPattern& herald) {
  const Eigen::Index m = inst.modes();
  check_binary_pattern(sample, m, "sbs_conditional(sample)");
  check_binary_pattern(herald, m, "sbs_conditional(herald)");
  if (total_photons(sample) != total_photons(herald)) {
    return 0.0;  // heralding mismatch
  }
  std::vector<int> rows;
  std::vector<int> cols;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (sample[j]) rows.push_back(static_cast<int>(j));
    if (herald[j]) cols.push_back(static_cast<int>(j));
  }
  const Eigen::MatrixXcd sub = inst.unitary(rows, cols);
  const double numerator = std::norm(permanent_ryser(sub));
  return numerator / (pattern_factorial(sample) * pattern_factorial(herald));
}

BayesCheck bayes_check(const SbsInstance& inst, const PhotonPattern& sample,
                       const PhotonPattern& herald) {
  const Eigen::Index m = inst.modes();
  check_binary_pattern(sample, m, "bayes_check(sample)");
  check_binary_pattern(herald, m, "bayes_check(herald)");

  const GbsInstance gbs = sbs_to_gbs(inst);
  const GaussianState state = build_state(gbs);

  PhotonPattern combined(2 * m, 0);
  for (Eigen::Index j = 0; j < m; ++j) {
    combined[j] = herald[j];
    combined[j + m] = sample[j];
  }

  BayesCheck out;
  out.gbs_joint = pattern_probability(state, combined);
  const int heralded = total_photons(herald);
  out.herald_prob = std::pow(1.0 / std::cosh(inst.squeezing), 2.0 * m) *
                    std::pow(std::tanh(inst.squeezing), 2.0 * heralded);
  out.sbs_conditional = sbs_conditional(inst, sample, herald);
  out.residual = std::abs(out.gbs_joint / out.herald_prob - out.sbs_conditional);
  return out;
}

}  // namespace gbs
