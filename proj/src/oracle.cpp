#include "gbs/oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace gbs {

std::size_t MultiPoly::ExponentsHash::operator()(const Exponents& e) const {
  // FNV-1a over the exponent bytes
  std::size_t h = 1469598103934665603ull;
  for (std::uint8_t b : e) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

MultiPoly::MultiPoly(int vars, int max_degree)
    : vars_(vars), max_degree_(max_degree) {
  if (vars < 0 || max_degree < 0) {
    throw std::invalid_argument("MultiPoly: negative size");
  }
}

namespace {

int total_degree(const MultiPoly::Exponents& e) {
  int total = 0;
  for (std::uint8_t b : e) total += b;
  return total;
}

}  // namespace

void MultiPoly::add_term(const Exponents& e, Complex coeff) {
  if (static_cast<int>(e.size()) != vars_) {
    throw std::invalid_argument("MultiPoly: exponent vector length mismatch");
  }
  if (total_degree(e) > max_degree_) return;
  terms_[e] += coeff;
}

Complex MultiPoly::coefficient(const Exponents& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

MultiPoly MultiPoly::times(const MultiPoly& other) const {
  if (other.vars_ != vars_) {
    throw std::invalid_argument("MultiPoly: variable count mismatch");
  }
  MultiPoly result(vars_, max_degree_);
  Exponents combined(vars_);
  for (const auto& [ea, ca] : terms_) {
    const int da = total_degree(ea);
    for (const auto& [eb, cb] : other.terms_) {
      if (da + total_degree(eb) > max_degree_) continue;
      for (int v = 0; v < vars_; ++v) {
        combined[v] = static_cast<std::uint8_t>(ea[v] + eb[v]);
      }
      result.terms_[combined] += ca * cb;
    }
  }
  result.prune();
  return result;
}

void MultiPoly::add_in_place(const MultiPoly& other, Complex scale) {
  for (const auto& [e, c] : other.terms_) {
    terms_[e] += scale * c;
  }
}

void MultiPoly::prune(double threshold) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= threshold) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

int oracle_degree_cap() {
  if (const char* env = std::getenv("GBS_MAX_DEGREE")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1 && cap <= 64) return cap;
    } catch (...) {
    }
    throw std::runtime_error("GBS_MAX_DEGREE must be an integer in [1, 64]");
  }
  return 12;
}

MultiPoly poly_exp_truncated(const Eigen::Ref<const Eigen::MatrixXcd>& quadratic,
                             const Eigen::Ref<const Eigen::VectorXcd>& linear,
                             int degree) {
  const int vars = static_cast<int>(quadratic.rows());
  if (quadratic.cols() != vars || linear.size() != vars) {
    throw std::invalid_argument("poly_exp_truncated: dimensions disagree");
  }
  if (!is_symmetric(quadratic, 1e-9)) {
    throw std::invalid_argument("poly_exp_truncated: quadratic form must be symmetric");
  }
  if (degree < 0 || degree > oracle_degree_cap()) {
    throw std::runtime_error("poly_exp_truncated: degree exceeds the configured cap");
  }

  // exponent = alpha^t Q alpha / 2 + L alpha
  MultiPoly exponent(vars, degree);
  MultiPoly::Exponents e(vars, 0);
  for (int i = 0; i < vars; ++i) {
    for (int j = i; j < vars; ++j) {
      const Complex coeff =
          (i == j) ? 0.5 * quadratic(i, i)
                   : 0.5 * (quadratic(i, j) + quadratic(j, i));
      if (coeff == Complex(0.0)) continue;
      ++e[i];
      ++e[j];
      exponent.add_term(e, coeff);
      --e[i];
      --e[j];
    }
    if (linear(i) != Complex(0.0)) {
      ++e[i];
      exponent.add_term(e, linear(i));
      --e[i];
    }
  }
  exponent.prune();

  MultiPoly result(vars, degree);
  result.add_term(MultiPoly::Exponents(vars, 0), 1.0);
  MultiPoly term(vars, degree);
  term.add_term(MultiPoly::Exponents(vars, 0), 1.0);
  for (int k = 1; k <= degree; ++k) {
    term = term.times(exponent);
    if (term.term_count() == 0) break;
    result.add_in_place(term, 1.0 / k);
    // keep term = exponent^k / k! for the next round
    MultiPoly scaled(vars, degree);
    scaled.add_in_place(term, 1.0 / k);
    term = std::move(scaled);
  }
  result.prune();
  return result;
}

double oracle_probability(const GaussianState& state,
                          const PhotonPattern& pattern) {
  const Eigen::Index m = state.modes();
  if (static_cast<Eigen::Index>(pattern.size()) != m) {
    throw std::invalid_argument("oracle_probability: pattern length mismatch");
  }
  for (int n : pattern) {
    if (n < 0) throw std::invalid_argument("oracle_probability: negative count");
  }
  const int photons = total_photons(pattern);
  const int degree = 2 * photons;

  // Independent derivation from the covariance with numkit primitives only.
  const Eigen::Index m2 = 2 * m;
  const Eigen::MatrixXcd sigma_q =
      state.sigma + 0.5 * Eigen::MatrixXcd::Identity(m2, m2);
  const DetInverse di = det_and_inverse(sigma_q);
  if (std::abs(di.det.imag()) > 1e-9 * std::abs(di.det) ||
      di.det.real() <= 0.0) {
    throw std::runtime_error("oracle_probability: |sigma_q| is not positive real");
  }
  const Eigen::MatrixXcd complement =
      Eigen::MatrixXcd::Identity(m2, m2) - di.inverse;
  Eigen::MatrixXcd a_raw(m2, m2);
  a_raw.topRows(m) = complement.bottomRows(m);
  a_raw.bottomRows(m) = complement.topRows(m);
  const Eigen::MatrixXcd quadratic = 0.5 * (a_raw + a_raw.transpose());

  Eigen::VectorXcd linear = Eigen::VectorXcd::Zero(m2);
  double prefactor = 1.0;
  if (inf_norm(state.d) > 0.0) {
    linear = di.inverse.transpose() * state.d.conjugate();
    const Complex quad = state.d.dot(di.inverse * state.d);
    prefactor = std::exp(-0.5 * quad.real());
  }

  const MultiPoly expansion = poly_exp_truncated(quadratic, linear, degree);
  MultiPoly::Exponents wanted(m2, 0);
  for (Eigen::Index j = 0; j < m; ++j) {
    wanted[j] = static_cast<std::uint8_t>(pattern[j]);
    wanted[j + m] = static_cast<std::uint8_t>(pattern[j]);
  }
  const Complex coeff = expansion.coefficient(wanted);

  // The 2n_j-th derivative at 0 carries (n_j!)^2 per mode relative to the
  // Taylor coefficient, leaving one factor of n! after the 1/n! prefactor.
  const Complex value = prefactor * pattern_factorial(pattern) * coeff /
                        std::sqrt(di.det.real());
  if (std::abs(value.imag()) > 1e-9 * std::max(1.0, std::abs(value))) {
    throw std::runtime_error("oracle_probability: non-real residue");
  }
  double p = value.real();
  if (p < 0.0) {
    if (p < -1e-12) {
      throw std::runtime_error("oracle_probability: negative probability");
    }
    p = 0.0;
  }
  return p;
}

}  // namespace gbs
