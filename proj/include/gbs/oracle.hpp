#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gbs/gaussian.hpp"

namespace gbs {

/// Sparse multivariate polynomial truncated at a total-degree bound.
/// Coefficients below 1e-15 in magnitude are pruned after every operation.
class MultiPoly {
 public:
  using Exponents = std::vector<std::uint8_t>;

  MultiPoly(int vars, int max_degree);

  int vars() const { return vars_; }
  int max_degree() const { return max_degree_; }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Exponents& e, Complex coeff);
  Complex coefficient(const Exponents& e) const;

  /// Product truncated at the degree bound.
  MultiPoly times(const MultiPoly& other) const;
  void add_in_place(const MultiPoly& other, Complex scale);
  void prune(double threshold = 1e-15);

 private:
  struct ExponentsHash {
    std::size_t operator()(const Exponents& e) const;
  };

  int vars_;
  int max_degree_;
  std::unordered_map<Exponents, Complex, ExponentsHash> terms_;
};

/// Hard cap on the expansion degree, configurable through the environment
/// variable GBS_MAX_DEGREE (default 12).
int oracle_degree_cap();

/// Taylor expansion of exp(alpha^t Q alpha / 2 + L alpha) through the given
/// total degree, by exponentiation of the truncated series.
MultiPoly poly_exp_truncated(const Eigen::Ref<const Eigen::MatrixXcd>& quadratic,
                             const Eigen::Ref<const Eigen::VectorXcd>& linear,
                             int degree);

/// Brute-force pattern probability by coefficient extraction from the Taylor
/// expansion of the generating exponential. Shares only the linear-algebra
/// substrate with pattern_probability: no hafnian, permanent or partition
/// code, so agreement between the two is an independent check.
double oracle_probability(const GaussianState& state,
                          const PhotonPattern& pattern);

}  // namespace gbs
