#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "gbs/linalg.hpp"

namespace gbs {

/// Iterates the perfect-matching permutations of {0..n-1} in canonical order:
/// within each pair the smaller index comes first and pairs are sorted by
/// their smallest element. There are (n-1)!! matchings; n = 0 yields the
/// single empty matching.
class PmpIterator {
 public:
  explicit PmpIterator(int n);

  bool done() const { return done_; }
  const std::vector<std::pair<int, int>>& matching() const { return pairs_; }
  void advance();

  /// (n-1)!! as a double.
  static double count(int n);

 private:
  void rebuild();

  int n_;
  bool done_;
  std::vector<int> choice_;  // partner choice per pairing level
  std::vector<std::pair<int, int>> pairs_;
};

/// Hafnian by direct summation over perfect-matching permutations.
/// Input must be square, even-dimensional and symmetric within
/// max(1e-12, 1e-9 ||a||_inf). Haf of the 0x0 matrix is 1.
Complex hafnian_pmp(const Eigen::Ref<const Eigen::MatrixXcd>& a);

/// Hafnian by the subset / power-trace method: a sum over subsets Z of the
/// n/2 row pairs with sign (-1)^(n/2-|Z|), each contributing the degree-n/2
/// coefficient of exp(sum_j tr(B_Z^j) x^j / (2j)) where B_Z is the
/// pair-coupled submatrix. O(n^3 2^(n/2)); same preconditions as hafnian_pmp.
Complex hafnian_fast(const Eigen::Ref<const Eigen::MatrixXcd>& a);

/// hafnian_pmp up to dimension 12, hafnian_fast above.
Complex hafnian(const Eigen::Ref<const Eigen::MatrixXcd>& a);

/// Permanent via Ryser's inclusion-exclusion with Gray-code subset updates,
/// O(n 2^n). Perm of the 0x0 matrix is 1.
Complex permanent_ryser(const Eigen::Ref<const Eigen::MatrixXcd>& g);

/// Sum over all partitions of the index set into singletons and pairs:
/// singletons contribute products of f entries, pairs the hafnian of the
/// complementary submatrix of a. Reduces to Haf(a) for f = 0 and to the
/// product of all f entries for a = 0. Direct partition enumeration up to
/// dimension 12, the subset / power-trace route above.
Complex displaced_haf_sum(const Eigen::Ref<const Eigen::MatrixXcd>& a_sub,
                          const Eigen::Ref<const Eigen::VectorXcd>& f_sub);

/// Same value by the subset / power-trace method extended with singleton
/// path terms: pair cycles contribute tr((X A_Z)^j) x^j / (2j) and paths
/// between two singleton weights contribute f^t (X A_Z)^(j-1) X f x^j / 2.
/// O(n^3 2^(n/2)); cross-checked against the enumeration in the tests.
Complex displaced_haf_fast(const Eigen::Ref<const Eigen::MatrixXcd>& a_sub,
                           const Eigen::Ref<const Eigen::VectorXcd>& f_sub);

}  // namespace gbs
