#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace gbs {

using Complex = std::complex<double>;

/// Thrown when a matrix that must be inverted is numerically singular.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Max-abs entry; 0 for empty matrices. Accepts any dense expression.
template <typename Derived>
double inf_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

bool is_unitary(const Eigen::Ref<const Eigen::MatrixXcd>& m, double tol = 1e-10);

/// ||m - m^T||_inf <= max(1e-12, rel * ||m||_inf)
bool is_symmetric(const Eigen::Ref<const Eigen::MatrixXcd>& m, double rel);

/// Dimension-checked matrix product.
Eigen::MatrixXcd matmul(const Eigen::Ref<const Eigen::MatrixXcd>& a,
                        const Eigen::Ref<const Eigen::MatrixXcd>& b);

struct DetInverse {
  Complex det;
  Eigen::MatrixXcd inverse;
};

/// Determinant and inverse via pivoted LU. Throws SingularMatrixError when
/// |det| falls below 1e-300.
DetInverse det_and_inverse(const Eigen::Ref<const Eigen::MatrixXcd>& m);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the columns
/// of Q rephased so the R diagonal is real positive. The normal deviates come
/// from a fixed Box-Muller construction over mt19937_64, so the output is
/// bit-identical for a given (dim, seed) across runs and platforms.
Eigen::MatrixXcd haar_unitary(Eigen::Index dim, std::uint64_t seed);

struct TakagiResult {
  Eigen::MatrixXcd u;  // unitary
  Eigen::VectorXd d;   // non-negative, sorted descending
};

/// Autonne-Takagi decomposition b = U diag(d) U^T of a complex symmetric
/// matrix. Requires ||b - b^T||_inf <= max(1e-12, 1e-10 ||b||_inf).
TakagiResult takagi(const Eigen::Ref<const Eigen::MatrixXcd>& b);

}  // namespace gbs
