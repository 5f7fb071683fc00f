#include "gbs/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace gbs {

namespace {

double floor_tol(double norm, double rel) {
  return std::max(1e-12, rel * norm);
}

// Normal deviates from a pinned Box-Muller construction; the standard
// library's normal_distribution is implementation-defined and would break
// seed reproducibility across platforms.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

bool is_unitary(const Eigen::Ref<const Eigen::MatrixXcd>& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (!m.allFinite()) return false;
  const Eigen::MatrixXcd gram = m.adjoint() * m;
  return inf_norm(gram - Eigen::MatrixXcd::Identity(m.rows(), m.cols())) <= tol;
}

bool is_symmetric(const Eigen::Ref<const Eigen::MatrixXcd>& m, double rel) {
  if (m.rows() != m.cols()) return false;
  return inf_norm(m - m.transpose()) <= floor_tol(inf_norm(m), rel);
}

Eigen::MatrixXcd matmul(const Eigen::Ref<const Eigen::MatrixXcd>& a,
                        const Eigen::Ref<const Eigen::MatrixXcd>& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions disagree");
  }
  return a * b;
}

DetInverse det_and_inverse(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("det_and_inverse: matrix must be square");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("det_and_inverse: matrix has non-finite entries");
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  const Complex det = lu.determinant();
  if (!std::isfinite(det.real()) || !std::isfinite(det.imag()) ||
      std::abs(det) < 1e-300) {
    throw SingularMatrixError("det_and_inverse: matrix is singular");
  }
  return {det, lu.inverse()};
}

Eigen::MatrixXcd haar_unitary(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) {
    throw std::invalid_argument("haar_unitary: dimension must be positive");
  }
  NormalSource source(seed);
  Eigen::MatrixXcd ginibre(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double re = source.normal();
      const double im = source.normal();
      ginibre(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : Complex(1.0, 0.0);
  }
  return q;
}

TakagiResult takagi(const Eigen::Ref<const Eigen::MatrixXcd>& b) {
  if (b.rows() != b.cols()) {
    throw std::invalid_argument("takagi: matrix must be square");
  }
  const Eigen::Index n = b.rows();
  if (n == 0) {
    return {Eigen::MatrixXcd(0, 0), Eigen::VectorXd(0)};
  }
  const double norm = inf_norm(b);
  if (inf_norm(b - b.transpose()) > floor_tol(norm, 1e-10)) {
    throw std::invalid_argument("takagi: matrix must be complex symmetric");
  }
  const Eigen::MatrixXcd s = 0.5 * (b + b.transpose());

  // Real embedding: con-eigenvectors u = x + iy with s * conj(u) = sigma u
  // solve [[Re s, Im s], [Im s, -Re s]] [x; y] = sigma [x; y]. The embedded
  // matrix is symmetric with spectrum {+-sigma_k}; the positive half gives the
  // Takagi vectors, and u -> iu maps the +sigma eigenspace onto -sigma, which
  // makes the complex columns orthonormal wherever sigma > 0.
  Eigen::MatrixXd embedded(2 * n, 2 * n);
  embedded << s.real(), s.imag(), s.imag(), -s.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(embedded);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("takagi: eigendecomposition failed");
  }
  const Eigen::VectorXd& vals = es.eigenvalues();  // ascending
  const Eigen::MatrixXd& vecs = es.eigenvectors();

  const double zero_tol = floor_tol(norm, 1e-12);
  auto complex_column = [&](Eigen::Index ei) {
    Eigen::VectorXcd c(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      c(k) = Complex(vecs(k, ei), vecs(k + n, ei));
    }
    return c;
  };

  // Fallback candidates for the near-zero cluster, where the top-half pick of
  // a +-0 pair may coincide with an earlier column up to a phase.
  std::vector<Eigen::VectorXcd> extras;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(vals(i)) <= zero_tol) extras.push_back(complex_column(i));
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    extras.push_back(Eigen::VectorXcd::Unit(n, k));
  }

  Eigen::MatrixXcd u(n, n);
  Eigen::VectorXd d(n);
  auto orthonormalized = [&](Eigen::VectorXcd c,
                             Eigen::Index filled) -> std::optional<Eigen::VectorXcd> {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < filled; ++j) {
        c -= u.col(j).dot(c) * u.col(j);
      }
    }
    const double len = c.norm();
    if (len < 0.3) return std::nullopt;
    return Eigen::VectorXcd(c / len);
  };

  std::size_t next_extra = 0;
  for (Eigen::Index slot = 0; slot < n; ++slot) {
    const Eigen::Index ei = 2 * n - 1 - slot;  // descending eigenvalues
    d(slot) = std::max(vals(ei), 0.0);
    std::optional<Eigen::VectorXcd> col = orthonormalized(complex_column(ei), slot);
    while (!col && next_extra < extras.size()) {
      col = orthonormalized(extras[next_extra++], slot);
    }
    if (!col) {
      throw std::runtime_error("takagi: failed to complete a unitary basis");
    }
    u.col(slot) = *col;
  }
  return {u, d};
}

}  // namespace gbs
