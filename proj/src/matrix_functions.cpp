#include "gbs/matrix_functions.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cstdint>
#include <numeric>

namespace gbs {

namespace {

void check_hafnian_input(const Eigen::Ref<const Eigen::MatrixXcd>& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("hafnian: matrix must be square");
  }
  if (a.rows() % 2 != 0) {
    throw std::invalid_argument("hafnian: dimension must be even");
  }
  if (!is_symmetric(a, 1e-9)) {
    throw std::invalid_argument("hafnian: matrix must be symmetric");
  }
}

Complex pairwise_sum(const std::vector<Complex>& terms, std::size_t lo,
                     std::size_t hi) {
  if (hi - lo <= 32) {
    Complex acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += terms[i];
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

Complex reduce_terms(const std::vector<Complex>& terms) {
  if (terms.empty()) return 0.0;
  if (terms.size() >= 1024) return pairwise_sum(terms, 0, terms.size());
  Complex acc = 0.0;
  for (const Complex& t : terms) acc += t;
  return acc;
}

// Power traces tr(B^j) for j = 1..count, from the eigenvalues when the solver
// converges and from explicit matrix powers otherwise.
Eigen::VectorXcd power_traces(const Eigen::MatrixXcd& bmat, int count) {
  Eigen::VectorXcd traces(count + 1);
  traces(0) = static_cast<double>(bmat.rows());
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es;
  es.compute(bmat, /*computeEigenvectors=*/false);
  if (es.info() == Eigen::Success) {
    const Eigen::VectorXcd& lam = es.eigenvalues();
    Eigen::VectorXcd cur = lam;
    for (int j = 1; j <= count; ++j) {
      traces(j) = cur.sum();
      cur = cur.cwiseProduct(lam);
    }
  } else {
    Eigen::MatrixXcd cur = bmat;
    for (int j = 1; j <= count; ++j) {
      traces(j) = cur.trace();
      if (j < count) cur = cur * bmat;
    }
  }
  return traces;
}

}  // namespace

PmpIterator::PmpIterator(int n) : n_(n), done_(false) {
  if (n < 0 || n % 2 != 0) {
    throw std::invalid_argument("PmpIterator: size must be even and non-negative");
  }
  choice_.assign(n / 2, 0);
  pairs_.resize(n / 2);
  rebuild();
}

void PmpIterator::rebuild() {
  std::vector<int> avail(n_);
  std::iota(avail.begin(), avail.end(), 0);
  for (int level = 0; level < n_ / 2; ++level) {
    const int first = avail.front();
    avail.erase(avail.begin());
    const int pick = choice_[level];
    const int second = avail[pick];
    avail.erase(avail.begin() + pick);
    pairs_[level] = {first, second};
  }
}

void PmpIterator::advance() {
  if (done_) return;
  int level = n_ / 2 - 1;
  while (level >= 0) {
    // level k pairs the smallest remaining index with one of n - 2k - 1 others
    if (choice_[level] + 1 < n_ - 2 * level - 1) {
      ++choice_[level];
      break;
    }
    choice_[level] = 0;
    --level;
  }
  if (level < 0) {
    done_ = true;
    return;
  }
  rebuild();
}

double PmpIterator::count(int n) {
  double result = 1.0;
  for (int k = n - 1; k > 1; k -= 2) result *= k;
  return result;
}

Complex hafnian_pmp(const Eigen::Ref<const Eigen::MatrixXcd>& a) {
  check_hafnian_input(a);
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  Complex total = 0.0;
  for (PmpIterator it(n); !it.done(); it.advance()) {
    Complex prod = 1.0;
    for (const auto& [i, j] : it.matching()) prod *= a(i, j);
    total += prod;
  }
  return total;
}

Complex hafnian_fast(const Eigen::Ref<const Eigen::MatrixXcd>& a) {
  check_hafnian_input(a);
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  if (n > 60) {
    throw std::invalid_argument("hafnian_fast: dimension too large");
  }
  const int m = n / 2;

  // The hafnian never pairs an index with itself.
  Eigen::MatrixXcd az = a;
  az.diagonal().setZero();

  const bool use_pairwise = m >= 10;
  std::vector<Complex> terms;
  if (use_pairwise) terms.reserve((std::size_t{1} << m) - 1);
  Complex direct = 0.0;

  std::vector<int> idx;
  Eigen::VectorXcd series(m + 1);
  for (std::uint64_t z = 1; z < (std::uint64_t{1} << m); ++z) {
    const int k = std::popcount(z);
    idx.clear();
    for (int i = 0; i < m; ++i) {
      if ((z >> i) & 1u) {
        idx.push_back(2 * i);
        idx.push_back(2 * i + 1);
      }
    }
    Eigen::MatrixXcd sub = az(idx, idx);
    // couple the rows pairwise: B = X A_Z with X = direct sum of [[0,1],[1,0]]
    Eigen::MatrixXcd bmat(2 * k, 2 * k);
    for (int t = 0; t < k; ++t) {
      bmat.row(2 * t) = sub.row(2 * t + 1);
      bmat.row(2 * t + 1) = sub.row(2 * t);
    }
    const Eigen::VectorXcd traces = power_traces(bmat, m);
    // [x^m] exp(sum_j traces(j) x^j / (2j)) via k e_k = sum_j (p_j / 2) e_{k-j}
    series.setZero();
    series(0) = 1.0;
    for (int kk = 1; kk <= m; ++kk) {
      Complex acc = 0.0;
      for (int j = 1; j <= kk; ++j) acc += traces(j) * series(kk - j);
      series(kk) = acc / (2.0 * kk);
    }
    const Complex term = (((m - k) % 2) ? -1.0 : 1.0) * series(m);
    if (use_pairwise) {
      terms.push_back(term);
    } else {
      direct += term;
    }
  }
  return use_pairwise ? reduce_terms(terms) : direct;
}

Complex hafnian(const Eigen::Ref<const Eigen::MatrixXcd>& a) {
  return a.rows() <= 12 ? hafnian_pmp(a) : hafnian_fast(a);
}

Complex permanent_ryser(const Eigen::Ref<const Eigen::MatrixXcd>& g) {
  if (g.rows() != g.cols()) {
    throw std::invalid_argument("permanent_ryser: matrix must be square");
  }
  const int n = static_cast<int>(g.rows());
  if (n == 0) return 1.0;
  if (n > 62) {
    throw std::invalid_argument("permanent_ryser: dimension too large");
  }
  Eigen::VectorXcd row_sums = Eigen::VectorXcd::Zero(n);
  Complex total = 0.0;
  std::uint64_t gray = 0;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < limit; ++k) {
    const int bit = std::countr_zero(k);
    const std::uint64_t mask = std::uint64_t{1} << bit;
    gray ^= mask;
    if (gray & mask) {
      row_sums += g.col(bit);
    } else {
      row_sums -= g.col(bit);
    }
    const Complex prod = row_sums.prod();
    total += (std::popcount(gray) % 2) ? -prod : prod;
  }
  return (n % 2) ? -total : total;
}

Complex displaced_haf_sum(const Eigen::Ref<const Eigen::MatrixXcd>& a_sub,
                          const Eigen::Ref<const Eigen::VectorXcd>& f_sub) {
  check_hafnian_input(a_sub);
  if (f_sub.size() != a_sub.rows()) {
    throw std::invalid_argument("displaced_haf_sum: vector length must match the matrix dimension");
  }
  const int n = static_cast<int>(a_sub.rows());
  if (n == 0) return 1.0;
  if (n > 12) {
    return displaced_haf_fast(a_sub, f_sub);
  }
  if (inf_norm(f_sub) == 0.0) {
    // only the all-pairs partition survives
    return hafnian(a_sub);
  }

  // Partition the indices: each even-size subset supplies singleton blocks,
  // the complement is paired up by an inner hafnian.
  const bool use_pairwise = n >= 11;  // 2^(n-1) even subsets
  std::vector<Complex> terms;
  if (use_pairwise) terms.reserve(std::size_t{1} << (n - 1));
  Complex direct = 0.0;

  std::vector<int> complement;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << n); ++subset) {
    if (std::popcount(subset) % 2 != 0) continue;
    Complex singletons = 1.0;
    complement.clear();
    for (int i = 0; i < n; ++i) {
      if ((subset >> i) & 1u) {
        singletons *= f_sub(i);
      } else {
        complement.push_back(i);
      }
    }
    Complex paired = 1.0;
    if (!complement.empty()) {
      const Eigen::MatrixXcd rest = a_sub(complement, complement);
      paired = hafnian(rest);
    }
    const Complex term = singletons * paired;
    if (use_pairwise) {
      terms.push_back(term);
    } else {
      direct += term;
    }
  }
  return use_pairwise ? reduce_terms(terms) : direct;
}

Complex displaced_haf_fast(const Eigen::Ref<const Eigen::MatrixXcd>& a_sub,
                           const Eigen::Ref<const Eigen::VectorXcd>& f_sub) {
  check_hafnian_input(a_sub);
  if (f_sub.size() != a_sub.rows()) {
    throw std::invalid_argument("displaced_haf_fast: vector length must match the matrix dimension");
  }
  const int n = static_cast<int>(a_sub.rows());
  if (n == 0) return 1.0;
  if (n > 60) {
    throw std::invalid_argument("displaced_haf_fast: dimension too large");
  }
  const int m = n / 2;

  // pair walks never take the loop edges; the singleton weights only enter
  // through the path terms
  Eigen::MatrixXcd az = a_sub;
  az.diagonal().setZero();

  const bool use_pairwise = m >= 10;
  std::vector<Complex> terms;
  if (use_pairwise) terms.reserve((std::size_t{1} << m) - 1);
  Complex direct = 0.0;

  std::vector<int> idx;
  Eigen::VectorXcd series(m + 1);
  for (std::uint64_t z = 1; z < (std::uint64_t{1} << m); ++z) {
    const int k = std::popcount(z);
    idx.clear();
    for (int i = 0; i < m; ++i) {
      if ((z >> i) & 1u) {
        idx.push_back(2 * i);
        idx.push_back(2 * i + 1);
      }
    }
    const Eigen::MatrixXcd sub = az(idx, idx);
    Eigen::MatrixXcd bmat(2 * k, 2 * k);
    for (int t = 0; t < k; ++t) {
      bmat.row(2 * t) = sub.row(2 * t + 1);
      bmat.row(2 * t + 1) = sub.row(2 * t);
    }
    const Eigen::VectorXcd traces = power_traces(bmat, m);

    Eigen::VectorXcd loops(2 * k);
    for (int t = 0; t < 2 * k; ++t) loops(t) = f_sub(idx[t]);
    // swapped = X f; walk terms f^t (X A_Z)^(j-1) X f advance through bmat
    Eigen::VectorXcd walk(2 * k);
    for (int t = 0; t < k; ++t) {
      walk(2 * t) = loops(2 * t + 1);
      walk(2 * t + 1) = loops(2 * t);
    }

    // k e_k = sum_j (j s_j) e_{k-j} with
    // j s_j = traces(j)/2 + j path_j / 2
    series.setZero();
    series(0) = 1.0;
    Eigen::VectorXcd weighted(m + 1);
    for (int j = 1; j <= m; ++j) {
      const Complex path = (loops.transpose() * walk)(0, 0);
      weighted(j) = 0.5 * traces(j) + 0.5 * static_cast<double>(j) * path;
      if (j < m) walk = bmat * walk;
    }
    for (int kk = 1; kk <= m; ++kk) {
      Complex acc = 0.0;
      for (int j = 1; j <= kk; ++j) acc += weighted(j) * series(kk - j);
      series(kk) = acc / static_cast<double>(kk);
    }
    const Complex term = (((m - k) % 2) ? -1.0 : 1.0) * series(m);
    if (use_pairwise) {
      terms.push_back(term);
    } else {
      direct += term;
    }
  }
  return use_pairwise ? reduce_terms(terms) : direct;
}

}  // namespace gbs
