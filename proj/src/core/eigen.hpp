#pragma once

#include <cstddef>
#include <vector>

#include "dense_matrix.hpp"

namespace bkz {

inline constexpr std::size_t kDefaultEigenCap = 512;

/// Algebraic extreme eigenvalues of a Hermitian matrix.
struct EigenRange {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// false when the iterative fallback (size above the cap) produced the
  /// values; they then carry a relative tolerance of about 1e-8.
  bool exact = true;
};

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal (off-diagonal length n-1).
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag,
                                            std::span<const double> offdiag);

/// All eigenvalues of a real symmetric matrix, ascending. Householder
/// tridiagonalization followed by implicit-shift QL.
std::vector<double> symmetric_eigenvalues(DenseMatrix<double> a);

/// All eigenvalues of a Hermitian matrix, ascending. Complex input is mapped
/// to the real symmetric embedding [[Re, -Im], [Im, Re]], whose spectrum is
/// the Hermitian spectrum with every value doubled.
template <class T>
std::vector<double> hermitian_eigenvalues(const DenseMatrix<T>& h);

/// Smallest and largest eigenvalue of a Hermitian matrix. Sizes up to `cap`
/// are solved exactly; larger inputs use Lanczos with full reorthogonalization
/// (flagged `exact = false`). Throws when `h` is
/// not Hermitian to within 1e-10 relative to its largest entry.
template <class T>
EigenRange eig_bounds_hermitian(const DenseMatrix<T>& h, std::size_t cap = kDefaultEigenCap);

/// Extreme eigenvalues of the Gram matrix A A* of a block. A Gram matrix is
/// positive semidefinite; values below the rank tolerance
/// (rows * eps * lambda_max) are reported as exactly 0, and blocks with more
/// rows than columns have lambda_min = 0.
template <class T>
EigenRange gram_eig_bounds(const DenseMatrix<T>& a_tau, std::size_t cap = kDefaultEigenCap);

/// Cholesky factorization G = L L* of a Hermitian positive definite matrix.
template <class T>
class Cholesky {
 public:
  /// Returns false if a pivot is not positive (the factor is then unusable).
  bool factor(const DenseMatrix<T>& g, FlopCounter* fc = nullptr);
  /// Solves G u = r in place.
  void solve(std::span<T> r, FlopCounter* fc = nullptr) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<T> l_;  // row-major lower factor
};

extern template class Cholesky<double>;
extern template class Cholesky<cplx>;

}  // namespace bkz
