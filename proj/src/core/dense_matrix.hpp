#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "numeric.hpp"

namespace bkz {

/// Row-major dense matrix over double or complex<double>.
template <class T>
class DenseMatrix {
 public:
  using scalar_type = T;

  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> data);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  const std::vector<T>& data() const noexcept { return data_; }

  /// Every row has unit Euclidean norm within `tol`.
  bool standardized(double tol = 1e-12) const;
  double frobenius_norm() const;

  /// y = A x
  void apply(std::span<const T> x, std::span<T> y, FlopCounter* fc = nullptr) const;
  /// x = A* y
  void apply_adjoint(std::span<const T> y, std::span<T> x, FlopCounter* fc = nullptr) const;

  DenseMatrix adjoint() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Rows of `a` listed in `tau`, in ascending index order. Throws on
/// out-of-range or duplicate indices.
template <class T>
DenseMatrix<T> row_submatrix(const DenseMatrix<T>& a, std::span<const std::size_t> tau);

/// A A* for a (block) matrix A.
template <class T>
DenseMatrix<T> gram_block(const DenseMatrix<T>& a_tau, FlopCounter* fc = nullptr);

/// A* A.
template <class T>
DenseMatrix<T> normal_matrix(const DenseMatrix<T>& a);

template <class T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b);

/// Copy of `a` with every row scaled to unit norm. Zero rows are rejected.
template <class T>
DenseMatrix<T> normalize_rows(const DenseMatrix<T>& a);

DenseMatrix<cplx> to_complex(const DenseMatrix<double>& a);

extern template class DenseMatrix<double>;
extern template class DenseMatrix<cplx>;

}  // namespace bkz
