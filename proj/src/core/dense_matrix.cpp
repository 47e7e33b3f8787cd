#include "dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bkz {

template <class T>
DenseMatrix<T>::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, T{}) {
  require(rows >= 1 && cols >= 1, ErrorCode::InvalidArgument, "matrix dimensions must be positive");
}

template <class T>
DenseMatrix<T>::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require(rows >= 1 && cols >= 1, ErrorCode::InvalidArgument, "matrix dimensions must be positive");
  require_dims(data_.size(), rows * cols, "matrix entries");
}

template <class T>
DenseMatrix<T> DenseMatrix<T>::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
  return m;
}

template <class T>
bool DenseMatrix<T>::standardized(double tol) const {
  for (std::size_t i = 0; i < rows_; ++i) {
    if (std::abs(norm2(row(i)) - 1.0) > tol) return false;
  }
  return true;
}

template <class T>
double DenseMatrix<T>::frobenius_norm() const {
  return norm2(std::span<const T>(data_));
}

template <class T>
void DenseMatrix<T>::apply(std::span<const T> x, std::span<T> y, FlopCounter* fc) const {
  require_dims(x.size(), cols_, "matvec input");
  require_dims(y.size(), rows_, "matvec output");
  for (std::size_t i = 0; i < rows_; ++i) y[i] = dotu(row(i), x);
  count(fc, FlopCost<T>::mul_add * rows_ * cols_);
}

template <class T>
void DenseMatrix<T>::apply_adjoint(std::span<const T> y, std::span<T> x, FlopCounter* fc) const {
  require_dims(y.size(), rows_, "adjoint matvec input");
  require_dims(x.size(), cols_, "adjoint matvec output");
  std::fill(x.begin(), x.end(), T{});
  for (std::size_t i = 0; i < rows_; ++i) {
    const T yi = y[i];
    const T* r = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) x[j] += conj(r[j]) * yi;
  }
  count(fc, FlopCost<T>::mul_add * rows_ * cols_);
}

template <class T>
DenseMatrix<T> DenseMatrix<T>::adjoint() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = conj((*this)(i, j));
  return out;
}

template <class T>
DenseMatrix<T> row_submatrix(const DenseMatrix<T>& a, std::span<const std::size_t> tau) {
  require(!tau.empty(), ErrorCode::InvalidArgument, "row index set is empty");
  std::vector<std::size_t> sorted(tau.begin(), tau.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    require(sorted[k] < a.rows(), ErrorCode::InvalidArgument,
            "row index " + std::to_string(sorted[k]) + " out of range");
    require(k == 0 || sorted[k] != sorted[k - 1], ErrorCode::InvalidArgument,
            "duplicate row index " + std::to_string(sorted[k]));
  }
  std::vector<T> data;
  data.reserve(sorted.size() * a.cols());
  for (std::size_t i : sorted) {
    auto r = a.row(i);
    data.insert(data.end(), r.begin(), r.end());
  }
  return DenseMatrix<T>(sorted.size(), a.cols(), std::move(data));
}

template <class T>
DenseMatrix<T> gram_block(const DenseMatrix<T>& a_tau, FlopCounter* fc) {
  const std::size_t k = a_tau.rows();
  DenseMatrix<T> g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      // (A A*)_ij = <a_i, a_j> = sum_k a_ik conj(a_jk)
      const T v = dotc(a_tau.row(j), a_tau.row(i));
      g(i, j) = v;
      g(j, i) = conj(v);
    }
  }
  count(fc, FlopCost<T>::mul_add * a_tau.cols() * k * (k + 1) / 2);
  return g;
}

template <class T>
DenseMatrix<T> normal_matrix(const DenseMatrix<T>& a) {
  const std::size_t d = a.cols();
  DenseMatrix<T> g(d, d);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (std::size_t p = 0; p < d; ++p) {
      const T cp = conj(r[p]);
      for (std::size_t q = 0; q <= p; ++q) g(p, q) += cp * r[q];
    }
  }
  for (std::size_t p = 0; p < d; ++p) {
    g(p, p) = T{real_part(g(p, p))};
    for (std::size_t q = 0; q < p; ++q) g(q, p) = conj(g(p, q));
  }
  return g;
}

template <class T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  require_dims(b.rows(), a.cols(), "matrix product inner dimension");
  DenseMatrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <class T>
DenseMatrix<T> normalize_rows(const DenseMatrix<T>& a) {
  DenseMatrix<T> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double nrm = norm2(a.row(i));
    require(nrm > 0.0, ErrorCode::InvalidArgument, "cannot normalize a zero row");
    for (auto& v : out.row(i)) v /= nrm;
  }
  return out;
}

DenseMatrix<cplx> to_complex(const DenseMatrix<double>& a) {
  return DenseMatrix<cplx>(a.rows(), a.cols(), std::vector<cplx>(a.data().begin(), a.data().end()));
}

template class DenseMatrix<double>;
template class DenseMatrix<cplx>;

#define BKZ_INSTANTIATE(T)                                                                  \
  template DenseMatrix<T> row_submatrix(const DenseMatrix<T>&, std::span<const std::size_t>); \
  template DenseMatrix<T> gram_block(const DenseMatrix<T>&, FlopCounter*);                  \
  template DenseMatrix<T> normal_matrix(const DenseMatrix<T>&);                             \
  template DenseMatrix<T> multiply(const DenseMatrix<T>&, const DenseMatrix<T>&);           \
  template DenseMatrix<T> normalize_rows(const DenseMatrix<T>&);
BKZ_INSTANTIATE(double)
BKZ_INSTANTIATE(cplx)
#undef BKZ_INSTANTIATE

}  // namespace bkz
