#include "linear_operator.hpp"

#include <algorithm>

namespace bkz {

template <class T>
DenseMatrix<T> LinearOperator<T>::materialize_rows(std::span<const std::size_t> rows_in) const {
  std::vector<std::size_t> sorted(rows_in.begin(), rows_in.end());
  std::sort(sorted.begin(), sorted.end());
  require(!sorted.empty(), ErrorCode::InvalidArgument, "row index set is empty");
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    require(sorted[k] < rows(), ErrorCode::InvalidArgument, "row index out of range");
    require(k == 0 || sorted[k] != sorted[k - 1], ErrorCode::InvalidArgument, "duplicate row index");
  }
  DenseMatrix<T> out(sorted.size(), cols());
  Vec<T> unit(rows(), T{});
  Vec<T> col(cols());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    unit[sorted[k]] = T{1};
    apply_adjoint(unit, col);
    unit[sorted[k]] = T{};
    for (std::size_t j = 0; j < cols(); ++j) out(k, j) = conj(col[j]);
  }
  return out;
}

template <class T>
std::unique_ptr<LinearOperator<T>> LinearOperator<T>::row_block(std::span<const std::size_t> tau) const {
  return std::make_unique<DenseOperator<T>>(materialize_rows(tau));
}

template <class T>
DenseMatrix<T> LinearOperator<T>::materialize() const {
  if (const auto* d = dense()) return *d;
  std::vector<std::size_t> all(rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return materialize_rows(all);
}

template <class T>
Vec<T> matvec(const LinearOperator<T>& a, std::span<const std::type_identity_t<T>> x, FlopCounter* fc) {
  require_dims(x.size(), a.cols(), "matvec input");
  Vec<T> y(a.rows());
  a.apply(x, y, fc);
  return y;
}

template <class T>
Vec<T> adjoint_matvec(const LinearOperator<T>& a, std::span<const std::type_identity_t<T>> y, FlopCounter* fc) {
  require_dims(y.size(), a.rows(), "adjoint matvec input");
  Vec<T> x(a.cols());
  a.apply_adjoint(y, x, fc);
  return x;
}

void ComplexifiedOperator::apply(std::span<const cplx> x, std::span<cplx> y, FlopCounter* fc) const {
  Vec<double> re(x.size()), im(x.size()), yr(y.size()), yi(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    re[i] = x[i].real();
    im[i] = x[i].imag();
  }
  inner_->apply(re, yr, fc);
  inner_->apply(im, yi, fc);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = {yr[i], yi[i]};
}

void ComplexifiedOperator::apply_adjoint(std::span<const cplx> y, std::span<cplx> x,
                                         FlopCounter* fc) const {
  Vec<double> re(y.size()), im(y.size()), xr(x.size()), xi(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    re[i] = y[i].real();
    im[i] = y[i].imag();
  }
  inner_->apply_adjoint(re, xr, fc);
  inner_->apply_adjoint(im, xi, fc);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = {xr[i], xi[i]};
}

std::shared_ptr<const LinearOperator<cplx>> as_complex(std::shared_ptr<const LinearOperator<double>> a) {
  if (const auto* d = a->dense()) return std::make_shared<DenseOperator<cplx>>(to_complex(*d));
  return std::make_shared<ComplexifiedOperator>(std::move(a));
}

template class LinearOperator<double>;
template class LinearOperator<cplx>;
template Vec<double> matvec(const LinearOperator<double>&, std::span<const double>, FlopCounter*);
template Vec<cplx> matvec(const LinearOperator<cplx>&, std::span<const cplx>, FlopCounter*);
template Vec<double> adjoint_matvec(const LinearOperator<double>&, std::span<const double>, FlopCounter*);
template Vec<cplx> adjoint_matvec(const LinearOperator<cplx>&, std::span<const cplx>, FlopCounter*);

}  // namespace bkz
