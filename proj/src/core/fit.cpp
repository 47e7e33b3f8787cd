#include "fit.hpp"

#include <cmath>

#include "spectral.hpp"

namespace bkz {

FitOperator::FitOperator(std::shared_ptr<const LinearOperator<cplx>> a, std::vector<double> signs)
    : a_(std::move(a)), signs_(std::move(signs)), plan_(a_->rows()) {
  require_dims(signs_.size(), a_->rows(), "FIT sign vector");
  for (double s : signs_)
    require(s == 1.0 || s == -1.0, ErrorCode::InvalidArgument, "FIT signs must be +-1");
}

void FitOperator::apply(std::span<const cplx> x, std::span<cplx> y, FlopCounter* fc) const {
  require_dims(x.size(), cols(), "FIT operator input");
  require_dims(y.size(), rows(), "FIT operator output");
  a_->apply(x, y, fc);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= signs_[i];
  count(fc, 2 * y.size());
  plan_.forward(y, fc);
}

void FitOperator::apply_adjoint(std::span<const cplx> y, std::span<cplx> x, FlopCounter* fc) const {
  require_dims(y.size(), rows(), "FIT adjoint input");
  require_dims(x.size(), cols(), "FIT adjoint output");
  Vec<cplx> z(y.begin(), y.end());
  plan_.inverse(z, fc);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] *= signs_[i];
  count(fc, 2 * z.size());
  a_->apply_adjoint(z, x, fc);
}

Vec<cplx> FitOperator::transform(std::span<const cplx> v) const {
  require_dims(v.size(), rows(), "FIT right-hand side");
  Vec<cplx> out(v.begin(), v.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= signs_[i];
  plan_.forward(out);
  return out;
}

FitResult fit_transform_with_signs(std::shared_ptr<const LinearOperator<cplx>> a,
                                   std::span<const cplx> b, std::vector<double> signs) {
  require_dims(b.size(), a->rows(), "FIT right-hand side");
  auto w = std::make_shared<const FitOperator>(std::move(a), signs);
  FitResult out{w, w->transform(b), std::move(signs)};
  return out;
}

FitResult fit_transform(std::shared_ptr<const LinearOperator<cplx>> a, std::span<const cplx> b,
                        Rng& rng) {
  std::vector<double> signs(a->rows());
  for (auto& s : signs) s = rng.rademacher();
  return fit_transform_with_signs(std::move(a), b, std::move(signs));
}

double fit_norm_threshold(std::size_t n, double c_fit) {
  const double l = std::log1p(static_cast<double>(n));
  return c_fit * static_cast<double>(n) / (l * l * l);
}

template <class T>
bool check_fit_hypothesis(const DenseMatrix<T>& a, double c_fit) {
  require(a.standardized(), ErrorCode::InvalidArgument,
          "the FIT norm hypothesis is stated for matrices with unit-norm rows");
  require(c_fit > 0.0, ErrorCode::InvalidArgument, "c_fit must be positive");
  const auto s = sigma_extremes(DenseOperator<T>(a));
  return s.sigma_max_sq() <= fit_norm_threshold(a.rows(), c_fit);
}

template bool check_fit_hypothesis(const DenseMatrix<double>&, double);
template bool check_fit_hypothesis(const DenseMatrix<cplx>&, double);

}  // namespace bkz
