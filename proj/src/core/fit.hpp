#pragma once

#include <memory>
#include <vector>

#include "fft.hpp"
#include "linear_operator.hpp"
#include "rng.hpp"

namespace bkz {

/// W = F E A in composed form: W x = F(xi .* (A x)), W* y = A*(xi .* F* y).
class FitOperator final : public LinearOperator<cplx> {
 public:
  FitOperator(std::shared_ptr<const LinearOperator<cplx>> a, std::vector<double> signs);

  std::size_t rows() const override { return a_->rows(); }
  std::size_t cols() const override { return a_->cols(); }
  void apply(std::span<const cplx> x, std::span<cplx> y, FlopCounter* fc) const override;
  void apply_adjoint(std::span<const cplx> y, std::span<cplx> x, FlopCounter* fc) const override;
  std::string kind() const override { return "fit(" + a_->kind() + ")"; }

  const std::vector<double>& signs() const { return signs_; }
  /// S v = F(xi .* v) for a length-n vector.
  Vec<cplx> transform(std::span<const cplx> v) const;

 private:
  std::shared_ptr<const LinearOperator<cplx>> a_;
  std::vector<double> signs_;
  FftPlan plan_;
};

struct FitResult {
  std::shared_ptr<const FitOperator> w;
  Vec<cplx> b_tilde;
  std::vector<double> signs;
};

/// Draws independent Rademacher signs and returns W = S A, S b.
FitResult fit_transform(std::shared_ptr<const LinearOperator<cplx>> a, std::span<const cplx> b,
                        Rng& rng);
/// Same with caller-chosen signs (all +1 reduces S to the DFT).
FitResult fit_transform_with_signs(std::shared_ptr<const LinearOperator<cplx>> a,
                                   std::span<const cplx> b, std::vector<double> signs);

/// Right-hand side c_fit * n / ln^3(1+n) of the norm hypothesis.
double fit_norm_threshold(std::size_t n, double c_fit);

/// ||A||^2 <= c_fit * n / ln^3(1+n) with ||A|| from sigma_extremes.
/// Requires a standardized matrix.
template <class T>
bool check_fit_hypothesis(const DenseMatrix<T>& a, double c_fit);

}  // namespace bkz
