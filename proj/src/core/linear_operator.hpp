#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "dense_matrix.hpp"
#include "numeric.hpp"

namespace bkz {

/// Abstract n x d linear map with forward and adjoint application.
/// Implementations are immutable after construction.
template <class T>
class LinearOperator {
 public:
  using scalar_type = T;

  virtual ~LinearOperator() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;

  /// y = A x; spans are pre-sized by the caller.
  virtual void apply(std::span<const T> x, std::span<T> y, FlopCounter* fc = nullptr) const = 0;
  /// x = A* y
  virtual void apply_adjoint(std::span<const T> y, std::span<T> x,
                             FlopCounter* fc = nullptr) const = 0;

  /// Dense copy of the listed rows (ascending order). The default recovers
  /// row i as conj(A* e_i).
  virtual DenseMatrix<T> materialize_rows(std::span<const std::size_t> rows) const;

  /// Operator restricted to the rows in `tau`. Structured operators return a
  /// fast-multiply block when `tau` matches their natural structure.
  virtual std::unique_ptr<LinearOperator<T>> row_block(std::span<const std::size_t> tau) const;

  /// Direct access to dense storage, when the operator is a dense matrix.
  virtual const DenseMatrix<T>* dense() const { return nullptr; }

  /// Analytic per-step cost (complex flops) of a block Kaczmarz update with
  /// this operator as the block, when a cost model exists for it.
  virtual std::optional<std::uint64_t> block_step_model_flops() const { return std::nullopt; }

  /// True when A A* = I exactly by construction, so A† = A*.
  virtual bool orthonormal_rows() const { return false; }

  virtual std::string kind() const = 0;

  DenseMatrix<T> materialize() const;
};

/// Checked y = A x.
template <class T>
Vec<T> matvec(const LinearOperator<T>& a, std::span<const std::type_identity_t<T>> x, FlopCounter* fc = nullptr);
/// Checked x = A* y.
template <class T>
Vec<T> adjoint_matvec(const LinearOperator<T>& a, std::span<const std::type_identity_t<T>> y, FlopCounter* fc = nullptr);

template <class T>
class DenseOperator final : public LinearOperator<T> {
 public:
  explicit DenseOperator(DenseMatrix<T> m) : m_(std::move(m)) {}

  std::size_t rows() const override { return m_.rows(); }
  std::size_t cols() const override { return m_.cols(); }
  void apply(std::span<const T> x, std::span<T> y, FlopCounter* fc) const override {
    m_.apply(x, y, fc);
  }
  void apply_adjoint(std::span<const T> y, std::span<T> x, FlopCounter* fc) const override {
    m_.apply_adjoint(y, x, fc);
  }
  DenseMatrix<T> materialize_rows(std::span<const std::size_t> rows) const override {
    return row_submatrix(m_, rows);
  }
  std::unique_ptr<LinearOperator<T>> row_block(std::span<const std::size_t> tau) const override {
    return std::make_unique<DenseOperator<T>>(row_submatrix(m_, tau));
  }
  const DenseMatrix<T>* dense() const override { return &m_; }
  std::string kind() const override { return "dense"; }

  const DenseMatrix<T>& matrix() const { return m_; }

 private:
  DenseMatrix<T> m_;
};

/// A real operator viewed as a complex one.
class ComplexifiedOperator final : public LinearOperator<cplx> {
 public:
  explicit ComplexifiedOperator(std::shared_ptr<const LinearOperator<double>> inner)
      : inner_(std::move(inner)) {}

  std::size_t rows() const override { return inner_->rows(); }
  std::size_t cols() const override { return inner_->cols(); }
  void apply(std::span<const cplx> x, std::span<cplx> y, FlopCounter* fc) const override;
  void apply_adjoint(std::span<const cplx> y, std::span<cplx> x, FlopCounter* fc) const override;
  std::string kind() const override { return "complexified(" + inner_->kind() + ")"; }

 private:
  std::shared_ptr<const LinearOperator<double>> inner_;
};

std::shared_ptr<const LinearOperator<cplx>> as_complex(std::shared_ptr<const LinearOperator<double>> a);

extern template class LinearOperator<double>;
extern template class LinearOperator<cplx>;

}  // namespace bkz
