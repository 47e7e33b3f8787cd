#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "fft.hpp"
#include "linear_operator.hpp"

namespace bkz {

/// One partial circulant block C = R F* E F: the first `rows` coordinates of
/// the circulant map whose eigenvalues are the Rademacher signs. Its rows are
/// orthonormal, so C C* = I.
class CirculantBlock final : public LinearOperator<cplx> {
 public:
  CirculantBlock(std::shared_ptr<const FftPlan> plan, std::vector<double> signs, std::size_t rows);

  std::size_t rows() const override { return rows_; }
  std::size_t cols() const override { return plan_->size(); }
  void apply(std::span<const cplx> x, std::span<cplx> y, FlopCounter* fc) const override;
  void apply_adjoint(std::span<const cplx> y, std::span<cplx> x, FlopCounter* fc) const override;
  std::optional<std::uint64_t> block_step_model_flops() const override;
  bool orthonormal_rows() const override { return true; }
  std::string kind() const override { return "circulant-block"; }

  const std::vector<double>& signs() const { return signs_; }

 private:
  std::shared_ptr<const FftPlan> plan_;
  std::vector<double> signs_;
  std::size_t rows_;
};

/// Vertical stack of partial circulant blocks sharing one dimension.
class PartialCirculantStack final : public LinearOperator<cplx> {
 public:
  /// `signs[i]` is the length-`dim` sign diagonal of block i.
  PartialCirculantStack(std::size_t rows_per_block, std::vector<std::vector<double>> signs);

  std::size_t rows() const override { return blocks_.size() * rows_per_block_; }
  std::size_t cols() const override { return plan_->size(); }
  void apply(std::span<const cplx> x, std::span<cplx> y, FlopCounter* fc) const override;
  void apply_adjoint(std::span<const cplx> y, std::span<cplx> x, FlopCounter* fc) const override;
  std::unique_ptr<LinearOperator<cplx>> row_block(std::span<const std::size_t> tau) const override;
  std::string kind() const override { return "partial-circulant-stack"; }

  std::size_t block_count() const { return blocks_.size(); }
  std::size_t rows_per_block() const { return rows_per_block_; }
  const CirculantBlock& block(std::size_t i) const { return *blocks_[i]; }

 private:
  std::shared_ptr<const FftPlan> plan_;
  std::size_t rows_per_block_;
  std::vector<std::shared_ptr<const CirculantBlock>> blocks_;
};

}  // namespace bkz
