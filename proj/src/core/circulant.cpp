#include "circulant.hpp"

#include <algorithm>

#include "flops.hpp"

namespace bkz {

CirculantBlock::CirculantBlock(std::shared_ptr<const FftPlan> plan, std::vector<double> signs,
                               std::size_t rows)
    : plan_(std::move(plan)), signs_(std::move(signs)), rows_(rows) {
  require_dims(signs_.size(), plan_->size(), "circulant sign vector");
  require(rows_ >= 1 && rows_ <= plan_->size(), ErrorCode::InvalidArgument,
          "circulant block rows must lie in [1, dim]");
}

void CirculantBlock::apply(std::span<const cplx> x, std::span<cplx> y, FlopCounter* fc) const {
  require_dims(x.size(), cols(), "circulant block input");
  require_dims(y.size(), rows_, "circulant block output");
  Vec<cplx> work(x.begin(), x.end());
  plan_->forward(work, fc);
  for (std::size_t k = 0; k < work.size(); ++k) work[k] *= signs_[k];
  count(fc, 2 * work.size());
  plan_->inverse(work, fc);
  std::copy_n(work.begin(), rows_, y.begin());
}

void CirculantBlock::apply_adjoint(std::span<const cplx> y, std::span<cplx> x, FlopCounter* fc) const {
  require_dims(y.size(), rows_, "circulant block adjoint input");
  require_dims(x.size(), cols(), "circulant block adjoint output");
  // (R F* E F)* = F* E F R*, with E real
  Vec<cplx> work(cols(), cplx{});
  std::copy(y.begin(), y.end(), work.begin());
  plan_->forward(work, fc);
  for (std::size_t k = 0; k < work.size(); ++k) work[k] *= signs_[k];
  count(fc, 2 * work.size());
  plan_->inverse(work, fc);
  std::copy(work.begin(), work.end(), x.begin());
}

std::optional<std::uint64_t> CirculantBlock::block_step_model_flops() const {
  return flop_model(StepKind::CirculantBlock, cols());
}

PartialCirculantStack::PartialCirculantStack(std::size_t rows_per_block,
                                             std::vector<std::vector<double>> signs)
    : rows_per_block_(rows_per_block) {
  require(!signs.empty(), ErrorCode::InvalidArgument, "circulant stack needs at least one block");
  plan_ = std::make_shared<const FftPlan>(signs.front().size());
  for (auto& s : signs) {
    for (double v : s)
      require(v == 1.0 || v == -1.0, ErrorCode::InvalidArgument, "circulant signs must be +-1");
    blocks_.push_back(std::make_shared<const CirculantBlock>(plan_, std::move(s), rows_per_block));
  }
}

void PartialCirculantStack::apply(std::span<const cplx> x, std::span<cplx> y, FlopCounter* fc) const {
  require_dims(x.size(), cols(), "circulant stack input");
  require_dims(y.size(), rows(), "circulant stack output");
  Vec<cplx> fx(x.begin(), x.end());
  plan_->forward(fx, fc);
  Vec<cplx> work(cols());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& s = blocks_[b]->signs();
    for (std::size_t k = 0; k < work.size(); ++k) work[k] = fx[k] * s[k];
    count(fc, 2 * work.size());
    plan_->inverse(work, fc);
    std::copy_n(work.begin(), rows_per_block_, y.begin() + b * rows_per_block_);
  }
}

void PartialCirculantStack::apply_adjoint(std::span<const cplx> y, std::span<cplx> x,
                                          FlopCounter* fc) const {
  require_dims(y.size(), rows(), "circulant stack adjoint input");
  require_dims(x.size(), cols(), "circulant stack adjoint output");
  Vec<cplx> acc(cols(), cplx{});
  Vec<cplx> work(cols());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    std::fill(work.begin(), work.end(), cplx{});
    std::copy_n(y.begin() + b * rows_per_block_, rows_per_block_, work.begin());
    plan_->forward(work, fc);
    const auto& s = blocks_[b]->signs();
    for (std::size_t k = 0; k < work.size(); ++k) acc[k] += work[k] * s[k];
    count(fc, 4 * work.size());
  }
  plan_->inverse(acc, fc);
  std::copy(acc.begin(), acc.end(), x.begin());
}

std::unique_ptr<LinearOperator<cplx>> PartialCirculantStack::row_block(
    std::span<const std::size_t> tau) const {
  std::vector<std::size_t> sorted(tau.begin(), tau.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() == rows_per_block_ && sorted.front() % rows_per_block_ == 0 &&
      sorted.back() == sorted.front() + rows_per_block_ - 1 && sorted.back() < rows()) {
    const auto& blk = *blocks_[sorted.front() / rows_per_block_];
    return std::make_unique<CirculantBlock>(plan_, blk.signs(), rows_per_block_);
  }
  return LinearOperator<cplx>::row_block(tau);
}

}  // namespace bkz
