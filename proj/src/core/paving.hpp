#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "eigen.hpp"
#include "linear_operator.hpp"
#include "rng.hpp"

namespace bkz {

/// Partition of the row indices {0..n-1} into nonempty disjoint blocks.
/// Indices inside a block are kept in ascending order.
class RowPaving {
 public:
  RowPaving() = default;
  RowPaving(std::size_t n, std::vector<std::vector<std::size_t>> blocks);

  std::size_t rows() const noexcept { return n_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  bool empty() const noexcept { return blocks_.empty(); }
  const std::vector<std::size_t>& block(std::size_t i) const { return blocks_[i]; }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  std::size_t max_block_size() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<std::size_t>> blocks_;
};

/// Blocks of sizes floor(i n/m) - floor((i-1) n/m) filled from a uniformly
/// random permutation.
RowPaving random_partition(std::size_t n, std::size_t m, Rng& rng);
/// Same block layout, filled from a caller-supplied permutation of 0..n-1.
RowPaving partition_from_permutation(std::span<const std::size_t> perm, std::size_t m);
RowPaving single_row_paving(std::size_t n);

/// ceil(c_rand * ||A||^2 * ln(1+n) / delta^2), clamped to [1, n]. Sets
/// `clamped` when the formula asked for more than n blocks.
std::size_t random_paving_block_count(double norm_sq, std::size_t n, double delta, double c_rand,
                                      bool* clamped = nullptr);
/// m consecutive runs of rows with the random-partition size law.
RowPaving contiguous_paving(std::size_t n, std::size_t m);

struct PavingBounds {
  std::size_t m = 0;
  double alpha = 0.0;
  double beta = 0.0;
  /// false when a block exceeded the exact eigensolve cap.
  bool exact = true;
  std::size_t rank_deficient_blocks = 0;
  std::vector<std::string> warnings;

  /// beta / alpha, or +inf when alpha = 0.
  double condition_bound() const;
};

PavingBounds compute_paving_bounds(const LinearOperator<double>& a, const RowPaving& paving,
                                   std::size_t cap = kDefaultEigenCap);
PavingBounds compute_paving_bounds(const LinearOperator<cplx>& a, const RowPaving& paving,
                                   std::size_t cap = kDefaultEigenCap);

struct CoherenceReport {
  double max_off_diagonal = 0.0;
  double max_diagonal_deviation = 0.0;
  std::pair<std::size_t, std::size_t> argmax_pair{0, 0};
  std::size_t pairs_examined = 0;
  bool sampled = false;
};

/// Exact all-pairs coherence max_{i != l} |<a_i, a_l>| and max | ||a_i||^2 - 1 |.
template <class T>
CoherenceReport coherence(const DenseMatrix<T>& a);

/// Coherence over `pairs` uniformly drawn distinct pairs. The diagonal
/// deviation is still exact.
template <class T>
CoherenceReport coherence_sampled(const DenseMatrix<T>& a, std::size_t pairs, Rng& rng);

/// Above this many rows, coherence_auto samples instead of enumerating.
inline constexpr std::size_t kExactCoherenceRows = 4096;

template <class T>
CoherenceReport coherence_auto(const DenseMatrix<T>& a, Rng& rng,
                               std::size_t sample_pairs = 4'000'000);

/// (1/m) sum over blocks of ||v_block||^2.
template <class T>
double mean_block_energy(std::span<const T> v, const RowPaving& paving);

/// Text format: first line "m n", then one line per block of 1-based indices.
void write_paving(std::ostream& os, const RowPaving& paving);
RowPaving read_paving(std::istream& is);
void write_paving_file(const std::string& path, const RowPaving& paving);
RowPaving read_paving_file(const std::string& path);

}  // namespace bkz
