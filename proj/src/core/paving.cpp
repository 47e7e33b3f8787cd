#include "paving.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace bkz {

RowPaving::RowPaving(std::size_t n, std::vector<std::vector<std::size_t>> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  require(n_ >= 1, ErrorCode::InvalidArgument, "paving must cover at least one row");
  require(!blocks_.empty(), ErrorCode::InvalidArgument, "paving needs at least one block");
  std::vector<char> seen(n_, 0);
  std::size_t covered = 0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    auto& blk = blocks_[b];
    require(!blk.empty(), ErrorCode::InvalidArgument,
            "paving block " + std::to_string(b + 1) + " is empty");
    std::sort(blk.begin(), blk.end());
    for (std::size_t i : blk) {
      require(i < n_, ErrorCode::InvalidArgument,
              "paving index " + std::to_string(i + 1) + " exceeds row count " + std::to_string(n_));
      require(!seen[i], ErrorCode::InvalidArgument,
              "row " + std::to_string(i + 1) + " appears in more than one block");
      seen[i] = 1;
      ++covered;
    }
  }
  require(covered == n_, ErrorCode::InvalidArgument,
          "paving covers " + std::to_string(covered) + " of " + std::to_string(n_) + " rows");
}

std::size_t RowPaving::max_block_size() const {
  std::size_t s = 0;
  for (const auto& b : blocks_) s = std::max(s, b.size());
  return s;
}

RowPaving partition_from_permutation(std::span<const std::size_t> perm, std::size_t m) {
  const std::size_t n = perm.size();
  require(m >= 1 && m <= n, ErrorCode::InvalidArgument,
          "block count must satisfy 1 <= m <= n (m=" + std::to_string(m) +
              ", n=" + std::to_string(n) + ")");
  std::vector<std::vector<std::size_t>> blocks(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t lo = i * n / m;
    const std::size_t hi = (i + 1) * n / m;
    blocks[i].assign(perm.begin() + static_cast<std::ptrdiff_t>(lo),
                     perm.begin() + static_cast<std::ptrdiff_t>(hi));
  }
  return RowPaving(n, std::move(blocks));
}

RowPaving random_partition(std::size_t n, std::size_t m, Rng& rng) {
  require(m >= 1 && m <= n, ErrorCode::InvalidArgument,
          "block count must satisfy 1 <= m <= n (m=" + std::to_string(m) +
              ", n=" + std::to_string(n) + ")");
  const auto perm = rng.permutation(n);
  return partition_from_permutation(perm, m);
}

std::size_t random_paving_block_count(double norm_sq, std::size_t n, double delta, double c_rand,
                                      bool* clamped) {
  require(delta > 0.0 && c_rand > 0.0 && n >= 1, ErrorCode::InvalidArgument,
          "delta, c_rand and n must be positive");
  const double raw = std::ceil(c_rand * norm_sq * std::log1p(static_cast<double>(n)) / (delta * delta));
  const bool over = !(raw <= static_cast<double>(n));
  if (clamped) *clamped = over;
  if (over) return n;
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

RowPaving single_row_paving(std::size_t n) {
  std::vector<std::vector<std::size_t>> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[i] = {i};
  return RowPaving(n, std::move(blocks));
}

RowPaving contiguous_paving(std::size_t n, std::size_t m) {
  std::vector<std::size_t> ident(n);
  for (std::size_t i = 0; i < n; ++i) ident[i] = i;
  return partition_from_permutation(ident, m);
}

double PavingBounds::condition_bound() const {
  return alpha > 0.0 ? beta / alpha : std::numeric_limits<double>::infinity();
}

namespace {

template <class T>
PavingBounds bounds_impl(const LinearOperator<T>& a, const RowPaving& paving, std::size_t cap) {
  require_dims(paving.rows(), a.rows(), "paving row count");
  PavingBounds out;
  out.m = paving.size();
  out.alpha = std::numeric_limits<double>::infinity();
  out.beta = 0.0;
  for (std::size_t b = 0; b < paving.size(); ++b) {
    const auto& tau = paving.block(b);
    const EigenRange r = gram_eig_bounds(a.materialize_rows(tau), cap);
    out.exact = out.exact && r.exact;
    if (r.lambda_min <= 0.0) {
      ++out.rank_deficient_blocks;
    }
    out.alpha = std::min(out.alpha, r.lambda_min);
    out.beta = std::max(out.beta, r.lambda_max);
  }
  if (out.rank_deficient_blocks > 0) {
    out.warnings.push_back(std::to_string(out.rank_deficient_blocks) +
                           " block(s) are rank deficient; alpha = 0");
  }
  if (!out.exact) {
    out.warnings.push_back("blocks larger than " + std::to_string(cap) +
                           " rows used iterative eigenvalue estimates");
  }
  return out;
}

}  // namespace

PavingBounds compute_paving_bounds(const LinearOperator<double>& a, const RowPaving& paving,
                                   std::size_t cap) {
  return bounds_impl(a, paving, cap);
}

PavingBounds compute_paving_bounds(const LinearOperator<cplx>& a, const RowPaving& paving,
                                   std::size_t cap) {
  return bounds_impl(a, paving, cap);
}

template <class T>
CoherenceReport coherence(const DenseMatrix<T>& a) {
  CoherenceReport out;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    out.max_diagonal_deviation = std::max(out.max_diagonal_deviation, std::abs(norm_sq(a.row(i)) - 1.0));
    for (std::size_t l = i + 1; l < n; ++l) {
      const double v = std::abs(dotc(a.row(i), a.row(l)));
      if (v > out.max_off_diagonal || out.pairs_examined == 0) {
        out.max_off_diagonal = std::max(out.max_off_diagonal, v);
        out.argmax_pair = {i, l};
      }
      ++out.pairs_examined;
    }
  }
  return out;
}

template <class T>
CoherenceReport coherence_sampled(const DenseMatrix<T>& a, std::size_t pairs, Rng& rng) {
  CoherenceReport out;
  out.sampled = true;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    out.max_diagonal_deviation = std::max(out.max_diagonal_deviation, std::abs(norm_sq(a.row(i)) - 1.0));
  if (n < 2) return out;
  for (std::size_t k = 0; k < pairs; ++k) {
    const std::size_t i = rng.uniform_index(n);
    std::size_t l = rng.uniform_index(n - 1);
    if (l >= i) ++l;
    const double v = std::abs(dotc(a.row(i), a.row(l)));
    if (v > out.max_off_diagonal || out.pairs_examined == 0) {
      out.max_off_diagonal = std::max(out.max_off_diagonal, v);
      out.argmax_pair = {std::min(i, l), std::max(i, l)};
    }
    ++out.pairs_examined;
  }
  return out;
}

template <class T>
CoherenceReport coherence_auto(const DenseMatrix<T>& a, Rng& rng, std::size_t sample_pairs) {
  if (a.rows() <= kExactCoherenceRows) return coherence(a);
  return coherence_sampled(a, sample_pairs, rng);
}

template <class T>
double mean_block_energy(std::span<const T> v, const RowPaving& paving) {
  require_dims(v.size(), paving.rows(), "vector length vs paving");
  double total = 0.0;
  for (const auto& blk : paving.blocks()) {
    double e = 0.0;
    for (std::size_t i : blk) e += abs2(v[i]);
    total += e;
  }
  return total / static_cast<double>(paving.size());
}

void write_paving(std::ostream& os, const RowPaving& paving) {
  os << paving.size() << ' ' << paving.rows() << '\n';
  for (const auto& blk : paving.blocks()) {
    for (std::size_t k = 0; k < blk.size(); ++k) os << (k ? " " : "") << blk[k] + 1;
    os << '\n';
  }
}

RowPaving read_paving(std::istream& is) {
  std::string line;
  std::size_t m = 0, n = 0;
  while (std::getline(is, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  {
    std::istringstream hs(line);
    require(static_cast<bool>(hs >> m >> n), ErrorCode::Parse, "paving header must be 'm n'");
  }
  std::vector<std::vector<std::size_t>> blocks;
  while (blocks.size() < m && std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<std::size_t> blk;
    long long idx;
    while (ls >> idx) {
      require(idx >= 1, ErrorCode::Parse, "paving indices are 1-based positive integers");
      blk.push_back(static_cast<std::size_t>(idx - 1));
    }
    require(ls.eof(), ErrorCode::Parse, "non-integer token in paving block line");
    blocks.push_back(std::move(blk));
  }
  require(blocks.size() == m, ErrorCode::Parse,
          "paving file declares " + std::to_string(m) + " blocks but lists " +
              std::to_string(blocks.size()));
  return RowPaving(n, std::move(blocks));
}

void write_paving_file(const std::string& path, const RowPaving& paving) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::Io, "cannot open " + path + " for writing");
  write_paving(os, paving);
  require(static_cast<bool>(os), ErrorCode::Io, "write failed for " + path);
}

RowPaving read_paving_file(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::Io, "cannot open " + path);
  return read_paving(is);
}

template CoherenceReport coherence(const DenseMatrix<double>&);
template CoherenceReport coherence(const DenseMatrix<cplx>&);
template CoherenceReport coherence_sampled(const DenseMatrix<double>&, std::size_t, Rng&);
template CoherenceReport coherence_sampled(const DenseMatrix<cplx>&, std::size_t, Rng&);
template CoherenceReport coherence_auto(const DenseMatrix<double>&, Rng&, std::size_t);
template CoherenceReport coherence_auto(const DenseMatrix<cplx>&, Rng&, std::size_t);
template double mean_block_energy(std::span<const double>, const RowPaving&);
template double mean_block_energy(std::span<const cplx>, const RowPaving&);

}  // namespace bkz
