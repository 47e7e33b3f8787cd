#pragma once

#include <cstddef>
#include <cstdint>

#include "linear_operator.hpp"

namespace bkz {

enum class SpectralMethod { ExactSmall, PowerIteration };

struct SpectralEstimates {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  SpectralMethod method = SpectralMethod::ExactSmall;
  /// false when the iteration budget ran out before the relative tolerance
  /// was met; the values are then the last iterates.
  bool converged = true;
  std::size_t iterations = 0;

  double sigma_max_sq() const { return sigma_max * sigma_max; }
  double sigma_min_sq() const { return sigma_min * sigma_min; }
};

struct SpectralOptions {
  std::size_t exact_cap = 512;
  double rel_tol = 1e-6;
  std::size_t max_iters = 5000;
  std::uint64_t seed = 0x5bec7a1;
};

/// Largest and smallest singular values of A. For d <= exact_cap the
/// eigenvalues of A*A are computed exactly; otherwise power iteration on A*A
/// gives sigma_max and inverse iteration (conjugate-gradient solves with A*A)
/// gives sigma_min.
template <class T>
SpectralEstimates sigma_extremes(const LinearOperator<T>& a, const SpectralOptions& opt = {});

/// A*A assembled column by column from d adjoint-forward products.
template <class T>
DenseMatrix<T> normal_matrix(const LinearOperator<T>& a);

}  // namespace bkz
