#pragma once

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "dense_matrix.hpp"
#include "oracles.hpp"
#include "rng.hpp"

namespace testutil {

template <class T>
oracle::Mat<T> to_oracle(const bkz::DenseMatrix<T>& a) {
  oracle::Mat<T> m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

template <class T>
bkz::DenseMatrix<T> from_oracle(const oracle::Mat<T>& m) {
  return bkz::DenseMatrix<T>(m.r, m.c, m.v);
}

inline bkz::DenseMatrix<double> gaussian(std::size_t r, std::size_t c, bkz::Rng& rng) {
  bkz::DenseMatrix<double> a(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a(i, j) = rng.normal();
  return a;
}

inline bkz::DenseMatrix<bkz::cplx> gaussian_c(std::size_t r, std::size_t c, bkz::Rng& rng) {
  bkz::DenseMatrix<bkz::cplx> a(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a(i, j) = {rng.normal(), rng.normal()};
  return a;
}

template <class T>
std::vector<T> random_vec(std::size_t n, bkz::Rng& rng) {
  std::vector<T> v(n);
  for (auto& x : v) {
    if constexpr (std::is_same_v<T, double>) x = rng.normal();
    else x = T(rng.normal(), rng.normal());
  }
  return v;
}

template <class T>
double max_abs_diff(const std::vector<T>& a, const std::vector<T>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Residual of norm `e_norm` orthogonal to range(A), so x_star stays the
/// least-squares minimizer of ||A x - (A x_star - e)||.
template <class T>
std::vector<T> orthogonal_residual(const bkz::DenseMatrix<T>& a, double e_norm, bkz::Rng& rng) {
  const auto r = random_vec<T>(a.rows(), rng);
  auto o = to_oracle(a);
  const auto ah = oracle::adj(o);
  const auto z = oracle::gauss_solve(oracle::mul(ah, o), oracle::mv(ah, r));
  const auto az = oracle::mv(o, z);
  std::vector<T> e(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) e[i] = r[i] - az[i];
  const double s = e_norm / std::sqrt(oracle::norm2sq(e));
  for (auto& v : e) v *= s;
  return e;
}

}  // namespace testutil
