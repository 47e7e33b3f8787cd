#pragma once

// Reference implementations used only by the tests. Each one is written
// from the defining formula with plain loops and shares no code with the
// library routines it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

/// Row-major matrix of doubles or complex doubles.
template <class T>
struct Mat {
  std::size_t r = 0, c = 0;
  std::vector<T> v;
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : r(rows), c(cols), v(rows * cols, T{}) {}
  T& operator()(std::size_t i, std::size_t j) { return v[i * c + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return v[i * c + j]; }
};

inline double cj(double x) { return x; }
inline cd cj(cd x) { return std::conj(x); }
inline double sq(double x) { return x * x; }
inline double sq(cd x) { return std::norm(x); }

/// X[k] = n^{-1/2} sum_j x[j] exp(-+2 pi i jk/n)
inline std::vector<cd> naive_dft(const std::vector<cd>& x, bool inverse = false) {
  const std::size_t n = x.size();
  std::vector<cd> out(n);
  const double sgn = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    cd s{};
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sgn * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      s += x[j] * cd(std::cos(ang), std::sin(ang));
    }
    out[k] = s / std::sqrt(static_cast<double>(n));
  }
  return out;
}

/// Unitary DFT matrix F[k][j] = n^{-1/2} exp(-2 pi i jk/n).
inline Mat<cd> dft_matrix(std::size_t n) {
  Mat<cd> f(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      f(k, j) = cd(std::cos(ang), std::sin(ang)) / std::sqrt(static_cast<double>(n));
    }
  return f;
}

template <class T>
Mat<T> mul(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> out(a.r, b.c);
  for (std::size_t i = 0; i < a.r; ++i)
    for (std::size_t k = 0; k < a.c; ++k)
      for (std::size_t j = 0; j < b.c; ++j) out(i, j) += a(i, k) * b(k, j);
  return out;
}

template <class T>
Mat<T> adj(const Mat<T>& a) {
  Mat<T> out(a.c, a.r);
  for (std::size_t i = 0; i < a.r; ++i)
    for (std::size_t j = 0; j < a.c; ++j) out(j, i) = cj(a(i, j));
  return out;
}

template <class T>
std::vector<T> mv(const Mat<T>& a, const std::vector<T>& x) {
  std::vector<T> y(a.r, T{});
  for (std::size_t i = 0; i < a.r; ++i)
    for (std::size_t j = 0; j < a.c; ++j) y[i] += a(i, j) * x[j];
  return y;
}

template <class T>
double norm2sq(const std::vector<T>& x) {
  double s = 0.0;
  for (const auto& v : x) s += sq(v);
  return s;
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
template <class T>
std::vector<T> gauss_solve(Mat<T> a, std::vector<T> b) {
  const std::size_t n = a.r;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (std::abs(a(p, k)) == 0.0) throw std::runtime_error("singular");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(b[k], b[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const T f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<T> x(n);
  for (std::size_t k = n; k-- > 0;) {
    T s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

/// Cyclic Jacobi eigenvalues of a real symmetric matrix, ascending.
inline std::vector<double> jacobi_eigenvalues(Mat<double> a) {
  const std::size_t n = a.r;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Hermitian eigenvalues via Jacobi on the 2n real embedding (each value
/// appears twice; every second one is kept).
inline std::vector<double> jacobi_eigenvalues(const Mat<cd>& h) {
  const std::size_t n = h.r;
  Mat<double> e(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      e(i, j) = h(i, j).real();
      e(i + n, j + n) = h(i, j).real();
      e(i, j + n) = -h(i, j).imag();
      e(i + n, j) = h(i, j).imag();
    }
  const auto all = jacobi_eigenvalues(e);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (all[2 * i] + all[2 * i + 1]);
  return out;
}

/// A_tau^dagger r = A_tau* (A_tau A_tau*)^{-1} r for full-row-rank A_tau.
template <class T>
std::vector<T> pinv_apply(const Mat<T>& a, const std::vector<T>& r) {
  const auto g = mul(a, adj(a));
  const auto u = gauss_solve(g, r);
  return mv(adj(a), u);
}

}  // namespace oracle
