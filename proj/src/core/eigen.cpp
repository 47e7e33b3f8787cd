#include "eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rng.hpp"

namespace bkz {
namespace {

// Householder reduction of a symmetric matrix to tridiagonal form (values
// only). On exit d holds the diagonal and e[1..n-1] the subdiagonal.
void tridiagonalize(DenseMatrix<double>& a, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          double gg = 0.0;
          for (std::size_t k = 0; k <= j; ++k) gg += a(j, k) * a(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) gg += a(k, j) * a(i, k);
          e[j] = gg / h;
          f += e[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          const double fj = a(i, j);
          const double gj = e[j] - hh * fj;
          e[j] = gj;
          for (std::size_t k = 0; k <= j; ++k) a(j, k) -= fj * e[k] + gj * a(i, k);
        }
      }
    } else {
      e[i] = a(i, l);
    }
    d[i] = h;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
}

// Implicit-shift QL on a symmetric tridiagonal matrix.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n < 2) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 200) throw Error(ErrorCode::NotConverged, "tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool deflated = false;
        for (std::size_t ii = m; ii-- > l;) {
          double f = s * e[ii];
          const double b = c * e[ii];
          r = std::hypot(f, g);
          e[ii + 1] = r;
          if (r == 0.0) {
            d[ii + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[ii + 1] - p;
          r = (d[ii] - g) * s + 2.0 * c * b;
          p = s * r;
          d[ii + 1] = g + p;
          g = c * r - b;
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

template <class T>
void check_hermitian(const DenseMatrix<T>& h) {
  require(h.rows() == h.cols(), ErrorCode::DimensionMismatch, "Hermitian matrix must be square");
  double scale = 0.0;
  for (const T& v : h.data()) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j) worst = std::max(worst, std::abs(h(i, j) - conj(h(j, i))));
  require(worst <= 1e-10 * std::max(scale, 1e-300), ErrorCode::InvalidArgument,
          "matrix is not Hermitian within tolerance");
}

// Lanczos with full reorthogonalization; extreme Ritz values of the Krylov
// space. Converged when both extremes move less than tol (relative) over
// a stretch of 10 steps, or when the space is exhausted.
template <class T>
EigenRange lanczos(const DenseMatrix<T>& h, double tol, std::size_t max_steps) {
  const std::size_t n = h.rows();
  max_steps = std::min(max_steps, n);
  Rng rng(0x1a2c05, n);
  std::vector<Vec<T>> basis;
  Vec<T> q(n), w(n);
  for (auto& v : q) v = T{rng.normal()};
  const double nq = norm2(q);
  for (auto& v : q) v /= nq;
  std::vector<double> alpha, beta;
  double prev_lo = 0.0, prev_hi = 0.0;
  EigenRange out{0.0, 0.0, false};
  for (std::size_t k = 0; k < max_steps; ++k) {
    basis.push_back(q);
    for (std::size_t i = 0; i < n; ++i) w[i] = dotu(h.row(i), q);
    alpha.push_back(real_part(dotc(q, w)));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : basis) axpy(-dotc(v, w), v, w);
    const double bnorm = norm2(w);
    const bool exhausted = bnorm <= 1e-13 * std::max(std::abs(alpha.back()), 1.0) || k + 1 == max_steps;
    if ((k + 1) % 10 == 0 || exhausted) {
      auto ritz = tridiagonal_eigenvalues(alpha, beta);
      const double lo = ritz.front(), hi = ritz.back();
      const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
      out = {lo, hi, false};
      if (exhausted || (k >= 10 && std::abs(lo - prev_lo) <= tol * scale &&
                        std::abs(hi - prev_hi) <= tol * scale))
        break;
      prev_lo = lo;
      prev_hi = hi;
    }
    beta.push_back(bnorm);
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / bnorm;
  }
  return out;
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag,
                                            std::span<const double> offdiag) {
  require(offdiag.size() + 1 >= diag.size(), ErrorCode::DimensionMismatch,
          "tridiagonal off-diagonal too short");
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(d.size(), 0.0);
  for (std::size_t i = 1; i < d.size(); ++i) e[i] = offdiag[i - 1];
  tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> symmetric_eigenvalues(DenseMatrix<double> a) {
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch, "symmetric matrix must be square");
  std::vector<double> d, e;
  if (a.rows() == 1) return {a(0, 0)};
  tridiagonalize(a, d, e);
  tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

template <class T>
std::vector<double> hermitian_eigenvalues(const DenseMatrix<T>& h) {
  check_hermitian(h);
  if constexpr (!is_complex_v<T>) {
    return symmetric_eigenvalues(h);
  } else {
    const std::size_t n = h.rows();
    DenseMatrix<double> emb(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double re = h(i, j).real();
        const double im = h(i, j).imag();
        emb(i, j) = re;
        emb(i + n, j + n) = re;
        emb(i, j + n) = -im;
        emb(i + n, j) = im;
      }
    auto all = symmetric_eigenvalues(std::move(emb));
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = 0.5 * (all[2 * k] + all[2 * k + 1]);
    return out;
  }
}

template <class T>
EigenRange eig_bounds_hermitian(const DenseMatrix<T>& h, std::size_t cap) {
  check_hermitian(h);
  if (h.rows() <= cap) {
    const auto ev = hermitian_eigenvalues(h);
    return {ev.front(), ev.back(), true};
  }
  return lanczos(h, 1e-10, h.rows());
}

template <class T>
EigenRange gram_eig_bounds(const DenseMatrix<T>& a_tau, std::size_t cap) {
  const auto g = gram_block(a_tau);
  EigenRange r = eig_bounds_hermitian(g, cap);
  const double rank_tol = static_cast<double>(g.rows()) * std::numeric_limits<double>::epsilon() *
                          std::max(r.lambda_max, 0.0) * 4.0;
  if (a_tau.rows() > a_tau.cols() || r.lambda_min <= rank_tol) r.lambda_min = 0.0;
  r.lambda_max = std::max(r.lambda_max, 0.0);
  return r;
}

template <class T>
bool Cholesky<T>::factor(const DenseMatrix<T>& g, FlopCounter* fc) {
  require(g.rows() == g.cols(), ErrorCode::DimensionMismatch, "Cholesky needs a square matrix");
  n_ = g.rows();
  l_.assign(n_ * n_, T{});
  for (std::size_t j = 0; j < n_; ++j) {
    double diag = real_part(g(j, j));
    for (std::size_t k = 0; k < j; ++k) diag -= abs2(l_[j * n_ + k]);
    if (!(diag > 0.0)) return false;
    const double ljj = std::sqrt(diag);
    l_[j * n_ + j] = T{ljj};
    for (std::size_t i = j + 1; i < n_; ++i) {
      T s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l_[i * n_ + k] * conj(l_[j * n_ + k]);
      l_[i * n_ + j] = s / ljj;
    }
  }
  count(fc, FlopCost<T>::mul_add * n_ * n_ * n_ / 6 + 2 * n_ * n_);
  return true;
}

template <class T>
void Cholesky<T>::solve(std::span<T> r, FlopCounter* fc) const {
  require_dims(r.size(), n_, "Cholesky right-hand side");
  for (std::size_t i = 0; i < n_; ++i) {
    T s = r[i];
    for (std::size_t k = 0; k < i; ++k) s -= l_[i * n_ + k] * r[k];
    r[i] = s / real_part(l_[i * n_ + i]);
  }
  for (std::size_t i = n_; i-- > 0;) {
    T s = r[i];
    for (std::size_t k = i + 1; k < n_; ++k) s -= conj(l_[k * n_ + i]) * r[k];
    r[i] = s / real_part(l_[i * n_ + i]);
  }
  count(fc, FlopCost<T>::mul_add * n_ * n_ + 2 * FlopCost<T>::scale_real * n_);
}

template class Cholesky<double>;
template class Cholesky<cplx>;
template std::vector<double> hermitian_eigenvalues(const DenseMatrix<double>&);
template std::vector<double> hermitian_eigenvalues(const DenseMatrix<cplx>&);
template EigenRange eig_bounds_hermitian(const DenseMatrix<double>&, std::size_t);
template EigenRange eig_bounds_hermitian(const DenseMatrix<cplx>&, std::size_t);
template EigenRange gram_eig_bounds(const DenseMatrix<double>&, std::size_t);
template EigenRange gram_eig_bounds(const DenseMatrix<cplx>&, std::size_t);

}  // namespace bkz
