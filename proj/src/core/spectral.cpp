#include "spectral.hpp"

#include <algorithm>
#include <cmath>

#include "eigen.hpp"
#include "rng.hpp"

namespace bkz {
namespace {

template <class T>
void normal_apply(const LinearOperator<T>& a, std::span<const T> x, Vec<T>& tmp, std::span<T> y) {
  a.apply(x, tmp, nullptr);
  a.apply_adjoint(tmp, y, nullptr);
}

// CG on (A*A) y = r, stopping at relative residual tol.
template <class T>
Vec<T> normal_cg(const LinearOperator<T>& a, const Vec<T>& r, double tol, std::size_t max_iters) {
  const std::size_t d = a.cols();
  Vec<T> y(d, T{}), res = r, p = r, q(d), tmp(a.rows());
  double rr = norm_sq(res);
  const double stop = tol * tol * rr;
  for (std::size_t it = 0; it < max_iters && rr > stop; ++it) {
    normal_apply<T>(a, p, tmp, q);
    const double pq = real_part(dotc(p, q));
    if (!(pq > 0.0)) break;
    const T step = T{rr / pq};
    axpy(step, p, y);
    axpy(-step, q, res);
    const double rr_new = norm_sq(res);
    const double ratio = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < d; ++i) p[i] = res[i] + ratio * p[i];
  }
  return y;
}

template <class T>
Vec<T> random_unit(Rng& rng, std::size_t d) {
  Vec<T> x(d);
  for (auto& v : x) {
    if constexpr (is_complex_v<T>)
      v = T{rng.normal(), rng.normal()};
    else
      v = rng.normal();
  }
  const double nx = norm2(x);
  for (auto& v : x) v /= nx;
  return x;
}

}  // namespace

template <class T>
DenseMatrix<T> normal_matrix(const LinearOperator<T>& a) {
  const std::size_t d = a.cols();
  DenseMatrix<T> g(d, d);
  Vec<T> e(d, T{}), tmp(a.rows()), col(d);
  for (std::size_t j = 0; j < d; ++j) {
    e[j] = T{1.0};
    normal_apply<T>(a, e, tmp, col);
    e[j] = T{};
    for (std::size_t i = 0; i < d; ++i) g(i, j) = col[i];
  }
  // Symmetrize away rounding so the Hermitian check cannot trip.
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const T avg = 0.5 * (g(i, j) + conj(g(j, i)));
      g(i, j) = avg;
      g(j, i) = conj(avg);
    }
  for (std::size_t i = 0; i < d; ++i) g(i, i) = T{real_part(g(i, i))};
  return g;
}

template <class T>
SpectralEstimates sigma_extremes(const LinearOperator<T>& a, const SpectralOptions& opt) {
  SpectralEstimates out;
  const std::size_t d = a.cols();
  if (d <= opt.exact_cap) {
    const auto ev = hermitian_eigenvalues(normal_matrix(a));
    out.sigma_max = std::sqrt(std::max(ev.back(), 0.0));
    out.sigma_min = std::sqrt(std::max(ev.front(), 0.0));
    out.method = SpectralMethod::ExactSmall;
    return out;
  }
  out.method = SpectralMethod::PowerIteration;
  Rng rng(opt.seed, d);
  Vec<T> tmp(a.rows()), y(d);

  // Rayleigh quotients converge at twice the rate of the vectors, so the
  // stopping test on successive quotients uses a tightened tolerance.
  const double tol = opt.rel_tol * 1e-2;
  bool hi_ok = false, lo_ok = false;
  Vec<T> x = random_unit<T>(rng, d);
  double lam_hi = 0.0;
  for (std::size_t it = 0; it < opt.max_iters; ++it) {
    normal_apply<T>(a, x, tmp, y);
    const double rq = real_part(dotc(x, y));
    const double ny = norm2(y);
    ++out.iterations;
    if (ny == 0.0) {
      lam_hi = 0.0;
      hi_ok = true;
      break;
    }
    for (std::size_t i = 0; i < d; ++i) x[i] = y[i] / ny;
    if (it > 0 && std::abs(rq - lam_hi) <= tol * rq) {
      lam_hi = rq;
      hi_ok = true;
      break;
    }
    lam_hi = rq;
  }

  x = random_unit<T>(rng, d);
  double lam_lo = lam_hi;
  for (std::size_t it = 0; it < opt.max_iters; ++it) {
    Vec<T> z = normal_cg(a, x, 1e-12, 4 * d);
    const double nz = norm2(z);
    ++out.iterations;
    if (!(nz > 0.0) || !std::isfinite(nz)) break;
    for (std::size_t i = 0; i < d; ++i) x[i] = z[i] / nz;
    a.apply(x, tmp, nullptr);
    const double rq = norm_sq(tmp);
    if (it > 0 && std::abs(rq - lam_lo) <= tol * std::max(rq, 1e-300)) {
      lam_lo = rq;
      lo_ok = true;
      break;
    }
    lam_lo = rq;
  }
  out.sigma_max = std::sqrt(std::max(lam_hi, 0.0));
  out.sigma_min = std::sqrt(std::clamp(lam_lo, 0.0, std::max(lam_hi, 0.0)));
  out.converged = hi_ok && lo_ok;
  return out;
}

template SpectralEstimates sigma_extremes(const LinearOperator<double>&, const SpectralOptions&);
template SpectralEstimates sigma_extremes(const LinearOperator<cplx>&, const SpectralOptions&);
template DenseMatrix<double> normal_matrix(const LinearOperator<double>&);
template DenseMatrix<cplx> normal_matrix(const LinearOperator<cplx>&);

}  // namespace bkz
