#include "fft.hpp"

#include <cmath>
#include <numbers>

namespace bkz {
namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t log2_exact(std::size_t n) {
  std::size_t l = 0;
  while ((std::size_t{1} << l) < n) ++l;
  return l;
}

void build_radix2_tables(std::size_t len, std::vector<cplx>& tw, std::vector<std::size_t>& rev) {
  tw.resize(len / 2);
  for (std::size_t k = 0; k < len / 2; ++k) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
    tw[k] = {std::cos(ang), std::sin(ang)};
  }
  rev.resize(len);
  const std::size_t bits = log2_exact(len);
  for (std::size_t i = 0; i < len; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    rev[i] = r;
  }
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n), pow2_(is_pow2(n)) {
  require(n >= 1, ErrorCode::InvalidArgument, "FFT length must be positive");
  if (pow2_) {
    build_radix2_tables(n, twiddles_, bitrev_);
    return;
  }
  conv_len_ = 1;
  while (conv_len_ < 2 * n - 1) conv_len_ <<= 1;
  build_radix2_tables(conv_len_, twiddles_, bitrev_);

  chirp_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle argument small and exact
    const std::size_t k2 = (k * k) % (2 * n);
    const double ang = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp_[k] = {std::cos(ang), std::sin(ang)};
  }
  chirp_kernel_fft_.assign(conv_len_, cplx{});
  chirp_kernel_fft_[0] = std::conj(chirp_[0]);
  for (std::size_t k = 1; k < n; ++k) {
    chirp_kernel_fft_[k] = std::conj(chirp_[k]);
    chirp_kernel_fft_[conv_len_ - k] = std::conj(chirp_[k]);
  }
  radix2(chirp_kernel_fft_, conv_len_, twiddles_, bitrev_, false, nullptr);
}

void FftPlan::radix2(std::span<cplx> a, std::size_t len, const std::vector<cplx>& tw,
                     const std::vector<std::size_t>& rev, bool inverse, FlopCounter* fc) const {
  for (std::size_t i = 0; i < len; ++i)
    if (i < rev[i]) std::swap(a[i], a[rev[i]]);
  std::uint64_t butterflies = 0;
  for (std::size_t size = 2; size <= len; size <<= 1) {
    const std::size_t half = size / 2;
    const std::size_t step = len / size;
    for (std::size_t start = 0; start < len; start += size) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx w = inverse ? std::conj(tw[k * step]) : tw[k * step];
        const cplx t = w * a[start + k + half];
        a[start + k + half] = a[start + k] - t;
        a[start + k] += t;
      }
    }
    butterflies += len / 2;
  }
  // one complex multiply and two complex adds per butterfly
  count(fc, butterflies * 10);
}

void FftPlan::unnormalized_forward(std::span<cplx> data, FlopCounter* fc) const {
  if (pow2_) {
    radix2(data, n_, twiddles_, bitrev_, false, fc);
    return;
  }
  std::vector<cplx> work(conv_len_, cplx{});
  for (std::size_t k = 0; k < n_; ++k) work[k] = data[k] * chirp_[k];
  radix2(work, conv_len_, twiddles_, bitrev_, false, fc);
  for (std::size_t k = 0; k < conv_len_; ++k) work[k] *= chirp_kernel_fft_[k];
  radix2(work, conv_len_, twiddles_, bitrev_, true, fc);
  const double inv_len = 1.0 / static_cast<double>(conv_len_);
  for (std::size_t k = 0; k < n_; ++k) data[k] = work[k] * chirp_[k] * inv_len;
  count(fc, 6 * n_ + 6 * conv_len_ + 8 * n_);
}

void FftPlan::forward(std::span<cplx> data, FlopCounter* fc) const {
  require_dims(data.size(), n_, "FFT input");
  unnormalized_forward(data, fc);
  const double s = 1.0 / std::sqrt(static_cast<double>(n_));
  for (auto& v : data) v *= s;
  count(fc, 2 * n_);
}

void FftPlan::inverse(std::span<cplx> data, FlopCounter* fc) const {
  require_dims(data.size(), n_, "FFT input");
  // F^{-1} x = conj(F conj(x)) for the unitary DFT
  for (auto& v : data) v = std::conj(v);
  unnormalized_forward(data, fc);
  const double s = 1.0 / std::sqrt(static_cast<double>(n_));
  for (auto& v : data) v = std::conj(v) * s;
  count(fc, 2 * n_);
}

void FftPlan::apply(std::span<cplx> data, FftDirection dir, FlopCounter* fc) const {
  if (dir == FftDirection::Forward)
    forward(data, fc);
  else
    inverse(data, fc);
}

Vec<cplx> dft_apply(std::span<const cplx> x, FftDirection dir, FlopCounter* fc) {
  Vec<cplx> out(x.begin(), x.end());
  FftPlan(x.size()).apply(out, dir, fc);
  return out;
}

}  // namespace bkz
