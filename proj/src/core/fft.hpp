#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "numeric.hpp"

namespace bkz {

enum class FftDirection { Forward, Inverse };

/// Unitary discrete Fourier transform of a fixed length. Both directions are
/// scaled by 1/sqrt(n). Powers of two use an iterative radix-2 transform;
/// other lengths go through Bluestein's chirp-z convolution. A plan is
/// immutable after construction and may be shared between threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<cplx> data, FlopCounter* fc = nullptr) const;
  void inverse(std::span<cplx> data, FlopCounter* fc = nullptr) const;
  void apply(std::span<cplx> data, FftDirection dir, FlopCounter* fc = nullptr) const;

 private:
  void radix2(std::span<cplx> data, std::size_t len, const std::vector<cplx>& twiddles,
              const std::vector<std::size_t>& bitrev, bool inverse, FlopCounter* fc) const;
  void unnormalized_forward(std::span<cplx> data, FlopCounter* fc) const;

  std::size_t n_;
  bool pow2_;
  std::size_t conv_len_ = 0;             // Bluestein padded length
  std::vector<cplx> twiddles_;           // e^{-2 pi i k / len}, k < len/2
  std::vector<std::size_t> bitrev_;
  std::vector<cplx> chirp_;              // e^{-i pi k^2 / n}
  std::vector<cplx> chirp_kernel_fft_;   // FFT of the padded conjugate chirp
};

/// One-shot unitary DFT of `x`.
Vec<cplx> dft_apply(std::span<const cplx> x, FftDirection dir, FlopCounter* fc = nullptr);

}  // namespace bkz
