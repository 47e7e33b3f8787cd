#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <ranges>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace bkz {

using cplx = std::complex<double>;

template <class T>
using Vec = std::vector<T>;

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch = 2,
  Io = 3,
  Parse = 4,
  Numeric = 5,
  NotConverged = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// Real-flop costs of the scalar kernels. A real multiply-add pair counts as
/// 2 flops; a complex multiply is 6 real flops and a complex add 2.
template <class T>
struct FlopCost {
  static constexpr std::uint64_t mul_add = is_complex_v<T> ? 8 : 2;
  static constexpr std::uint64_t mul = is_complex_v<T> ? 6 : 1;
  static constexpr std::uint64_t add = is_complex_v<T> ? 2 : 1;
  static constexpr std::uint64_t scale_real = is_complex_v<T> ? 2 : 1;
};

/// Counts real floating-point operations performed by instrumented kernels.
struct FlopCounter {
  std::uint64_t flops = 0;
  void add(std::uint64_t f) noexcept { flops += f; }
};

inline void count(FlopCounter* fc, std::uint64_t f) noexcept {
  if (fc) fc->add(f);
}

inline double conj(double v) noexcept { return v; }
inline cplx conj(const cplx& v) noexcept { return std::conj(v); }
inline double abs2(double v) noexcept { return v * v; }
inline double abs2(const cplx& v) noexcept { return std::norm(v); }
inline double real_part(double v) noexcept { return v; }
inline double real_part(const cplx& v) noexcept { return v.real(); }

inline void require(bool ok, ErrorCode code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

inline void require_dims(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": expected length " +
                                                  std::to_string(want) + ", got " +
                                                  std::to_string(got));
  }
}

template <class R>
concept ScalarRange = std::ranges::contiguous_range<R> && std::ranges::sized_range<R>;

template <class R>
using range_scalar_t = std::remove_cv_t<std::ranges::range_value_t<R>>;

/// Sum_i a_i * b_i (no conjugation): the row-times-vector product.
template <ScalarRange A, ScalarRange B>
auto dotu(const A& a, const B& b, FlopCounter* fc = nullptr) {
  using T = range_scalar_t<A>;
  T s{};
  const std::size_t n = std::ranges::size(a);
  for (std::size_t i = 0; i < n; ++i) s += std::ranges::data(a)[i] * std::ranges::data(b)[i];
  count(fc, FlopCost<T>::mul_add * n);
  return s;
}

/// Sum_i conj(a_i) * b_i.
template <ScalarRange A, ScalarRange B>
auto dotc(const A& a, const B& b, FlopCounter* fc = nullptr) {
  using T = range_scalar_t<A>;
  T s{};
  const std::size_t n = std::ranges::size(a);
  for (std::size_t i = 0; i < n; ++i) s += conj(std::ranges::data(a)[i]) * std::ranges::data(b)[i];
  count(fc, FlopCost<T>::mul_add * n);
  return s;
}

template <ScalarRange R>
double norm_sq(const R& x, FlopCounter* fc = nullptr) {
  double s = 0.0;
  for (const auto& v : x) s += abs2(v);
  count(fc, (is_complex_v<range_scalar_t<R>> ? 4 : 2) * std::ranges::size(x));
  return s;
}

template <ScalarRange R>
double norm2(const R& x, FlopCounter* fc = nullptr) {
  return std::sqrt(norm_sq(x, fc));
}

/// y += alpha * x
template <class T, ScalarRange X, class Y>
void axpy(T alpha, const X& x, Y&& y, FlopCounter* fc = nullptr) {
  const std::size_t n = std::ranges::size(x);
  auto* yd = std::ranges::data(y);
  for (std::size_t i = 0; i < n; ++i) yd[i] += alpha * std::ranges::data(x)[i];
  count(fc, FlopCost<range_scalar_t<X>>::mul_add * n);
}

/// ||x - y||
template <ScalarRange X, ScalarRange Y>
double distance(const X& x, const Y& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::ranges::size(x); ++i)
    s += abs2(std::ranges::data(x)[i] - std::ranges::data(y)[i]);
  return std::sqrt(s);
}

template <ScalarRange X, ScalarRange Y>
auto subtract(const X& x, const Y& y) {
  Vec<range_scalar_t<X>> out(std::ranges::size(x));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::ranges::data(x)[i] - std::ranges::data(y)[i];
  return out;
}

template <class T>
std::span<const T> cspan(const Vec<T>& v) {
  return std::span<const T>(v.data(), v.size());
}

inline Vec<cplx> to_complex(std::span<const double> x) {
  return Vec<cplx>(x.begin(), x.end());
}

}  // namespace bkz
