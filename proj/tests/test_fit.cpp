#include <doctest.h>

#include <cmath>
#include <memory>

#include "fit.hpp"
#include "linear_operator.hpp"
#include "paving.hpp"
#include "support.hpp"

using namespace bkz;

TEST_SUITE("fit") {

TEST_CASE("all-plus signs on the identity give the unitary DFT") {
  DenseMatrix<cplx> eye(7, 7);
  for (std::size_t i = 0; i < 7; ++i) eye(i, i) = 1.0;
  auto a = std::make_shared<const DenseOperator<cplx>>(eye);
  const std::vector<cplx> b(7, cplx(1.0, 0.0));
  const auto r = fit_transform_with_signs(a, b, std::vector<double>(7, 1.0));
  const auto w = r.w->materialize();
  auto f = oracle::dft_matrix(7);
  CHECK(testutil::max_abs_diff(w.data(), f.v) < 1e-13);
  // F of the all-ones vector is sqrt(7) e_0
  CHECK(std::abs(r.b_tilde[0] - std::sqrt(7.0)) < 1e-13);
  for (std::size_t i = 1; i < 7; ++i) CHECK(std::abs(r.b_tilde[i]) < 1e-13);
}

TEST_CASE("transform matches F E A computed densely") {
  Rng rng(71);
  const auto a = testutil::gaussian_c(12, 4, rng);
  auto op = std::make_shared<const DenseOperator<cplx>>(a);
  const auto b = testutil::random_vec<cplx>(12, rng);
  const auto r = fit_transform(op, b, rng);
  oracle::Mat<cplx> e(12, 12);
  for (std::size_t i = 0; i < 12; ++i) e(i, i) = r.signs[i];
  const auto want = oracle::mul(oracle::mul(oracle::dft_matrix(12), e), testutil::to_oracle(a));
  CHECK(testutil::max_abs_diff(r.w->materialize().data(), want.v) < 1e-12);
  const auto bt = oracle::mv(oracle::mul(oracle::dft_matrix(12), e), b);
  CHECK(testutil::max_abs_diff(r.b_tilde, bt) < 1e-12);
  // adjoint through the composed form
  const auto y = testutil::random_vec<cplx>(12, rng);
  CHECK(testutil::max_abs_diff(adjoint_matvec<cplx>(*r.w, y), oracle::mv(oracle::adj(want), y)) < 1e-12);
}

TEST_CASE("transform preserves the least-squares objective and the normal matrix") {
  Rng rng(72);
  const auto a = testutil::gaussian_c(20, 6, rng);
  auto op = std::make_shared<const DenseOperator<cplx>>(a);
  const auto b = testutil::random_vec<cplx>(20, rng);
  const auto r = fit_transform(op, b, rng);
  for (int t = 0; t < 10; ++t) {
    const auto x = testutil::random_vec<cplx>(6, rng);
    auto r1 = matvec<cplx>(*op, x);
    auto r2 = matvec<cplx>(*r.w, x);
    for (std::size_t i = 0; i < 20; ++i) {
      r1[i] -= b[i];
      r2[i] -= r.b_tilde[i];
    }
    CHECK(norm_sq(r2) == doctest::Approx(norm_sq(r1)).epsilon(1e-12));
  }
  const auto w = testutil::to_oracle(r.w->materialize());
  const auto o = testutil::to_oracle(a);
  CHECK(testutil::max_abs_diff(oracle::mul(oracle::adj(w), w).v, oracle::mul(oracle::adj(o), o).v) < 1e-11);
}

TEST_CASE("transformed rows keep unit norm on average") {
  Rng rng(73);
  const auto a = normalize_rows(testutil::gaussian_c(16, 4, rng));
  auto op = std::make_shared<const DenseOperator<cplx>>(a);
  const auto r = fit_transform(op, std::vector<cplx>(16), rng);
  const auto w = r.w->materialize();
  double total = 0.0;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t k = 0; k < 4; ++k) total += std::norm(w(i, k));
  CHECK(total == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("signs are Rademacher") {
  Rng rng(74);
  DenseMatrix<cplx> a(2000, 1);
  for (std::size_t i = 0; i < 2000; ++i) a(i, 0) = 1.0;
  const auto r = fit_transform(std::make_shared<const DenseOperator<cplx>>(a), std::vector<cplx>(2000), rng);
  int plus = 0;
  for (double s : r.signs) {
    CHECK(std::abs(s) == 1.0);
    plus += s > 0;
  }
  CHECK(std::abs(plus - 1000) < 120);
}

TEST_CASE("norm hypothesis threshold") {
  // 1 * 100 / ln(101)^3
  const double l = std::log(101.0);
  CHECK(fit_norm_threshold(100, 1.0) == doctest::Approx(100.0 / (l * l * l)).epsilon(1e-14));
  CHECK(fit_norm_threshold(100, 3.0) == doctest::Approx(3.0 * 100.0 / (l * l * l)).epsilon(1e-14));
  Rng rng(75);
  // tall sphere rows: ||A||^2 is about n/d, far under the threshold for large c
  const auto a = normalize_rows(testutil::gaussian(200, 50, rng));
  CHECK(check_fit_hypothesis(a, 10.0));
  CHECK_FALSE(check_fit_hypothesis(a, 0.01));
  CHECK_THROWS_AS(check_fit_hypothesis(testutil::gaussian(5, 2, rng), 1.0), Error);
}

TEST_CASE("sign count must match the row count") {
  Rng rng(76);
  auto op = std::make_shared<const DenseOperator<cplx>>(testutil::gaussian_c(5, 2, rng));
  CHECK_THROWS_AS(fit_transform_with_signs(op, std::vector<cplx>(5), std::vector<double>(4, 1.0)), Error);
  CHECK_THROWS_AS(fit_transform_with_signs(op, std::vector<cplx>(4), std::vector<double>(5, 1.0)), Error);
}

}
