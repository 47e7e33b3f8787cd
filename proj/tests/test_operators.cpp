#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "circulant.hpp"
#include "linear_operator.hpp"
#include "support.hpp"

using namespace bkz;

namespace {

// Full circulant with eigenvalues xi: C[j][k] = (1/d) sum_m xi_m e^{2 pi i m (j-k)/d}.
oracle::Mat<cplx> dense_circulant(const std::vector<double>& xi, std::size_t rows) {
  const std::size_t d = xi.size();
  oracle::Mat<cplx> c(rows, d);
  for (std::size_t j = 0; j < rows; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      cplx s{};
      for (std::size_t m = 0; m < d; ++m) {
        const long long diff = static_cast<long long>(j) - static_cast<long long>(k);
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(m) * static_cast<double>(diff) /
                           static_cast<double>(d);
        s += xi[m] * cplx(std::cos(ang), std::sin(ang));
      }
      c(j, k) = s / static_cast<double>(d);
    }
  return c;
}

std::vector<double> signs(std::size_t d, Rng& rng) {
  std::vector<double> s(d);
  for (auto& v : s) v = rng.rademacher();
  return s;
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("partial circulant block matches its dense definition (d=8, r=4)") {
  Rng rng(21);
  const auto xi = signs(8, rng);
  CirculantBlock blk(std::make_shared<const FftPlan>(8), xi, 4);
  const auto want = dense_circulant(xi, 4);
  const auto got = blk.materialize();
  CHECK(testutil::max_abs_diff(got.data(), want.v) < 1e-14);

  const auto x = testutil::random_vec<cplx>(8, rng);
  std::vector<cplx> y(4);
  blk.apply(x, y, nullptr);
  CHECK(testutil::max_abs_diff(y, oracle::mv(want, x)) < 1e-13);
  const auto r = testutil::random_vec<cplx>(4, rng);
  std::vector<cplx> z(8);
  blk.apply_adjoint(r, z, nullptr);
  CHECK(testutil::max_abs_diff(z, oracle::mv(oracle::adj(want), r)) < 1e-13);
}

TEST_CASE("circulant blocks have orthonormal rows") {
  Rng rng(22);
  for (std::size_t d : {8u, 100u}) {
    CirculantBlock blk(std::make_shared<const FftPlan>(d), signs(d, rng), d / 4);
    CHECK(blk.orthonormal_rows());
    const auto m = testutil::to_oracle(blk.materialize());
    const auto g = oracle::mul(m, oracle::adj(m));
    double dev = 0.0;
    for (std::size_t i = 0; i < g.r; ++i)
      for (std::size_t j = 0; j < g.c; ++j) dev = std::max(dev, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    CHECK(dev < 1e-13);
  }
}

TEST_CASE("circulant block step model") {
  CirculantBlock blk(std::make_shared<const FftPlan>(100), std::vector<double>(100, 1.0), 20);
  REQUIRE(blk.block_step_model_flops().has_value());
  CHECK(*blk.block_step_model_flops() == 3058);
}

TEST_CASE("partial circulant stack stacks its blocks") {
  Rng rng(23);
  std::vector<std::vector<double>> sg{signs(8, rng), signs(8, rng), signs(8, rng)};
  PartialCirculantStack st(2, sg);
  CHECK(st.rows() == 6);
  CHECK(st.cols() == 8);
  const auto dense = st.materialize();
  for (std::size_t b = 0; b < 3; ++b) {
    const auto want = dense_circulant(sg[b], 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(dense(2 * b + i, k) - want(i, k)) < 1e-14);
  }
  // natural blocks come back as fast circulant blocks
  const std::vector<std::size_t> tau{2, 3};
  auto blk = st.row_block(tau);
  CHECK(blk->orthonormal_rows());
  CHECK(blk->block_step_model_flops().has_value());
  // any other row set falls back to a dense copy
  const std::vector<std::size_t> mixed{1, 2};
  auto other = st.row_block(mixed);
  CHECK_FALSE(other->orthonormal_rows());
  CHECK(testutil::max_abs_diff(other->materialize().data(), row_submatrix(dense, mixed).data()) < 1e-15);
}

TEST_CASE("adjoint identity <Ax, y> = <x, A* y>") {
  Rng rng(24);
  std::vector<std::vector<double>> sg{signs(12, rng), signs(12, rng)};
  PartialCirculantStack st(5, sg);
  const auto x = testutil::random_vec<cplx>(12, rng);
  const auto y = testutil::random_vec<cplx>(10, rng);
  const auto ax = matvec<cplx>(st, x);
  const auto aty = adjoint_matvec<cplx>(st, y);
  CHECK(std::abs(dotc(ax, y) - dotc(x, aty)) < 1e-12);
}

TEST_CASE("dense operator materialize and row access") {
  Rng rng(25);
  auto a = testutil::gaussian(6, 3, rng);
  DenseOperator<double> op(a);
  CHECK(op.dense() != nullptr);
  const std::vector<std::size_t> rows{1, 4};
  const auto sub = op.materialize_rows(rows);
  CHECK(sub(0, 2) == a(1, 2));
  CHECK(sub(1, 0) == a(4, 0));
  CHECK_THROWS_AS(matvec<double>(op, std::vector<double>(4)), Error);
}

TEST_CASE("complexified operator agrees with the real one") {
  Rng rng(26);
  auto a = std::make_shared<const DenseOperator<double>>(testutil::gaussian(4, 3, rng));
  auto c = as_complex(a);
  const auto x = testutil::random_vec<cplx>(3, rng);
  const auto y = matvec<cplx>(*c, x);
  std::vector<double> xr(3), xi(3);
  for (std::size_t k = 0; k < 3; ++k) {
    xr[k] = x[k].real();
    xi[k] = x[k].imag();
  }
  const auto yr = matvec<double>(*a, xr), yi = matvec<double>(*a, xi);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(y[i] - cplx(yr[i], yi[i])) < 1e-14);
}

}
