#include <doctest.h>

#include <cmath>
#include <memory>
#include <set>
#include <sstream>

#include "circulant.hpp"
#include "experiments.hpp"
#include "flops.hpp"
#include "kaczmarz.hpp"
#include "spectral.hpp"
#include "support.hpp"

using namespace bkz;

namespace {

template <class T>
std::vector<T> dense_block_update(const DenseMatrix<T>& a_tau, std::vector<T> x, const std::vector<T>& b_tau) {
  const auto o = testutil::to_oracle(a_tau);
  const auto ax = oracle::mv(o, x);
  std::vector<T> r(b_tau.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b_tau[i] - ax[i];
  const auto corr = oracle::pinv_apply(o, r);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += corr[k];
  return x;
}

}  // namespace

TEST_SUITE("kaczmarz") {

TEST_CASE("simple step follows the defining formula") {
  Rng rng(51);
  const auto a = testutil::random_vec<cplx>(6, rng);
  auto x = testutil::random_vec<cplx>(6, rng);
  const cplx b{0.3, -1.2};
  cplx ax{};
  double nn = 0.0;
  for (std::size_t k = 0; k < 6; ++k) {
    ax += a[k] * x[k];
    nn += std::norm(a[k]);
  }
  auto want = x;
  for (std::size_t k = 0; k < 6; ++k) want[k] += (b - ax) / nn * std::conj(a[k]);
  simple_kaczmarz_step<cplx>(x, a, b);
  CHECK(testutil::max_abs_diff(x, want) < 1e-14);
  CHECK(std::abs(dotu(a, x) - b) < 1e-13);
}

TEST_CASE("1x1 system is solved in one step") {
  std::vector<double> x{0.0};
  const std::vector<double> a{2.0};
  simple_kaczmarz_step<double>(x, a, 3.0);
  CHECK(x[0] == doctest::Approx(1.5));
}

TEST_CASE("direct block step matches the pseudoinverse update") {
  Rng rng(52);
  const auto a = testutil::gaussian_c(4, 9, rng);
  const auto x0 = testutil::random_vec<cplx>(9, rng);
  const auto b = testutil::random_vec<cplx>(4, rng);
  auto x = x0;
  InnerSolver inner;
  inner.kind = InnerKind::DirectGram;
  DenseOperator<cplx> op(a);
  block_kaczmarz_step<cplx>(x, op, b, inner);
  CHECK(testutil::max_abs_diff(x, dense_block_update(a, x0, b)) < 1e-12);
  // constraint enforcement
  const auto ax = matvec<cplx>(op, x);
  CHECK(testutil::max_abs_diff(ax, b) <= 1e-10 * (1.0 + std::sqrt(oracle::norm2sq(b))));
}

TEST_CASE("block correction is orthogonal to the block null space") {
  Rng rng(53);
  const auto a = testutil::gaussian(3, 8, rng);
  const auto o = testutil::to_oracle(a);
  auto x = testutil::random_vec<double>(8, rng);
  const auto x0 = x;
  InnerSolver inner;
  inner.kind = InnerKind::DirectGram;
  DenseOperator<double> op(a);
  block_kaczmarz_step<double>(x, op, testutil::random_vec<double>(3, rng), inner);
  std::vector<double> dx(8);
  for (std::size_t k = 0; k < 8; ++k) dx[k] = x[k] - x0[k];
  for (int probe = 0; probe < 20; ++probe) {
    // z = (I - A^dagger A) w lies in null(A)
    auto w = testutil::random_vec<double>(8, rng);
    const auto p = oracle::pinv_apply(o, oracle::mv(o, w));
    for (std::size_t k = 0; k < 8; ++k) w[k] -= p[k];
    CHECK(std::abs(dotc(dx, w)) < 1e-10);
  }
}

TEST_CASE("CG inner solve converges to the direct step") {
  Rng rng(54);
  const auto a = testutil::gaussian(6, 20, rng);
  const auto x0 = testutil::random_vec<double>(20, rng);
  const auto b = testutil::random_vec<double>(6, rng);
  DenseOperator<double> op(a);
  InnerSolver cg;
  cg.kind = InnerKind::IterativeCG;
  cg.cg_tol = 1e-13;
  cg.cg_max_iters = 100;
  auto x = x0;
  const auto info = block_kaczmarz_step<double>(x, op, b, cg);
  CHECK(info.cg_converged);
  CHECK(testutil::max_abs_diff(x, dense_block_update(a, x0, b)) < 1e-9);
}

TEST_CASE("orthonormal circulant block step matches the dense pseudoinverse") {
  Rng rng(55);
  std::vector<double> xi(16);
  for (auto& s : xi) s = rng.rademacher();
  CirculantBlock blk(std::make_shared<const FftPlan>(16), xi, 5);
  const auto dense = blk.materialize();
  const auto x0 = testutil::random_vec<cplx>(16, rng);
  const auto b = testutil::random_vec<cplx>(5, rng);
  auto x = x0;
  InnerSolver inner;
  inner.kind = InnerKind::DirectGram;
  block_kaczmarz_step<cplx>(x, blk, b, inner);
  CHECK(testutil::max_abs_diff(x, dense_block_update(dense, x0, b)) < 1e-12);
}

TEST_CASE("rank-deficient block falls back to a regularized solve") {
  DenseMatrix<double> a(2, 3);
  a(0, 0) = a(1, 0) = 1.0;
  DenseOperator<double> op(a);
  std::vector<double> x(3, 0.0);
  const std::vector<double> b{1.0, 1.0};
  InnerSolver inner;
  inner.kind = InnerKind::DirectGram;
  const auto info = block_kaczmarz_step<double>(x, op, b, inner);
  CHECK(info.regularized);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cyclic control visits every block once per epoch") {
  BlockSelector sel({ControlKind::CyclicWithoutReplacement, 5}, 4);
  for (int epoch = 0; epoch < 50; ++epoch) {
    std::multiset<std::size_t> seen;
    for (int k = 0; k < 4; ++k) seen.insert(sel.next());
    CHECK(seen == std::multiset<std::size_t>{0, 1, 2, 3});
  }
}

TEST_CASE("uniform control frequencies") {
  BlockSelector sel({ControlKind::UniformWithReplacement, 6}, 3);
  std::vector<int> hist(3, 0);
  for (int k = 0; k < 30000; ++k) ++hist[sel.next()];
  for (int h : hist) CHECK(std::abs(h / 30000.0 - 1.0 / 3.0) < 0.01);
  BlockSelector one({ControlKind::UniformWithReplacement, 1}, 1);
  for (int k = 0; k < 10; ++k) CHECK(one.next() == 0);
}

TEST_CASE("block selection is reproducible per seed") {
  BlockSelector a({ControlKind::CyclicWithoutReplacement, 77}, 9), b({ControlKind::CyclicWithoutReplacement, 77}, 9);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
}

TEST_CASE("per-step Pythagorean identity and its inequality") {
  Rng rng(56);
  for (int t = 0; t < 30; ++t) {
    const auto a = testutil::gaussian(6, 3, rng);
    const auto xs = testutil::random_vec<double>(3, rng);
    const auto e = testutil::orthogonal_residual(a, 0.5, rng);
    const std::vector<std::size_t> tau{0, 3};
    const auto a_tau = row_submatrix(a, tau);
    const std::vector<double> e_tau{e[0], e[3]};
    const auto axs = oracle::mv(testutil::to_oracle(a), xs);
    const std::vector<double> b_tau{axs[0] - e[0], axs[3] - e[3]};
    const auto x_prev = testutil::random_vec<double>(3, rng);
    const auto x_next = dense_block_update(a_tau, x_prev, b_tau);
    const auto c = per_iteration_identity_check<double>(x_prev, x_next, xs, a_tau, e_tau);
    CHECK(c.identity_holds);
    CHECK(c.rel_error < 1e-10);
    CHECK(c.lemma_holds);
  }
}

TEST_CASE("consistent step is a pure projection") {
  Rng rng(57);
  const auto a = testutil::gaussian(2, 5, rng);
  const auto xs = testutil::random_vec<double>(5, rng);
  const auto x_prev = testutil::random_vec<double>(5, rng);
  const auto x_next = dense_block_update(a, x_prev, oracle::mv(testutil::to_oracle(a), xs));
  const std::vector<double> zero(2, 0.0);
  const auto c = per_iteration_identity_check<double>(x_prev, x_next, xs, a, zero);
  CHECK(c.pinv_residual_sq == 0.0);
  CHECK(c.lhs == doctest::Approx(c.projected_sq).epsilon(1e-12));
}

TEST_CASE("expected one-step contraction by block enumeration") {
  // (1/m) sum_w ||(I - A_w^dagger A_w) u||^2 <= 1 - sigma_min^2 / (beta m)
  Rng rng(58);
  for (int t = 0; t < 10; ++t) {
    const auto a = normalize_rows(testutil::gaussian(30, 12, rng));
    DenseOperator<double> op(a);
    const auto p = random_partition(30, 6, rng);
    const auto bounds = compute_paving_bounds(op, p);
    const double s2 = sigma_extremes(op).sigma_min_sq();
    auto u = testutil::random_vec<double>(12, rng);
    const double un = std::sqrt(oracle::norm2sq(u));
    for (auto& v : u) v /= un;
    double avg = 0.0;
    for (const auto& tau : p.blocks()) {
      const auto o = testutil::to_oracle(row_submatrix(a, tau));
      const auto pu = oracle::pinv_apply(o, oracle::mv(o, u));
      double r = 0.0;
      for (std::size_t k = 0; k < 12; ++k) r += (u[k] - pu[k]) * (u[k] - pu[k]);
      avg += r / static_cast<double>(p.size());
    }
    CHECK(avg <= 1.0 - s2 / (bounds.beta * static_cast<double>(bounds.m)) + 1e-8);
  }
}

TEST_CASE("theoretical bound formula") {
  PavingBounds b;
  b.m = 4;
  b.alpha = 0.5;
  b.beta = 2.0;
  const auto v = theoretical_bound(3, 0.8, b, 10.0, 0.01);
  const double c = 1.0 - 0.8 / 8.0;
  CHECK(v.contraction == doctest::Approx(c));
  CHECK(v.horizon == doctest::Approx(4.0 * 0.01 / 0.8));
  CHECK(v.value == doctest::Approx(c * c * c * 10.0 + 0.05));
  CHECK_FALSE(v.vacuous);
  // j = 0 gives err0 plus the horizon term
  CHECK(theoretical_bound(0, 0.8, b, 10.0, 0.01).value == doctest::Approx(10.05));
  // consistent case decays to zero
  CHECK(theoretical_bound(5000, 0.8, b, 10.0, 0.0).value < 1e-100);
  // no decay when sigma_min = 0
  CHECK(theoretical_bound(10, 0.0, b, 1.0, 0.0).vacuous);
}

TEST_CASE("single-row standardized bound reduces to the simple-method form") {
  PavingBounds b;
  b.m = 50;
  b.alpha = b.beta = 1.0;
  const double s2 = 0.3, e2 = 0.02;
  const auto v = theoretical_bound(7, s2, b, 2.0, e2);
  CHECK(v.value == doctest::Approx(std::pow(1.0 - s2 / 50.0, 7) * 2.0 + e2 / s2));
}

TEST_CASE("tolerance floor") {
  PavingBounds b;
  b.m = 10;
  b.alpha = 0.2;
  b.beta = 2.4;
  CHECK(tolerance_floor(b, 1.0) == doctest::Approx(13.0));
  CHECK(tolerance_floor(b, 0.0) == 0.0);
  b.alpha = b.beta = 1.0;
  CHECK(tolerance_floor(b, 0.5) == doctest::Approx(1.0));
  b.alpha = 0.0;
  CHECK(std::isinf(tolerance_floor(b, 0.5)));
}

TEST_CASE("rate comparison") {
  PavingBounds b;
  b.m = 15;
  b.alpha = b.beta = 1.0;
  const auto r = compare_rates(300, 1.0, b, 0.0, std::nullopt);
  CHECK(r.speedup == doctest::Approx(20.0));
  CHECK(r.horizon_block.has_value());
  CHECK(*r.horizon_block == 0.0);
  CHECK_FALSE(r.horizon_simple.has_value());
  PavingBounds rows;
  rows.m = 40;
  rows.alpha = rows.beta = 1.0;
  CHECK(compare_rates(40, 0.5, rows, std::nullopt, std::nullopt).speedup == doctest::Approx(1.0));
  PavingBounds bad = b;
  bad.alpha = 0.0;
  CHECK_FALSE(compare_rates(300, 1.0, bad, 0.1, 0.01).horizon_block.has_value());
}

TEST_CASE("block solver converges on a consistent system") {
  Rng rng(59);
  auto a = std::make_shared<const DenseOperator<double>>(normalize_rows(testutil::gaussian(60, 20, rng)));
  const auto xs = testutil::random_vec<double>(20, rng);
  const auto p = LeastSquaresProblem<double>::with_solution(a, xs);
  SolverConfig<double> cfg;
  cfg.paving = random_partition(60, 6, rng);
  cfg.tolerance = 1e-10;
  cfg.control.seed = 3;
  const auto rep = run_block_solver(p, cfg);
  CHECK(rep.converged);
  CHECK(distance(rep.x_hat, xs) < 1e-8);
  REQUIRE(rep.trace.size() >= 2);
  CHECK(rep.trace.front().iter == 0);
  CHECK(rep.trace[1].iter == 6);  // checks every m iterations
  CHECK(rep.trace.back().err_norm.has_value());
  CHECK(rep.flops_counted > 0);
  CHECK(rep.warnings.empty());
}

TEST_CASE("starting at the solution converges at the first check") {
  Rng rng(60);
  auto a = std::make_shared<const DenseOperator<double>>(testutil::gaussian(8, 3, rng));
  const auto xs = testutil::random_vec<double>(3, rng);
  SolverConfig<double> cfg;
  cfg.paving = contiguous_paving(8, 2);
  cfg.x0 = xs;
  const auto rep = run_block_solver(LeastSquaresProblem<double>::with_solution(a, xs), cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
}

TEST_CASE("simple solver converges and warns on non-unit rows") {
  Rng rng(61);
  auto std_a = std::make_shared<const DenseOperator<double>>(normalize_rows(testutil::gaussian(30, 5, rng)));
  const auto xs = testutil::random_vec<double>(5, rng);
  SolverConfig<double> cfg;
  cfg.tolerance = 1e-10;
  auto rep = run_simple_solver(LeastSquaresProblem<double>::with_solution(std_a, xs), cfg);
  CHECK(rep.converged);
  CHECK(rep.warnings.empty());
  CHECK(rep.trace[1].iter == 30);
  auto raw = std::make_shared<const DenseOperator<double>>(testutil::gaussian(30, 5, rng));
  rep = run_simple_solver(LeastSquaresProblem<double>::with_solution(raw, xs), cfg);
  CHECK(rep.converged);
  REQUIRE_FALSE(rep.warnings.empty());
}

TEST_CASE("simple solver on a structured operator") {
  Rng rng(62);
  EnsembleSpec spec{EnsembleKind::BlockCirculant, 32, 16, 4, 8};
  auto ens = gen_block_circulant(spec, rng);
  const auto xs = testutil::random_vec<cplx>(16, rng);
  SolverConfig<cplx> cfg;
  cfg.tolerance = 1e-9;
  const auto rep = run_simple_solver(LeastSquaresProblem<cplx>::with_solution(ens.a, xs), cfg);
  CHECK(rep.converged);
  CHECK(rep.flops_model == rep.iterations * 4 * 16);
}

TEST_CASE("circulant natural paving uses the step model") {
  Rng rng(63);
  EnsembleSpec spec{EnsembleKind::BlockCirculant, 40, 64, 4, 10};
  auto ens = gen_block_circulant(spec, rng);
  const auto xs = testutil::random_vec<cplx>(64, rng);
  SolverConfig<cplx> cfg;
  cfg.paving = ens.paving;
  cfg.max_epochs = 3;
  cfg.tolerance = 1e-300;
  const auto rep = run_block_solver(LeastSquaresProblem<cplx>::with_solution(ens.a, xs), cfg);
  CHECK(rep.iterations == 12);
  CHECK(rep.flops_model == 12 * flop_model(StepKind::CirculantBlock, 64));
}

TEST_CASE("tolerance below the floor warns and runs to max epochs") {
  Rng rng(64);
  const auto dense = normalize_rows(testutil::gaussian(40, 20, rng));
  auto a = std::make_shared<const DenseOperator<double>>(dense);
  const auto xs = testutil::random_vec<double>(20, rng);
  auto p = LeastSquaresProblem<double>::with_solution(a, xs, testutil::orthogonal_residual(dense, 0.1, rng));
  SolverConfig<double> cfg;
  cfg.paving = random_partition(40, 8, rng);
  cfg.max_epochs = 30;
  cfg.tolerance = 0.05;  // eps^2 = 0.0025 < ||e||^2
  const auto rep = run_block_solver(p, cfg);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 30 * 8);
  REQUIRE(rep.tolerance_floor.has_value());
  bool found = false;
  for (const auto& w : rep.warnings) found = found || w.find("tolerance floor") != std::string::npos;
  CHECK(found);
}

TEST_CASE("solver runs are reproducible") {
  Rng rng(65);
  auto a = std::make_shared<const DenseOperator<double>>(normalize_rows(testutil::gaussian(30, 10, rng)));
  const auto p = LeastSquaresProblem<double>::with_solution(a, testutil::random_vec<double>(10, rng));
  SolverConfig<double> cfg;
  cfg.paving = random_partition(30, 5, rng);
  cfg.control = {ControlKind::CyclicWithoutReplacement, 99};
  cfg.max_epochs = 7;
  cfg.tolerance = 1e-300;
  const auto r1 = run_block_solver(p, cfg);
  const auto r2 = run_block_solver(p, cfg);
  CHECK(r1.x_hat == r2.x_hat);
  REQUIRE(r1.trace.size() == r2.trace.size());
  for (std::size_t i = 0; i < r1.trace.size(); ++i) CHECK(r1.trace[i].resid_norm == r2.trace[i].resid_norm);
}

TEST_CASE("observer sees iterates and can stop the run") {
  Rng rng(66);
  auto a = std::make_shared<const DenseOperator<double>>(normalize_rows(testutil::gaussian(20, 5, rng)));
  const auto p = LeastSquaresProblem<double>::with_solution(a, testutil::random_vec<double>(5, rng));
  SolverConfig<double> cfg;
  cfg.paving = contiguous_paving(20, 4);
  cfg.tolerance = 1e-300;
  cfg.observe_every = 1;
  std::size_t calls = 0;
  cfg.observer = [&](const ProgressView<double>& v) {
    ++calls;
    CHECK(v.x.size() == 5);
    return v.iter < 9;
  };
  const auto rep = run_block_solver(p, cfg);
  CHECK(rep.stopped_by_observer);
  CHECK(rep.iterations == 9);
  CHECK(calls == 10);
}

TEST_CASE("problem validation") {
  Rng rng(67);
  auto a = std::make_shared<const DenseOperator<double>>(testutil::gaussian(5, 3, rng));
  LeastSquaresProblem<double> p;
  p.a = a;
  p.b = std::vector<double>(4, 0.0);
  CHECK_THROWS_AS(p.validate(), Error);
  auto q = LeastSquaresProblem<double>::with_solution(a, {1.0, 2.0, 3.0}, {0.1, 0, 0, 0, 0});
  q.validate();
  REQUIRE(q.residual_norm_sq().has_value());
  CHECK(*q.residual_norm_sq() == doctest::Approx(0.01));
}

TEST_CASE("trace csv layout") {
  std::vector<TraceRow> t(2);
  t[1].iter = 5;
  t[1].epoch = 0.5;
  t[1].resid_norm = 0.1;
  t[1].err_norm = 0.25;
  std::ostringstream os;
  write_trace_csv(os, t);
  CHECK(os.str() ==
        "iter,epoch,flops_model,flops_counted,wall_ns,resid_norm,err_norm,regularized_steps,cg_unconverged_steps\n"
        "0,0,0,0,0,0,,0,0\n"
        "5,0.5,0,0,0,0.10000000000000001,0.25,0,0\n");
}

}
