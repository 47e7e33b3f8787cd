#include "bkz.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <variant>

#include "experiments.hpp"
#include "fit.hpp"
#include "io.hpp"
#include "kaczmarz.hpp"
#include "paving.hpp"
#include "spectral.hpp"

using namespace bkz;

struct bkz_operator {
  std::shared_ptr<const LinearOperator<double>> real;
  std::shared_ptr<const LinearOperator<cplx>> complex;

  bool is_complex() const { return complex != nullptr; }
  std::size_t rows() const { return complex ? complex->rows() : real->rows(); }
  std::size_t cols() const { return complex ? complex->cols() : real->cols(); }
  std::shared_ptr<const LinearOperator<cplx>> as_cplx() const {
    return complex ? complex : as_complex(real);
  }
};

struct bkz_vector {
  AnyVector v;
};

struct bkz_paving {
  RowPaving p;
};

struct bkz_report {
  std::variant<SolveReport<double>, SolveReport<cplx>> r;
  template <class F>
  decltype(auto) with(F&& f) const {
    return std::visit(std::forward<F>(f), r);
  }
};

struct bkz_experiment_config {
  ExperimentConfig c;
};

struct bkz_experiment_result {
  ExperimentResult r;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

bkz_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return BKZ_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return BKZ_ERR_DIMENSION;
    case ErrorCode::Io: return BKZ_ERR_IO;
    case ErrorCode::Parse: return BKZ_ERR_PARSE;
    case ErrorCode::Numeric: return BKZ_ERR_NUMERIC;
    case ErrorCode::NotConverged: return BKZ_ERR_NOT_CONVERGED;
  }
  return BKZ_ERR_INTERNAL;
}

template <class F>
bkz_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return BKZ_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BKZ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BKZ_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return BKZ_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  require(p != nullptr, ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

PavingBounds from_c(const bkz_paving_bounds& b) {
  PavingBounds out;
  out.m = b.m;
  out.alpha = b.alpha;
  out.beta = b.beta;
  out.exact = b.exact != 0;
  out.rank_deficient_blocks = b.rank_deficient_blocks;
  return out;
}

bkz_paving_bounds to_c(const PavingBounds& b) {
  return {b.m, b.alpha, b.beta, b.condition_bound(), b.exact ? 1 : 0, b.rank_deficient_blocks};
}

std::optional<double> opt_from_nan(double v) {
  if (std::isnan(v)) return std::nullopt;
  return v;
}

double nan_from_opt(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

template <class T>
SolverConfig<T> solver_config(const bkz_solver_config& c) {
  SolverConfig<T> sc;
  sc.tolerance = c.tolerance;
  sc.check_every = c.check_every;
  sc.max_epochs = c.max_epochs;
  sc.control = {c.control == BKZ_CONTROL_CYCLE ? ControlKind::CyclicWithoutReplacement
                                               : ControlKind::UniformWithReplacement,
                c.seed};
  sc.inner.kind = c.inner == BKZ_INNER_DIRECT ? InnerKind::DirectGram
                  : c.inner == BKZ_INNER_CG   ? InnerKind::IterativeCG
                                              : InnerKind::Auto;
  sc.inner.cg_tol = c.cg_tol;
  sc.inner.cg_max_iters = c.cg_max_iters;
  sc.inner.warm_start = c.warm_start != 0;
  return sc;
}

bool any_complex(const bkz_operator* a, const bkz_vector* b, const bkz_vector* xs) {
  auto cv = [](const bkz_vector* v) { return v && std::holds_alternative<Vec<cplx>>(v->v); };
  return a->is_complex() || cv(b) || cv(xs);
}

template <class T>
LeastSquaresProblem<T> make_problem(const bkz_operator* a, const bkz_vector* b, const bkz_vector* xs) {
  LeastSquaresProblem<T> p;
  if constexpr (std::is_same_v<T, cplx>) {
    p.a = a->as_cplx();
    p.b = as_complex_vector(b->v);
    if (xs) p.x_star = as_complex_vector(xs->v);
  } else {
    p.a = a->real;
    p.b = as_real_vector(b->v);
    if (xs) p.x_star = as_real_vector(xs->v);
  }
  p.validate();
  return p;
}

template <class F>
bkz_status solve_common(const bkz_operator* a, const bkz_vector* b, const bkz_solver_config* cfg,
                        const bkz_vector* xs, bkz_report** out, F&& run) {
  return guarded([&] {
    need(a, "operator");
    need(b, "rhs");
    need(cfg, "config");
    need(out, "out");
    auto rep = std::make_unique<bkz_report>();
    if (any_complex(a, b, xs)) {
      rep->r = run(make_problem<cplx>(a, b, xs), solver_config<cplx>(*cfg));
    } else {
      rep->r = run(make_problem<double>(a, b, xs), solver_config<double>(*cfg));
    }
    *out = rep.release();
  });
}

}  // namespace

extern "C" {

const char* bkz_last_error(void) { return g_last_error.c_str(); }

const char* bkz_version(void) { return "0.1.0"; }

uint64_t bkz_entropy_seed(void) { return Rng::entropy_seed(); }

const char* bkz_status_name(bkz_status s) {
  switch (s) {
    case BKZ_OK: return "ok";
    case BKZ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BKZ_ERR_DIMENSION: return "dimension mismatch";
    case BKZ_ERR_IO: return "i/o error";
    case BKZ_ERR_PARSE: return "parse error";
    case BKZ_ERR_NUMERIC: return "numeric error";
    case BKZ_ERR_NOT_CONVERGED: return "not converged";
    case BKZ_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

/* operators */

bkz_status bkz_operator_read_mm(const char* path, bkz_operator** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto op = std::make_unique<bkz_operator>();
    std::visit(
        [&](auto&& m) {
          using M = std::decay_t<decltype(m)>;
          using T = typename M::scalar_type;
          auto d = std::make_shared<const DenseOperator<T>>(std::move(m));
          if constexpr (std::is_same_v<T, cplx>) op->complex = d;
          else op->real = d;
        },
        read_matrix_market_file(path));
    *out = op.release();
  });
}

bkz_status bkz_operator_from_dense(size_t rows, size_t cols, const double* data, int is_complex,
                                   bkz_operator** out) {
  return guarded([&] {
    need(data, "data");
    need(out, "out");
    require(rows >= 1 && cols >= 1, ErrorCode::InvalidArgument, "matrix must be nonempty");
    auto op = std::make_unique<bkz_operator>();
    if (is_complex) {
      std::vector<cplx> v(rows * cols);
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = {data[2 * k], data[2 * k + 1]};
      op->complex = std::make_shared<const DenseOperator<cplx>>(DenseMatrix<cplx>(rows, cols, std::move(v)));
    } else {
      std::vector<double> v(data, data + rows * cols);
      op->real = std::make_shared<const DenseOperator<double>>(DenseMatrix<double>(rows, cols, std::move(v)));
    }
    *out = op.release();
  });
}

bkz_status bkz_operator_generate(const char* ensemble, size_t n, size_t d, size_t blocks,
                                 uint64_t seed, bkz_operator** out, bkz_paving** natural_paving) {
  return guarded([&] {
    need(ensemble, "ensemble");
    need(out, "out");
    require(n >= 1 && d >= 1 && blocks >= 1 && blocks <= n, ErrorCode::InvalidArgument,
            "need n, d >= 1 and 1 <= blocks <= n");
    EnsembleSpec spec;
    spec.kind = parse_ensemble(ensemble);
    spec.n = n;
    spec.d = d;
    Rng rng(seed, 0);
    auto op = std::make_unique<bkz_operator>();
    RowPaving natural;
    if (spec.kind == EnsembleKind::BlockCirculant) {
      require(n % blocks == 0, ErrorCode::InvalidArgument,
              "circulant ensemble needs n divisible by the block count");
      spec.block_count = blocks;
      spec.rows_per_block = n / blocks;
      auto ens = gen_block_circulant(spec, rng);
      op->complex = ens.a;
      natural = std::move(ens.paving);
    } else {
      auto m = spec.kind == EnsembleKind::SphereRows ? gen_sphere_rows(spec, rng) : gen_coherent(spec, rng);
      op->real = std::make_shared<const DenseOperator<double>>(std::move(m));
      natural = contiguous_paving(n, blocks);
    }
    if (natural_paving) *natural_paving = new bkz_paving{std::move(natural)};
    *out = op.release();
  });
}

size_t bkz_operator_rows(const bkz_operator* op) { return op ? op->rows() : 0; }
size_t bkz_operator_cols(const bkz_operator* op) { return op ? op->cols() : 0; }
int bkz_operator_is_complex(const bkz_operator* op) { return op && op->is_complex() ? 1 : 0; }

int bkz_operator_standardized(const bkz_operator* op) {
  if (!op) return 0;
  try {
    return (op->complex ? op->complex->materialize().standardized() : op->real->materialize().standardized()) ? 1 : 0;
  } catch (...) {
    return 0;
  }
}

bkz_status bkz_operator_write_mm(const bkz_operator* op, const char* path) {
  return guarded([&] {
    need(op, "operator");
    need(path, "path");
    if (op->complex) write_matrix_market_file(path, op->complex->materialize());
    else write_matrix_market_file(path, op->real->materialize());
  });
}

bkz_status bkz_operator_matvec(const bkz_operator* op, const double* x, double* y) {
  return guarded([&] {
    need(op, "operator");
    need(x, "x");
    need(y, "y");
    if (op->complex) {
      std::span<const cplx> xs(reinterpret_cast<const cplx*>(x), op->cols());
      op->complex->apply(xs, std::span<cplx>(reinterpret_cast<cplx*>(y), op->rows()));
    } else {
      op->real->apply(std::span<const double>(x, op->cols()), std::span<double>(y, op->rows()));
    }
  });
}

bkz_status bkz_operator_to_dense(const bkz_operator* op, double* data) {
  return guarded([&] {
    need(op, "operator");
    need(data, "data");
    if (op->complex) {
      const auto m = op->complex->materialize();
      std::memcpy(data, m.data().data(), m.data().size() * sizeof(cplx));
    } else {
      const auto m = op->real->materialize();
      std::memcpy(data, m.data().data(), m.data().size() * sizeof(double));
    }
  });
}

void bkz_operator_free(bkz_operator* op) { delete op; }

/* vectors */

bkz_status bkz_vector_read(const char* path, bkz_vector** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new bkz_vector{read_vector_file(path)};
  });
}

bkz_status bkz_vector_from_real(size_t n, const double* data, bkz_vector** out) {
  return guarded([&] {
    need(out, "out");
    require(n == 0 || data, ErrorCode::InvalidArgument, "data must not be NULL");
    *out = new bkz_vector{Vec<double>(data, data + n)};
  });
}

bkz_status bkz_vector_from_complex(size_t n, const double* interleaved, bkz_vector** out) {
  return guarded([&] {
    need(out, "out");
    require(n == 0 || interleaved, ErrorCode::InvalidArgument, "data must not be NULL");
    Vec<cplx> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = {interleaved[2 * k], interleaved[2 * k + 1]};
    *out = new bkz_vector{std::move(v)};
  });
}

size_t bkz_vector_size(const bkz_vector* v) {
  return v ? std::visit([](const auto& x) { return x.size(); }, v->v) : 0;
}

int bkz_vector_is_complex(const bkz_vector* v) {
  return v && std::holds_alternative<Vec<cplx>>(v->v) ? 1 : 0;
}

bkz_status bkz_vector_get(const bkz_vector* v, size_t i, double* re, double* im) {
  return guarded([&] {
    need(v, "vector");
    require(i < bkz_vector_size(v), ErrorCode::InvalidArgument, "vector index out of range");
    const cplx z = std::visit([&](const auto& x) { return cplx(x[i]); }, v->v);
    if (re) *re = z.real();
    if (im) *im = z.imag();
  });
}

bkz_status bkz_vector_write(const bkz_vector* v, const char* path) {
  return guarded([&] {
    need(v, "vector");
    need(path, "path");
    std::visit(
        [&](const auto& x) {
          using T = typename std::decay_t<decltype(x)>::value_type;
          write_vector_file<T>(path, std::span<const T>(x));
        },
        v->v);
  });
}

void bkz_vector_free(bkz_vector* v) { delete v; }

/* pavings */

bkz_status bkz_paving_read(const char* path, bkz_paving** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new bkz_paving{read_paving_file(path)};
  });
}

bkz_status bkz_paving_write(const bkz_paving* p, const char* path) {
  return guarded([&] {
    need(p, "paving");
    need(path, "path");
    write_paving_file(path, p->p);
  });
}

bkz_status bkz_paving_random(size_t n, size_t m, uint64_t seed, bkz_paving** out) {
  return guarded([&] {
    need(out, "out");
    Rng rng(seed, 0);
    *out = new bkz_paving{random_partition(n, m, rng)};
  });
}

bkz_status bkz_paving_single_rows(size_t n, bkz_paving** out) {
  return guarded([&] {
    need(out, "out");
    *out = new bkz_paving{single_row_paving(n)};
  });
}

bkz_status bkz_paving_contiguous(size_t n, size_t m, bkz_paving** out) {
  return guarded([&] {
    need(out, "out");
    *out = new bkz_paving{contiguous_paving(n, m)};
  });
}

size_t bkz_paving_count(const bkz_paving* p) { return p ? p->p.size() : 0; }
size_t bkz_paving_rows(const bkz_paving* p) { return p ? p->p.rows() : 0; }

size_t bkz_paving_block_size(const bkz_paving* p, size_t block) {
  return p && block < p->p.size() ? p->p.block(block).size() : 0;
}

bkz_status bkz_paving_block_indices(const bkz_paving* p, size_t block, size_t* out) {
  return guarded([&] {
    need(p, "paving");
    need(out, "out");
    require(block < p->p.size(), ErrorCode::InvalidArgument, "block index out of range");
    const auto& b = p->p.block(block);
    std::copy(b.begin(), b.end(), out);
  });
}

void bkz_paving_free(bkz_paving* p) { delete p; }

/* analysis */

bkz_status bkz_compute_paving_bounds(const bkz_operator* op, const bkz_paving* p,
                                     bkz_paving_bounds* out) {
  return guarded([&] {
    need(op, "operator");
    need(p, "paving");
    need(out, "out");
    *out = to_c(op->complex ? compute_paving_bounds(*op->complex, p->p)
                            : compute_paving_bounds(*op->real, p->p));
  });
}

bkz_status bkz_coherence_compute(const bkz_operator* op, uint64_t seed, bkz_coherence* out) {
  return guarded([&] {
    need(op, "operator");
    need(out, "out");
    Rng rng(seed, 0);
    const CoherenceReport r = op->complex ? coherence_auto(op->complex->materialize(), rng)
                                          : coherence_auto(op->real->materialize(), rng);
    *out = {r.max_off_diagonal, r.max_diagonal_deviation, r.argmax_pair.first,
            r.argmax_pair.second, r.pairs_examined, r.sampled ? 1 : 0};
  });
}

bkz_status bkz_sigma_extremes(const bkz_operator* op, bkz_spectral* out) {
  return guarded([&] {
    need(op, "operator");
    need(out, "out");
    const SpectralEstimates s = op->complex ? sigma_extremes(*op->complex) : sigma_extremes(*op->real);
    *out = {s.sigma_min, s.sigma_max, s.method == SpectralMethod::ExactSmall ? 1 : 0,
            s.converged ? 1 : 0, s.iterations};
  });
}

bkz_status bkz_fit_transform(const bkz_operator* a, const bkz_vector* b, uint64_t seed, int all_plus,
                             bkz_operator** w, bkz_vector** b_tilde, bkz_vector** signs) {
  return guarded([&] {
    need(a, "operator");
    need(b, "rhs");
    need(w, "w");
    need(b_tilde, "b_tilde");
    const Vec<cplx> bc = as_complex_vector(b->v);
    FitResult fr;
    if (all_plus) {
      fr = fit_transform_with_signs(a->as_cplx(), bc, std::vector<double>(a->rows(), 1.0));
    } else {
      Rng rng(seed, 0);
      fr = fit_transform(a->as_cplx(), bc, rng);
    }
    auto wop = std::make_unique<bkz_operator>();
    wop->complex = fr.w;
    auto bt = std::make_unique<bkz_vector>(bkz_vector{std::move(fr.b_tilde)});
    if (signs) *signs = new bkz_vector{Vec<double>(fr.signs)};
    *w = wop.release();
    *b_tilde = bt.release();
  });
}

bkz_status bkz_check_fit_hypothesis(const bkz_operator* a, double c_fit, int* holds, double* norm_sq,
                                    double* threshold) {
  return guarded([&] {
    need(a, "operator");
    bool ok = false;
    double ns = 0.0;
    if (a->complex) {
      const auto m = a->complex->materialize();
      ok = check_fit_hypothesis(m, c_fit);
      ns = sigma_extremes(*a->complex).sigma_max_sq();
    } else {
      const auto m = a->real->materialize();
      ok = check_fit_hypothesis(m, c_fit);
      ns = sigma_extremes(*a->real).sigma_max_sq();
    }
    if (holds) *holds = ok ? 1 : 0;
    if (norm_sq) *norm_sq = ns;
    if (threshold) *threshold = fit_norm_threshold(a->rows(), c_fit);
  });
}

bkz_status bkz_random_paving_block_count(double norm_sq, size_t n, double delta, double c_rand,
                                         size_t* m, int* clamped) {
  return guarded([&] {
    need(m, "m");
    bool c = false;
    *m = random_paving_block_count(norm_sq, n, delta, c_rand, &c);
    if (clamped) *clamped = c ? 1 : 0;
  });
}

bkz_status bkz_theoretical_bound(size_t j, double sigma_min2, const bkz_paving_bounds* b,
                                 double err0sq, double err_res_sq, bkz_bound_value* out) {
  return guarded([&] {
    need(b, "bounds");
    need(out, "out");
    const BoundValue v = theoretical_bound(j, sigma_min2, from_c(*b), err0sq, err_res_sq);
    *out = {v.value, v.contraction, v.horizon, v.vacuous ? 1 : 0};
  });
}

bkz_status bkz_tolerance_floor(const bkz_paving_bounds* b, double e_norm_sq, double* out) {
  return guarded([&] {
    need(b, "bounds");
    need(out, "out");
    *out = tolerance_floor(from_c(*b), e_norm_sq);
  });
}

bkz_status bkz_compare_rates(size_t n, double sigma_min2, const bkz_paving_bounds* b,
                             double e_norm_sq, double e_inf_sq, bkz_rate_comparison* out) {
  return guarded([&] {
    need(b, "bounds");
    need(out, "out");
    const RateComparison r =
        compare_rates(n, sigma_min2, from_c(*b), opt_from_nan(e_norm_sq), opt_from_nan(e_inf_sq));
    *out = {r.sigma_min2, r.n, r.m, r.alpha, r.beta, r.contraction, r.block_rate,
            r.simple_rate, r.speedup, nan_from_opt(r.horizon_block), nan_from_opt(r.horizon_simple)};
  });
}

/* solver */

void bkz_solver_config_init(bkz_solver_config* cfg) {
  if (!cfg) return;
  const InnerSolver inner;
  const SolverConfig<double> d;
  cfg->tolerance = d.tolerance;
  cfg->check_every = d.check_every;
  cfg->max_epochs = d.max_epochs;
  cfg->control = BKZ_CONTROL_UNIFORM;
  cfg->seed = 0;
  cfg->inner = BKZ_INNER_AUTO;
  cfg->cg_tol = inner.cg_tol;
  cfg->cg_max_iters = inner.cg_max_iters;
  cfg->warm_start = inner.warm_start ? 1 : 0;
}

bkz_status bkz_solve_block(const bkz_operator* a, const bkz_vector* b, const bkz_paving* p,
                           const bkz_solver_config* cfg, const bkz_vector* x_star, bkz_report** out) {
  if (!p) {
    g_last_error = "paving must not be NULL";
    return BKZ_ERR_INVALID_ARGUMENT;
  }
  return solve_common(a, b, cfg, x_star, out, [&](const auto& prob, auto sc) {
    sc.paving = p->p;
    return run_block_solver(prob, sc);
  });
}

bkz_status bkz_solve_simple(const bkz_operator* a, const bkz_vector* b, const bkz_solver_config* cfg,
                            const bkz_vector* x_star, bkz_report** out) {
  return solve_common(a, b, cfg, x_star, out,
                      [&](const auto& prob, const auto& sc) { return run_simple_solver(prob, sc); });
}

int bkz_report_converged(const bkz_report* r) {
  return r && r->with([](const auto& x) { return x.converged; }) ? 1 : 0;
}
size_t bkz_report_iterations(const bkz_report* r) {
  return r ? r->with([](const auto& x) { return x.iterations; }) : 0;
}
double bkz_report_epochs(const bkz_report* r) {
  return r ? r->with([](const auto& x) { return x.epochs; }) : 0.0;
}
uint64_t bkz_report_flops_model(const bkz_report* r) {
  return r ? r->with([](const auto& x) { return x.flops_model; }) : 0;
}
uint64_t bkz_report_flops_counted(const bkz_report* r) {
  return r ? r->with([](const auto& x) { return x.flops_counted; }) : 0;
}
double bkz_report_tolerance_floor(const bkz_report* r) {
  if (!r) return std::numeric_limits<double>::quiet_NaN();
  return nan_from_opt(r->with([](const auto& x) { return x.tolerance_floor; }));
}

size_t bkz_report_trace_size(const bkz_report* r) {
  return r ? r->with([](const auto& x) { return x.trace.size(); }) : 0;
}

bkz_status bkz_report_trace_row(const bkz_report* r, size_t i, bkz_trace_row* out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    const auto& t = r->with([](const auto& x) -> const std::vector<TraceRow>& { return x.trace; });
    require(i < t.size(), ErrorCode::InvalidArgument, "trace row out of range");
    const TraceRow& row = t[i];
    *out = {row.iter,       row.epoch,           row.flops_model,       row.flops_counted,
            row.wall_ns,    row.resid_norm,      nan_from_opt(row.err_norm),
            row.regularized_steps, row.cg_unconverged_steps};
  });
}

size_t bkz_report_warning_count(const bkz_report* r) {
  return r ? r->with([](const auto& x) { return x.warnings.size(); }) : 0;
}

const char* bkz_report_warning(const bkz_report* r, size_t i) {
  if (!r) return nullptr;
  const auto& w = r->with([](const auto& x) -> const std::vector<std::string>& { return x.warnings; });
  return i < w.size() ? w[i].c_str() : nullptr;
}

bkz_status bkz_report_solution(const bkz_report* r, bkz_vector** out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    *out = new bkz_vector{r->with([](const auto& x) { return AnyVector(x.x_hat); })};
  });
}

bkz_status bkz_report_write_trace(const bkz_report* r, const char* path) {
  return guarded([&] {
    need(r, "report");
    need(path, "path");
    write_trace_csv_file(path, r->with([](const auto& x) -> const std::vector<TraceRow>& { return x.trace; }));
  });
}

void bkz_report_free(bkz_report* r) { delete r; }

/* experiments */

bkz_status bkz_experiment_config_preset(const char* name, bkz_experiment_config** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = new bkz_experiment_config{preset(name)};
  });
}

bkz_status bkz_experiment_config_set(bkz_experiment_config* c, const char* key, const char* value) {
  return guarded([&] {
    need(c, "config");
    need(key, "key");
    need(value, "value");
    c->c.set(key, value);
  });
}

bkz_status bkz_experiment_config_load(bkz_experiment_config* c, const char* path) {
  return guarded([&] {
    need(c, "config");
    need(path, "path");
    c->c.load_file(path);
  });
}

void bkz_experiment_config_free(bkz_experiment_config* c) { delete c; }

bkz_status bkz_experiment_run(const bkz_experiment_config* c, bkz_experiment_result** out) {
  return guarded([&] {
    need(c, "config");
    need(out, "out");
    auto res = std::make_unique<bkz_experiment_result>();
    res->r = run_comparison(c->c);
    res->json = summary_json(res->r);
    *out = res.release();
  });
}

bkz_status bkz_experiment_write_csv(const bkz_experiment_result* r, const char* path) {
  return guarded([&] {
    need(r, "result");
    need(path, "path");
    emit_csv_file(r->r, path);
  });
}

const char* bkz_experiment_summary_json(const bkz_experiment_result* r) {
  return r ? r->json.c_str() : nullptr;
}

void bkz_experiment_free(bkz_experiment_result* r) { delete r; }

}  // extern "C"
