#include "kaczmarz.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "flops.hpp"
#include "format.hpp"

namespace bkz {

template <class T>
LeastSquaresProblem<T> LeastSquaresProblem<T>::with_solution(std::shared_ptr<const LinearOperator<T>> a,
                                                             Vec<T> x_star, Vec<T> e) {
  require(a != nullptr, ErrorCode::InvalidArgument, "problem needs an operator");
  require_dims(x_star.size(), a->cols(), "x_star");
  LeastSquaresProblem p;
  p.b = matvec(*a, std::span<const T>(x_star));
  if (e.empty()) {
    e.assign(a->rows(), T{});
  } else {
    require_dims(e.size(), a->rows(), "residual e");
    for (std::size_t i = 0; i < e.size(); ++i) p.b[i] -= e[i];
  }
  p.a = std::move(a);
  p.x_star = std::move(x_star);
  p.residual = std::move(e);
  return p;
}

template <class T>
void LeastSquaresProblem<T>::validate() {
  require(a != nullptr, ErrorCode::InvalidArgument, "problem needs an operator");
  require_dims(b.size(), a->rows(), "right-hand side");
  if (x_star) {
    require_dims(x_star->size(), a->cols(), "x_star");
    if (!residual) {
      Vec<T> e = matvec(*a, std::span<const T>(*x_star));
      for (std::size_t i = 0; i < e.size(); ++i) e[i] -= b[i];
      residual = std::move(e);
    }
  }
  if (residual) require_dims(residual->size(), a->rows(), "residual e");
}

template <class T>
std::optional<double> LeastSquaresProblem<T>::residual_norm_sq() const {
  if (!residual) return std::nullopt;
  return norm_sq(*residual);
}

BlockSelector::BlockSelector(ControlScheme scheme, std::size_t m)
    : scheme_(scheme), m_(m), rng_(scheme.seed, 0xb10c) {
  require(m >= 1, ErrorCode::InvalidArgument, "control scheme needs at least one block");
}

std::size_t BlockSelector::next() {
  if (scheme_.kind == ControlKind::UniformWithReplacement) return rng_.uniform_index(m_);
  if (pos_ == perm_.size()) {
    perm_ = rng_.permutation(m_);
    pos_ = 0;
  }
  return perm_[pos_++];
}

template <class T>
void simple_kaczmarz_step(std::span<T> x, std::span<const T> a_t, T b_t, FlopCounter* fc,
                          double row_norm_sq) {
  require_dims(a_t.size(), x.size(), "Kaczmarz row");
  if (row_norm_sq < 0.0) row_norm_sq = norm_sq(a_t, fc);
  require(row_norm_sq > 0.0, ErrorCode::InvalidArgument, "Kaczmarz step on a zero row");
  const T c = (b_t - dotu(a_t, x, fc)) / row_norm_sq;
  count(fc, FlopCost<T>::add + FlopCost<T>::scale_real);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += c * conj(a_t[i]);
  count(fc, FlopCost<T>::mul_add * x.size());
}

namespace {

template <class T>
void factor_block(const LinearOperator<T>& a_tau, BlockInnerState<T>& st, FlopCounter* fc) {
  std::optional<DenseMatrix<T>> owned;
  const DenseMatrix<T>* rows = a_tau.dense();
  if (!rows) {
    owned = a_tau.materialize();
    rows = &*owned;
  }
  DenseMatrix<T> g = gram_block(*rows, fc);
  st.regularized = false;
  if (!st.chol.factor(g, fc)) {
    double trace = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) trace += real_part(g(i, i));
    const double shift = 1e-12 * std::max(trace, std::numeric_limits<double>::min());
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) += shift;
    require(st.chol.factor(g, fc), ErrorCode::Numeric,
            "block Gram matrix is singular even after regularization");
    st.regularized = true;
  }
  st.factored = true;
}

// CG on (A A*) u = r. Tracks s = A* u directly, so the returned correction
// lies in range(A*) whatever the starting point.
template <class T>
void gram_cg(const LinearOperator<T>& a, std::span<const T> r, const InnerSolver& inner,
             BlockInnerState<T>& st, Vec<T>& s, BlockStepInfo& info, FlopCounter* fc) {
  const std::size_t k = a.rows();
  const std::size_t d = a.cols();
  const std::size_t max_it = inner.cg_max_iters ? inner.cg_max_iters : 2 * k;
  Vec<T> res(r.begin(), r.end()), t(d), q(k), u;
  std::fill(s.begin(), s.end(), T{});
  const bool warm = inner.warm_start && st.warm.size() == k;
  if (inner.warm_start) u.assign(k, T{});
  if (warm) {
    u = st.warm;
    a.apply_adjoint(u, s, fc);
    a.apply(s, q, fc);
    for (std::size_t i = 0; i < k; ++i) res[i] -= q[i];
    count(fc, FlopCost<T>::add * k);
  }
  const double stop = inner.cg_tol * inner.cg_tol * norm_sq(r, fc);
  double rr = norm_sq(res, fc);
  Vec<T> p = res;
  std::size_t it = 0;
  while (rr > stop && it < max_it) {
    a.apply_adjoint(p, t, fc);
    const double pgp = norm_sq(t, fc);
    if (!(pgp > 0.0)) break;
    a.apply(t, q, fc);
    const T step = T{rr / pgp};
    if (inner.warm_start) axpy(step, p, u, fc);
    axpy(step, t, s, fc);
    axpy(-step, q, res, fc);
    const double rr_new = norm_sq(res, fc);
    const double ratio = rr_new / rr;
    for (std::size_t i = 0; i < k; ++i) p[i] = res[i] + ratio * p[i];
    count(fc, FlopCost<T>::mul_add * k);
    rr = rr_new;
    ++it;
  }
  info.cg_iters = it;
  info.cg_converged = rr <= stop;
  if (inner.warm_start) st.warm = std::move(u);
}

}  // namespace

template <class T>
BlockStepInfo block_kaczmarz_step(std::span<T> x, const LinearOperator<T>& a_tau,
                                  std::span<const T> b_tau, const InnerSolver& inner,
                                  BlockInnerState<T>* state, FlopCounter* fc) {
  const std::size_t k = a_tau.rows();
  const std::size_t d = a_tau.cols();
  require_dims(x.size(), d, "block step iterate");
  require_dims(b_tau.size(), k, "block right-hand side");
  BlockInnerState<T> local;
  if (!state) state = &local;

  Vec<T> r(k);
  a_tau.apply(x, r, fc);
  for (std::size_t i = 0; i < k; ++i) r[i] = b_tau[i] - r[i];
  count(fc, FlopCost<T>::add * k);

  BlockStepInfo info;
  Vec<T> corr(d);
  InnerKind kind = inner.kind;
  if (kind == InnerKind::Auto) kind = k <= kAutoDirectMaxRows ? InnerKind::DirectGram : InnerKind::IterativeCG;
  if (a_tau.orthonormal_rows()) {
    a_tau.apply_adjoint(r, corr, fc);
  } else if (kind == InnerKind::DirectGram) {
    if (!state->factored) factor_block(a_tau, *state, fc);
    state->chol.solve(r, fc);
    info.regularized = state->regularized;
    a_tau.apply_adjoint(r, corr, fc);
  } else {
    gram_cg(a_tau, std::span<const T>(r), inner, *state, corr, info, fc);
  }
  for (std::size_t i = 0; i < d; ++i) x[i] += corr[i];
  count(fc, FlopCost<T>::add * d);
  return info;
}

template <class T>
BlockKaczmarz<T>::BlockKaczmarz(std::shared_ptr<const LinearOperator<T>> a, const RowPaving& paving,
                                std::span<const T> b, InnerSolver inner)
    : a_(std::move(a)), paving_(paving), b_(b.begin(), b.end()), inner_(inner) {
  require(!paving_.empty(), ErrorCode::InvalidArgument, "block solver needs a paving");
  require_dims(paving_.rows(), a_->rows(), "paving row count");
  require_dims(b_.size(), a_->rows(), "right-hand side");
  slots_.resize(paving_.size());
  if (inner_.kind == InnerKind::Auto && paving_.max_block_size() > kAutoDirectMaxRows)
    condition_ = compute_paving_bounds(*a_, paving_).condition_bound();
}

template <class T>
typename BlockKaczmarz<T>::Slot& BlockKaczmarz<T>::slot(std::size_t block) {
  auto& s = slots_.at(block);
  if (!s) {
    s = std::make_unique<Slot>();
    const auto& tau = paving_.block(block);
    s->op = a_->row_block(tau);
    s->b.resize(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) s->b[i] = b_[tau[i]];
  }
  return *s;
}

template <class T>
InnerKind BlockKaczmarz<T>::resolved_kind(std::size_t block) const {
  if (inner_.kind != InnerKind::Auto) return inner_.kind;
  if (paving_.block(block).size() <= kAutoDirectMaxRows) return InnerKind::DirectGram;
  if (condition_ && *condition_ > kAutoDirectCondition) return InnerKind::DirectGram;
  return InnerKind::IterativeCG;
}

template <class T>
BlockStepInfo BlockKaczmarz<T>::step(std::size_t block, std::span<T> x, FlopCounter* fc) {
  Slot& s = slot(block);
  InnerSolver in = inner_;
  in.kind = resolved_kind(block);
  return block_kaczmarz_step<T>(x, *s.op, s.b, in, &s.state, fc);
}

template <class T>
std::optional<std::uint64_t> BlockKaczmarz<T>::model_flops(std::size_t block) {
  return slot(block).op->block_step_model_flops();
}

namespace {

struct StepOutcome {
  std::optional<std::uint64_t> model;
  BlockStepInfo info;
};

template <class T, class StepFn>
void drive(const LeastSquaresProblem<T>& p, const SolverConfig<T>& cfg, std::size_t epoch_len,
           std::size_t check_every, FlopCounter counted, StepFn&& step, SolveReport<T>& rep) {
  const auto& a = *p.a;
  Vec<T> x = cfg.x0 ? *cfg.x0 : Vec<T>(a.cols(), T{});
  require_dims(x.size(), a.cols(), "initial iterate");
  require(cfg.tolerance > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
  require(cfg.max_epochs >= 1, ErrorCode::InvalidArgument, "max_epochs must be at least 1");
  require(check_every >= 1, ErrorCode::InvalidArgument, "check_every must be at least 1");

  const double tol_sq = cfg.tolerance * cfg.tolerance;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count());
  };
  std::uint64_t model = 0;
  std::size_t regularized = 0, cg_bad = 0;
  Vec<T> ax(a.rows());

  auto check = [&](std::size_t j) {
    a.apply(x, ax, nullptr);
    double rr = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) rr += abs2(ax[i] - p.b[i]);
    TraceRow row;
    row.iter = j;
    row.epoch = static_cast<double>(j) / static_cast<double>(epoch_len);
    row.flops_model = model;
    row.flops_counted = counted.flops;
    row.wall_ns = elapsed();
    row.resid_norm = std::sqrt(rr);
    if (p.x_star) row.err_norm = distance(x, *p.x_star);
    row.regularized_steps = regularized;
    row.cg_unconverged_steps = cg_bad;
    rep.trace.push_back(row);
    return rr <= tol_sq;
  };
  auto observe = [&](std::size_t j) {
    return cfg.observer(ProgressView<T>{j, static_cast<double>(j) / static_cast<double>(epoch_len),
                                        model, counted.flops, elapsed(), std::span<const T>(x)});
  };

  const std::size_t max_iter = cfg.max_epochs * epoch_len;
  std::size_t j = 0;
  bool converged = check(0);
  bool stopped = cfg.observer && !observe(0);
  while (!converged && !stopped && j < max_iter) {
    ++j;
    const std::uint64_t before = counted.flops;
    const StepOutcome out = step(std::span<T>(x), &counted);
    model += out.model ? *out.model : counted.flops - before;
    regularized += out.info.regularized ? 1 : 0;
    cg_bad += out.info.cg_converged ? 0 : 1;
    if (cfg.observer && cfg.observe_every && j % cfg.observe_every == 0 && !observe(j)) stopped = true;
    if (stopped || j % check_every == 0 || j == max_iter) converged = check(j);
  }
  rep.x_hat = std::move(x);
  rep.converged = converged;
  rep.stopped_by_observer = stopped;
  rep.iterations = j;
  rep.epochs = static_cast<double>(j) / static_cast<double>(epoch_len);
  rep.flops_model = model;
  rep.flops_counted = counted.flops;
  if (regularized > 0)
    rep.warnings.push_back(std::to_string(regularized) +
                           " step(s) used a regularized Gram solve on a rank-deficient block");
  if (cg_bad > 0)
    rep.warnings.push_back(std::to_string(cg_bad) +
                           " inner CG solve(s) stopped at the iteration cap before reaching cg_tol");
}

}  // namespace

template <class T>
SolveReport<T> run_block_solver(const LeastSquaresProblem<T>& problem_in, const SolverConfig<T>& cfg) {
  LeastSquaresProblem<T> problem = problem_in;
  problem.validate();
  require(!cfg.paving.empty(), ErrorCode::InvalidArgument, "block solver needs a paving");
  require_dims(cfg.paving.rows(), problem.a->rows(), "paving row count");
  SolveReport<T> rep;
  const std::size_t m = cfg.paving.size();

  if (auto e2 = problem.residual_norm_sq(); e2 && *e2 > 0.0) {
    const PavingBounds bounds = compute_paving_bounds(*problem.a, cfg.paving);
    const double floor = tolerance_floor(bounds, *e2);
    rep.tolerance_floor = floor;
    const double tol_sq = cfg.tolerance * cfg.tolerance;
    if (tol_sq <= floor) {
      rep.warnings.push_back("tolerance eps^2 = " + format_double(tol_sq) +
                             " is at or below the tolerance floor (1 + beta/alpha)||e||^2 = " +
                             format_double(floor) + "; convergence is not guaranteed");
    }
  }

  BlockKaczmarz<T> bk(problem.a, cfg.paving, problem.b, cfg.inner);
  BlockSelector sel(cfg.control, m);
  drive<T>(problem, cfg, m, cfg.check_every ? cfg.check_every : m, FlopCounter{},
           [&](std::span<T> x, FlopCounter* fc) {
             const std::size_t blk = sel.next();
             StepOutcome out;
             out.info = bk.step(blk, x, fc);
             out.model = bk.model_flops(blk);
             return out;
           },
           rep);
  return rep;
}

template <class T>
SolveReport<T> run_simple_solver(const LeastSquaresProblem<T>& problem_in, const SolverConfig<T>& cfg) {
  LeastSquaresProblem<T> problem = problem_in;
  problem.validate();
  const auto& a = *problem.a;
  const std::size_t n = a.rows();
  const std::size_t d = a.cols();
  SolveReport<T> rep;

  std::optional<DenseMatrix<T>> owned;
  const DenseMatrix<T>* rows = a.dense();
  if (!rows) {
    owned = a.materialize();
    rows = &*owned;
  }
  FlopCounter setup;
  std::vector<double> nrm(n);
  for (std::size_t i = 0; i < n; ++i) {
    nrm[i] = norm_sq(rows->row(i), &setup);
    require(nrm[i] > 0.0, ErrorCode::InvalidArgument, "row " + std::to_string(i + 1) + " is zero");
  }
  if (!rows->standardized(1e-8))
    rep.warnings.push_back("rows are not unit norm; uniform row selection is not the standard weighting");

  BlockSelector sel(cfg.control, n);
  const std::uint64_t step_model = flop_model(StepKind::Simple, d);
  drive<T>(problem, cfg, n, cfg.check_every ? cfg.check_every : n, setup,
           [&](std::span<T> x, FlopCounter* fc) {
             const std::size_t t = sel.next();
             simple_kaczmarz_step<T>(x, rows->row(t), problem.b[t], fc, nrm[t]);
             return StepOutcome{step_model, {}};
           },
           rep);
  return rep;
}

BoundValue theoretical_bound(std::size_t j, double sigma_min2, const PavingBounds& bounds,
                             double err0sq, double err_res_sq) {
  require(sigma_min2 >= 0.0 && err0sq >= 0.0 && err_res_sq >= 0.0, ErrorCode::InvalidArgument,
          "bound inputs must be nonnegative");
  BoundValue out;
  double bracket = 1.0;
  if (bounds.beta > 0.0 && bounds.m > 0)
    bracket = 1.0 - sigma_min2 / (bounds.beta * static_cast<double>(bounds.m));
  if (!(bracket < 1.0)) out.vacuous = true;
  out.contraction = std::clamp(bracket, 0.0, 1.0);
  if (err_res_sq == 0.0)
    out.horizon = 0.0;
  else if (bounds.alpha > 0.0 && sigma_min2 > 0.0)
    out.horizon = bounds.beta / bounds.alpha * err_res_sq / sigma_min2;
  else
    out.horizon = std::numeric_limits<double>::infinity();
  out.value = std::pow(out.contraction, static_cast<double>(j)) * err0sq + out.horizon;
  return out;
}

double tolerance_floor(const PavingBounds& bounds, double e_norm_sq) {
  if (e_norm_sq == 0.0) return 0.0;
  if (!(bounds.alpha > 0.0)) return std::numeric_limits<double>::infinity();
  return (1.0 + bounds.beta / bounds.alpha) * e_norm_sq;
}

RateComparison compare_rates(std::size_t n, double sigma_min2, const PavingBounds& bounds,
                             std::optional<double> e_norm_sq, std::optional<double> e_inf_sq) {
  RateComparison r;
  r.sigma_min2 = sigma_min2;
  r.n = n;
  r.m = bounds.m;
  r.alpha = bounds.alpha;
  r.beta = bounds.beta;
  const double bm = bounds.beta * static_cast<double>(bounds.m);
  r.block_rate = sigma_min2 / bm;
  r.contraction = 1.0 - r.block_rate;
  r.simple_rate = sigma_min2 / static_cast<double>(n);
  r.speedup = static_cast<double>(n) / bm;
  if (e_norm_sq) {
    if (*e_norm_sq == 0.0)
      r.horizon_block = 0.0;
    else if (bounds.alpha > 0.0)
      r.horizon_block = bounds.beta / bounds.alpha * *e_norm_sq / sigma_min2;
  }
  if (e_inf_sq) r.horizon_simple = static_cast<double>(n) * *e_inf_sq / sigma_min2;
  return r;
}

template <class T>
IdentityCheck per_iteration_identity_check(std::span<const T> x_prev, std::span<const T> x_next,
                                           std::span<const T> x_star, const DenseMatrix<T>& a_tau,
                                           std::span<const T> e_tau, std::optional<double> alpha,
                                           double tol) {
  const std::size_t d = a_tau.cols();
  const std::size_t k = a_tau.rows();
  require_dims(x_prev.size(), d, "x_prev");
  require_dims(x_next.size(), d, "x_next");
  require_dims(x_star.size(), d, "x_star");
  require_dims(e_tau.size(), k, "e_tau");
  Cholesky<T> chol;
  require(chol.factor(gram_block(a_tau)), ErrorCode::Numeric,
          "identity check needs a full-row-rank block");
  auto pinv = [&](std::span<const T> r) {
    Vec<T> u(r.begin(), r.end());
    chol.solve(u);
    Vec<T> out(d);
    a_tau.apply_adjoint(u, out);
    return out;
  };
  const Vec<T> dev = subtract(x_prev, x_star);
  Vec<T> adev(k);
  a_tau.apply(dev, adev);
  const Vec<T> proj = subtract(dev, pinv(adev));

  IdentityCheck c;
  c.projected_sq = norm_sq(proj);
  c.pinv_residual_sq = norm_sq(pinv(e_tau));
  c.lhs = norm_sq(subtract(x_next, x_star));
  const double rhs = c.projected_sq + c.pinv_residual_sq;
  c.rel_error = std::abs(c.lhs - rhs) / std::max({c.lhs, rhs, 1e-300});
  const double a = alpha ? *alpha : gram_eig_bounds(a_tau).lambda_min;
  c.lemma_rhs = a > 0.0 ? c.projected_sq + norm_sq(e_tau) / a : std::numeric_limits<double>::infinity();
  c.identity_holds = c.rel_error <= tol;
  c.lemma_holds = c.lhs <= c.lemma_rhs * (1.0 + tol);
  return c;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
  os << "iter,epoch,flops_model,flops_counted,wall_ns,resid_norm,err_norm,regularized_steps,"
        "cg_unconverged_steps\n";
  for (const auto& r : trace) {
    os << r.iter << ',' << format_double(r.epoch) << ',' << r.flops_model << ',' << r.flops_counted
       << ',' << r.wall_ns << ',' << format_double(r.resid_norm) << ','
       << (r.err_norm ? format_double(*r.err_norm) : std::string()) << ',' << r.regularized_steps
       << ',' << r.cg_unconverged_steps << '\n';
  }
}

void write_trace_csv_file(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::Io, "cannot open " + path + " for writing");
  write_trace_csv(os, trace);
  require(static_cast<bool>(os), ErrorCode::Io, "write failed for " + path);
}

#define BKZ_INSTANTIATE(T)                                                                          \
  template struct LeastSquaresProblem<T>;                                                           \
  template class BlockKaczmarz<T>;                                                                  \
  template void simple_kaczmarz_step(std::span<T>, std::span<const T>, T, FlopCounter*, double);    \
  template BlockStepInfo block_kaczmarz_step(std::span<T>, const LinearOperator<T>&,                \
                                             std::span<const T>, const InnerSolver&,                \
                                             BlockInnerState<T>*, FlopCounter*);                    \
  template SolveReport<T> run_block_solver(const LeastSquaresProblem<T>&, const SolverConfig<T>&);  \
  template SolveReport<T> run_simple_solver(const LeastSquaresProblem<T>&, const SolverConfig<T>&); \
  template IdentityCheck per_iteration_identity_check(                                              \
      std::span<const T>, std::span<const T>, std::span<const T>, const DenseMatrix<T>&,            \
      std::span<const T>, std::optional<double>, double);

BKZ_INSTANTIATE(double)
BKZ_INSTANTIATE(cplx)

}  // namespace bkz
