#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eigen.hpp"
#include "linear_operator.hpp"
#include "paving.hpp"
#include "rng.hpp"

namespace bkz {

/// minimize ||A x - b||^2, with an optional known minimizer for diagnostics.
template <class T>
struct LeastSquaresProblem {
  std::shared_ptr<const LinearOperator<T>> a;
  Vec<T> b;
  std::optional<Vec<T>> x_star;
  /// e = A x_star - b
  std::optional<Vec<T>> residual;

  /// Problem with b = A x_star - e. An empty `e` means a consistent system.
  static LeastSquaresProblem with_solution(std::shared_ptr<const LinearOperator<T>> a,
                                           Vec<T> x_star, Vec<T> e = {});

  /// Checks dimensions and fills `residual` from `x_star` when absent.
  void validate();
  /// ||e||^2 when the residual is known.
  std::optional<double> residual_norm_sq() const;
};

enum class ControlKind { UniformWithReplacement, CyclicWithoutReplacement };

struct ControlScheme {
  ControlKind kind = ControlKind::UniformWithReplacement;
  std::uint64_t seed = 0;
};

/// Block (or row) index sequence for a control scheme.
class BlockSelector {
 public:
  BlockSelector(ControlScheme scheme, std::size_t m);
  std::size_t next();
  std::size_t size() const { return m_; }

 private:
  ControlScheme scheme_;
  std::size_t m_;
  Rng rng_;
  std::vector<std::size_t> perm_;
  std::size_t pos_ = 0;
};

enum class InnerKind { Auto, DirectGram, IterativeCG };

struct InnerSolver {
  InnerKind kind = InnerKind::Auto;
  double cg_tol = 1e-6;
  /// 0 selects 2 |tau|.
  std::size_t cg_max_iters = 0;
  bool warm_start = false;
};

/// Blocks up to this size use the direct solve under InnerKind::Auto.
inline constexpr std::size_t kAutoDirectMaxRows = 64;
/// Pavings with beta/alpha above this use the direct solve under Auto.
inline constexpr double kAutoDirectCondition = 100.0;

/// Inner-solver state of one block, reused across visits.
template <class T>
struct BlockInnerState {
  bool factored = false;
  bool regularized = false;
  Cholesky<T> chol;
  Vec<T> warm;  // last Gram-system solution
};

struct BlockStepInfo {
  bool regularized = false;
  bool cg_converged = true;
  std::size_t cg_iters = 0;
};

/// x += ((b_t - a_t x) / ||a_t||^2) conj(a_t). Pass `row_norm_sq` to reuse a
/// precomputed ||a_t||^2.
template <class T>
void simple_kaczmarz_step(std::span<T> x, std::span<const T> a_t, T b_t, FlopCounter* fc = nullptr,
                          double row_norm_sq = -1.0);

/// x += A_tau^dagger (b_tau - A_tau x). `inner.kind` must not be Auto here
/// unless the caller accepts the size-only rule (direct up to 64 rows).
/// Orthonormal-row blocks skip the Gram solve since their pseudoinverse is
/// the adjoint.
template <class T>
BlockStepInfo block_kaczmarz_step(std::span<T> x, const LinearOperator<T>& a_tau,
                                  std::span<const T> b_tau, const InnerSolver& inner,
                                  BlockInnerState<T>* state = nullptr, FlopCounter* fc = nullptr);

template <class T>
struct ProgressView {
  std::size_t iter;
  double epoch;
  std::uint64_t flops_model;
  std::uint64_t flops_counted;
  std::uint64_t wall_ns;
  std::span<const T> x;
};

template <class T>
struct SolverConfig {
  double tolerance = 1e-8;
  /// 0 selects m for the block method and n for the simple method.
  std::size_t check_every = 0;
  std::size_t max_epochs = 1000;
  RowPaving paving;
  ControlScheme control;
  InnerSolver inner;
  std::optional<Vec<T>> x0;
  /// When set, called at iteration 0 and every `observe_every` iterations;
  /// returning false stops the run.
  std::function<bool(const ProgressView<T>&)> observer;
  std::size_t observe_every = 0;
};

struct TraceRow {
  std::size_t iter = 0;
  double epoch = 0.0;
  std::uint64_t flops_model = 0;
  std::uint64_t flops_counted = 0;
  std::uint64_t wall_ns = 0;
  double resid_norm = 0.0;
  std::optional<double> err_norm;
  std::size_t regularized_steps = 0;
  std::size_t cg_unconverged_steps = 0;
};

template <class T>
struct SolveReport {
  Vec<T> x_hat;
  bool converged = false;
  bool stopped_by_observer = false;
  std::size_t iterations = 0;
  double epochs = 0.0;
  std::uint64_t flops_model = 0;
  std::uint64_t flops_counted = 0;
  std::vector<TraceRow> trace;
  std::vector<std::string> warnings;
  std::optional<double> tolerance_floor;
};

/// Steps through a paving with lazily built block operators and inner state.
template <class T>
class BlockKaczmarz {
 public:
  BlockKaczmarz(std::shared_ptr<const LinearOperator<T>> a, const RowPaving& paving,
                std::span<const T> b, InnerSolver inner);

  BlockStepInfo step(std::size_t block, std::span<T> x, FlopCounter* fc = nullptr);
  /// Model cost of one step on `block`, when the block has a cost model.
  std::optional<std::uint64_t> model_flops(std::size_t block);
  InnerKind resolved_kind(std::size_t block) const;
  std::size_t blocks() const { return paving_.size(); }

 private:
  struct Slot {
    std::unique_ptr<LinearOperator<T>> op;
    Vec<T> b;
    BlockInnerState<T> state;
  };
  Slot& slot(std::size_t block);

  std::shared_ptr<const LinearOperator<T>> a_;
  RowPaving paving_;
  Vec<T> b_;
  InnerSolver inner_;
  std::optional<double> condition_;
  std::vector<std::unique_ptr<Slot>> slots_;
};

/// Block Kaczmarz iteration with periodic residual checks.
template <class T>
SolveReport<T> run_block_solver(const LeastSquaresProblem<T>& problem, const SolverConfig<T>& config);
/// Simple Kaczmarz iteration; config.paving is ignored.
template <class T>
SolveReport<T> run_simple_solver(const LeastSquaresProblem<T>& problem, const SolverConfig<T>& config);

struct BoundValue {
  double value = 0.0;
  /// 1 - sigma_min^2 / (beta m), clamped to [0, 1].
  double contraction = 0.0;
  /// (beta/alpha) ||e||^2 / sigma_min^2
  double horizon = 0.0;
  /// true when the bracket reached 1 (no decay guaranteed).
  bool vacuous = false;
};

/// [1 - s/(beta m)]^j err0sq + (beta/alpha) err_res_sq / s with s = sigma_min^2.
BoundValue theoretical_bound(std::size_t j, double sigma_min2, const PavingBounds& bounds,
                             double err0sq, double err_res_sq);

/// (1 + beta/alpha) ||e||^2; +inf when alpha = 0 and e != 0.
double tolerance_floor(const PavingBounds& bounds, double e_norm_sq);

struct RateComparison {
  double sigma_min2 = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double contraction = 0.0;
  double block_rate = 0.0;
  double simple_rate = 0.0;
  /// n / (beta m): iteration factor the simple method needs over the block one.
  double speedup = 0.0;
  std::optional<double> horizon_block;
  std::optional<double> horizon_simple;
};

/// Rates and horizons of both methods. The simple horizon uses the earlier
/// estimate n ||e||_inf^2 / sigma_min^2 verbatim.
RateComparison compare_rates(std::size_t n, double sigma_min2, const PavingBounds& bounds,
                             std::optional<double> e_norm_sq, std::optional<double> e_inf_sq);

struct IdentityCheck {
  double lhs = 0.0;             // ||x_next - x_star||^2
  double projected_sq = 0.0;    // ||(I - A^dagger A)(x_prev - x_star)||^2
  double pinv_residual_sq = 0.0;  // ||A^dagger e_tau||^2
  double rel_error = 0.0;
  double lemma_rhs = 0.0;       // projected_sq + ||e_tau||^2 / alpha
  bool identity_holds = false;
  bool lemma_holds = false;
};

/// Verifies the per-step Pythagorean decomposition with dense Gram solves.
/// `alpha` defaults to lambda_min(A_tau A_tau*).
template <class T>
IdentityCheck per_iteration_identity_check(std::span<const T> x_prev, std::span<const T> x_next,
                                           std::span<const T> x_star, const DenseMatrix<T>& a_tau,
                                           std::span<const T> e_tau,
                                           std::optional<double> alpha = std::nullopt,
                                           double tol = 1e-9);

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace);
void write_trace_csv_file(const std::string& path, const std::vector<TraceRow>& trace);

}  // namespace bkz
