#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "circulant.hpp"
#include "kaczmarz.hpp"
#include "paving.hpp"

namespace bkz {

enum class EnsembleKind { BlockCirculant, SphereRows, Coherent };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::SphereRows;
  std::size_t n = 300;
  std::size_t d = 100;
  std::size_t block_count = 15;
  std::size_t rows_per_block = 20;
};

struct CirculantEnsemble {
  std::shared_ptr<const PartialCirculantStack> a;
  RowPaving paving;  // the natural one-block-per-circulant paving
};

/// Stack of block_count partial circulants R F* E_i F with independent
/// Rademacher E_i; n is block_count * rows_per_block.
CirculantEnsemble gen_block_circulant(const EnsembleSpec& spec, Rng& rng);
/// Rows uniform on the unit sphere (normalized Gaussian vectors).
DenseMatrix<double> gen_sphere_rows(const EnsembleSpec& spec, Rng& rng);
/// Entries uniform on [0.5, 1] before row normalization.
DenseMatrix<double> gen_coherent_raw(const EnsembleSpec& spec, Rng& rng);
/// gen_coherent_raw with unit-norm rows.
DenseMatrix<double> gen_coherent(const EnsembleSpec& spec, Rng& rng);

enum class Algorithm { Simple, BlockUniform, BlockCyclic };
enum class XStarKind { Ones, Gaussian };
enum class FlopAxis { Model, Counted };
enum class PavingKind { Natural, Contiguous, Random };

std::string to_string(Algorithm a);
std::string to_string(EnsembleKind k);
Algorithm parse_algorithm(const std::string& s);
EnsembleKind parse_ensemble(const std::string& s);

struct ExperimentConfig {
  std::string name = "sphere";
  EnsembleSpec ensemble;
  /// Block count of the paving (for circulant, also the number of stacked blocks).
  std::size_t blocks = 10;
  PavingKind paving = PavingKind::Contiguous;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms{Algorithm::Simple, Algorithm::BlockUniform};
  /// Target for ||x_j - x_star||; a trial stops once it is reached.
  double tol = 1e-11;
  std::size_t max_epochs = 500;
  InnerSolver inner;
  XStarKind xstar = XStarKind::Ones;
  /// Number of points on the shared flop grid.
  std::size_t checkpoints = 200;
  /// Trials also stop once this many flops (on `axis`) are spent.
  std::optional<double> flop_budget;
  FlopAxis axis = FlopAxis::Counted;
  std::size_t threads = 1;
  /// Error samples per epoch.
  std::size_t samples_per_epoch = 10;

  /// Recognized keys: ensemble, n, d, blocks, trials, seed, algorithms, tol,
  /// max_epochs, inner, cg_tol, cg_max_iters, warm_start, xstar, paving,
  /// checkpoints, flop_budget, flop_axis, threads, samples_per_epoch.
  void set(const std::string& key, const std::string& value);
  /// Flat "key = value" lines; '#' starts a comment. Unknown keys throw.
  void load(std::istream& is);
  void load_file(const std::string& path);
  std::map<std::string, std::string> to_map() const;
};

/// Settings of the three published experiments: "circulant", "sphere",
/// "coherent".
ExperimentConfig preset(const std::string& name);

struct Sample {
  std::size_t iter = 0;
  double epoch = 0.0;
  std::uint64_t flops_model = 0;
  std::uint64_t flops_counted = 0;
  std::uint64_t wall_ns = 0;
  double err_norm = 0.0;
  double resid_norm = 0.0;
};

struct TrialResult {
  std::vector<Sample> samples;
  bool reached = false;
  /// Interpolated cost at which the error first reached tol.
  std::optional<double> flops_model_to_target;
  std::optional<double> flops_counted_to_target;
  std::optional<double> epochs_to_target;
  double initial_error = 0.0;
  double final_error = 0.0;
};

/// Error of a trial at `flops` on the given axis: log-linear interpolation
/// between samples, carried forward past the last sample.
double error_at(const TrialResult& trial, double flops, FlopAxis axis);

struct Stat3 {
  double min = 0.0, median = 0.0, max = 0.0;
};
Stat3 stat3(std::vector<double> v);

struct CheckpointStats {
  double grid_flops = 0.0;
  Stat3 iter, epoch, flops_model, flops_counted, wall_ns, err_norm, resid_norm;
};

struct AlgorithmAggregate {
  Algorithm algorithm = Algorithm::Simple;
  std::vector<TrialResult> trials;
  std::vector<CheckpointStats> checkpoints;
  std::size_t reached = 0;
  /// Over trials that reached the target.
  std::optional<Stat3> flops_model_to_target;
  std::optional<Stat3> flops_counted_to_target;
  std::optional<Stat3> epochs_to_target;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<AlgorithmAggregate> algorithms;
  /// Matrix-level facts recorded for the run.
  double sigma_min2 = 0.0;
  double sigma_max2 = 0.0;
  PavingBounds bounds;
  std::size_t n = 0, d = 0;
  std::uint64_t step_model_simple = 0;
  std::optional<std::uint64_t> step_model_block;

  const AlgorithmAggregate* find(Algorithm a) const;
};

ExperimentResult run_comparison(const ExperimentConfig& config);

/// Aggregate CSV: one row per (algorithm, stat, checkpoint).
void emit_csv(const ExperimentResult& result, std::ostream& os);
void emit_csv_file(const ExperimentResult& result, const std::string& path);
/// JSON summary: configuration, matrix facts and per-algorithm flops to target.
std::string summary_json(const ExperimentResult& result);

}  // namespace bkz
