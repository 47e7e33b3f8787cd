#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "flops.hpp"
#include "format.hpp"
#include "spectral.hpp"

namespace bkz {

CirculantEnsemble gen_block_circulant(const EnsembleSpec& spec, Rng& rng) {
  require(spec.block_count >= 1 && spec.rows_per_block >= 1, ErrorCode::InvalidArgument,
          "circulant ensemble needs at least one block of at least one row");
  require(spec.d >= spec.rows_per_block, ErrorCode::InvalidArgument,
          "circulant ensemble needs d >= rows per block");
  std::vector<std::vector<double>> signs(spec.block_count, std::vector<double>(spec.d));
  for (auto& s : signs)
    for (auto& v : s) v = rng.rademacher();
  auto a = std::make_shared<const PartialCirculantStack>(spec.rows_per_block, std::move(signs));
  return {a, contiguous_paving(a->rows(), spec.block_count)};
}

DenseMatrix<double> gen_sphere_rows(const EnsembleSpec& spec, Rng& rng) {
  DenseMatrix<double> a(spec.n, spec.d);
  for (std::size_t i = 0; i < spec.n; ++i) {
    auto row = a.row(i);
    double nrm = 0.0;
    do {
      for (auto& v : row) v = rng.normal();
      nrm = norm2(row);
    } while (nrm == 0.0);
    for (auto& v : row) v /= nrm;
  }
  return a;
}

DenseMatrix<double> gen_coherent_raw(const EnsembleSpec& spec, Rng& rng) {
  DenseMatrix<double> a(spec.n, spec.d);
  for (std::size_t i = 0; i < spec.n; ++i)
    for (auto& v : a.row(i)) v = rng.uniform(0.5, 1.0);
  return a;
}

DenseMatrix<double> gen_coherent(const EnsembleSpec& spec, Rng& rng) {
  return normalize_rows(gen_coherent_raw(spec, rng));
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Simple: return "simple";
    case Algorithm::BlockUniform: return "block-uniform";
    case Algorithm::BlockCyclic: return "block-cyclic";
  }
  return "?";
}

std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::BlockCirculant: return "circulant";
    case EnsembleKind::SphereRows: return "sphere";
    case EnsembleKind::Coherent: return "coherent";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "simple") return Algorithm::Simple;
  if (s == "block-uniform" || s == "block" || s == "block-with-replacement") return Algorithm::BlockUniform;
  if (s == "block-cyclic" || s == "block-without-replacement") return Algorithm::BlockCyclic;
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + s + "'");
}

EnsembleKind parse_ensemble(const std::string& s) {
  if (s == "circulant" || s == "block-circulant") return EnsembleKind::BlockCirculant;
  if (s == "sphere" || s == "sphere-rows") return EnsembleKind::SphereRows;
  if (s == "coherent") return EnsembleKind::Coherent;
  throw Error(ErrorCode::InvalidArgument, "unknown ensemble '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t to_count(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    require(!v.empty() && v[0] != '-', ErrorCode::Parse, "");
    x = std::stoull(v, &pos);
  } catch (...) {
    pos = 0;
  }
  require(pos == v.size() && !v.empty(), ErrorCode::Parse,
          "config key '" + key + "' expects a nonnegative integer, got '" + v + "'");
  return static_cast<std::size_t>(x);
}

double to_real(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (...) {
    pos = 0;
  }
  require(pos == v.size() && !v.empty(), ErrorCode::Parse,
          "config key '" + key + "' expects a number, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::Parse, "config key '" + key + "' expects true or false, got '" + v + "'");
}

std::string inner_name(InnerKind k) {
  switch (k) {
    case InnerKind::Auto: return "auto";
    case InnerKind::DirectGram: return "direct";
    case InnerKind::IterativeCG: return "cg";
  }
  return "?";
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "ensemble") {
    ensemble.kind = parse_ensemble(v);
  } else if (key == "n") {
    ensemble.n = to_count(key, v);
  } else if (key == "d") {
    ensemble.d = to_count(key, v);
  } else if (key == "blocks") {
    blocks = to_count(key, v);
  } else if (key == "trials") {
    trials = to_count(key, v);
  } else if (key == "seed") {
    seed = to_count(key, v);
  } else if (key == "algorithms") {
    algorithms.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) algorithms.push_back(parse_algorithm(trim(item)));
  } else if (key == "tol") {
    tol = to_real(key, v);
  } else if (key == "max_epochs") {
    max_epochs = to_count(key, v);
  } else if (key == "inner") {
    if (v == "auto")
      inner.kind = InnerKind::Auto;
    else if (v == "direct")
      inner.kind = InnerKind::DirectGram;
    else if (v == "cg")
      inner.kind = InnerKind::IterativeCG;
    else
      throw Error(ErrorCode::Parse, "inner must be auto, direct or cg, got '" + v + "'");
  } else if (key == "cg_tol") {
    inner.cg_tol = to_real(key, v);
  } else if (key == "cg_max_iters") {
    inner.cg_max_iters = to_count(key, v);
  } else if (key == "warm_start") {
    inner.warm_start = to_bool(key, v);
  } else if (key == "xstar") {
    if (v == "ones")
      xstar = XStarKind::Ones;
    else if (v == "gaussian")
      xstar = XStarKind::Gaussian;
    else
      throw Error(ErrorCode::Parse, "xstar must be ones or gaussian, got '" + v + "'");
  } else if (key == "paving") {
    if (v == "natural")
      paving = PavingKind::Natural;
    else if (v == "contiguous")
      paving = PavingKind::Contiguous;
    else if (v == "random")
      paving = PavingKind::Random;
    else
      throw Error(ErrorCode::Parse, "paving must be natural, contiguous or random, got '" + v + "'");
  } else if (key == "checkpoints") {
    checkpoints = to_count(key, v);
  } else if (key == "flop_budget") {
    if (v == "none")
      flop_budget.reset();
    else
      flop_budget = to_real(key, v);
  } else if (key == "flop_axis") {
    if (v == "model")
      axis = FlopAxis::Model;
    else if (v == "counted")
      axis = FlopAxis::Counted;
    else
      throw Error(ErrorCode::Parse, "flop_axis must be model or counted, got '" + v + "'");
  } else if (key == "threads") {
    threads = to_count(key, v);
  } else if (key == "samples_per_epoch") {
    samples_per_epoch = to_count(key, v);
  } else {
    throw Error(ErrorCode::Parse, "unknown experiment config key '" + key + "'");
  }
}

void ExperimentConfig::load(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::Parse,
            "config line " + std::to_string(lineno) + " is not 'key = value'");
    set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void ExperimentConfig::load_file(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::Io, "cannot open " + path);
  load(is);
}

std::map<std::string, std::string> ExperimentConfig::to_map() const {
  std::map<std::string, std::string> m;
  m["ensemble"] = to_string(ensemble.kind);
  m["n"] = std::to_string(ensemble.n);
  m["d"] = std::to_string(ensemble.d);
  m["blocks"] = std::to_string(blocks);
  m["trials"] = std::to_string(trials);
  m["seed"] = std::to_string(seed);
  std::string algs;
  for (auto a : algorithms) algs += (algs.empty() ? "" : ",") + to_string(a);
  m["algorithms"] = algs;
  m["tol"] = format_double(tol);
  m["max_epochs"] = std::to_string(max_epochs);
  m["inner"] = inner_name(inner.kind);
  m["cg_tol"] = format_double(inner.cg_tol);
  m["cg_max_iters"] = std::to_string(inner.cg_max_iters);
  m["warm_start"] = inner.warm_start ? "true" : "false";
  m["xstar"] = xstar == XStarKind::Ones ? "ones" : "gaussian";
  m["paving"] = paving == PavingKind::Natural ? "natural"
                : paving == PavingKind::Contiguous ? "contiguous"
                                                    : "random";
  m["checkpoints"] = std::to_string(checkpoints);
  m["flop_budget"] = flop_budget ? format_double(*flop_budget) : "none";
  m["flop_axis"] = axis == FlopAxis::Model ? "model" : "counted";
  m["threads"] = std::to_string(threads);
  m["samples_per_epoch"] = std::to_string(samples_per_epoch);
  return m;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "circulant") {
    c.ensemble = {EnsembleKind::BlockCirculant, 300, 100, 15, 20};
    c.blocks = 15;
    c.paving = PavingKind::Natural;
    c.algorithms = {Algorithm::Simple, Algorithm::BlockUniform, Algorithm::BlockCyclic};
    c.tol = 1e-11;
    c.max_epochs = 400;
    c.axis = FlopAxis::Model;
    c.xstar = XStarKind::Ones;
  } else if (name == "sphere") {
    c.ensemble = {EnsembleKind::SphereRows, 300, 100, 10, 30};
    c.blocks = 10;
    c.paving = PavingKind::Contiguous;
    c.algorithms = {Algorithm::Simple, Algorithm::BlockUniform};
    c.tol = 1e-11;
    c.max_epochs = 400;
    c.inner.kind = InnerKind::IterativeCG;
    c.inner.cg_max_iters = 4;
    c.inner.warm_start = false;
    c.axis = FlopAxis::Counted;
    c.xstar = XStarKind::Ones;
  } else if (name == "coherent") {
    c.ensemble = {EnsembleKind::Coherent, 300, 100, 10, 30};
    c.blocks = 10;
    c.paving = PavingKind::Contiguous;
    c.algorithms = {Algorithm::Simple, Algorithm::BlockUniform};
    c.tol = 1e-6;
    c.max_epochs = 2000;
    c.inner.kind = InnerKind::DirectGram;
    c.axis = FlopAxis::Counted;
    c.flop_budget = 1e7;
    c.xstar = XStarKind::Ones;
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "unknown experiment '" + name + "' (expected circulant, sphere or coherent)");
  }
  return c;
}

namespace {

double axis_value(const Sample& s, FlopAxis axis) {
  return static_cast<double>(axis == FlopAxis::Model ? s.flops_model : s.flops_counted);
}

double log_interp(double e0, double e1, double t) {
  if (e0 > 0.0 && e1 > 0.0) return std::exp(std::log(e0) + t * (std::log(e1) - std::log(e0)));
  return e0 + t * (e1 - e0);
}

// Samples bracketing `flops` and the fractional position between them.
struct Bracket {
  std::size_t lo = 0, hi = 0;
  double t = 0.0;
};

Bracket bracket(const std::vector<Sample>& s, double flops, FlopAxis axis) {
  if (s.empty()) return {};
  if (flops <= axis_value(s.front(), axis)) return {0, 0, 0.0};
  if (flops >= axis_value(s.back(), axis)) return {s.size() - 1, s.size() - 1, 0.0};
  auto it = std::upper_bound(s.begin(), s.end(), flops,
                             [&](double f, const Sample& x) { return f < axis_value(x, axis); });
  const std::size_t hi = static_cast<std::size_t>(it - s.begin());
  const std::size_t lo = hi - 1;
  const double f0 = axis_value(s[lo], axis), f1 = axis_value(s[hi], axis);
  return {lo, hi, f1 > f0 ? (flops - f0) / (f1 - f0) : 0.0};
}

template <class T>
struct Instance {
  std::shared_ptr<const LinearOperator<T>> a;
  std::shared_ptr<const LinearOperator<T>> dense_a;  // stored rows for the simple method
  RowPaving paving;
  Vec<T> x_star;
  Vec<T> b;
};

template <class T>
TrialResult run_trial(const Instance<T>& inst, const ExperimentConfig& cfg, Algorithm alg,
                      std::uint64_t control_seed) {
  const bool simple = alg == Algorithm::Simple;
  const std::size_t epoch_len = simple ? inst.a->rows() : inst.paving.size();
  LeastSquaresProblem<T> p;
  p.a = simple ? inst.dense_a : inst.a;
  p.b = inst.b;
  p.x_star = inst.x_star;
  p.residual = Vec<T>(inst.b.size(), T{});

  SolverConfig<T> sc;
  sc.tolerance = std::numeric_limits<double>::min();
  sc.max_epochs = cfg.max_epochs;
  sc.check_every = cfg.max_epochs * epoch_len;
  sc.paving = inst.paving;
  sc.control = {alg == Algorithm::BlockCyclic ? ControlKind::CyclicWithoutReplacement
                                              : ControlKind::UniformWithReplacement,
                control_seed};
  sc.inner = cfg.inner;
  sc.observe_every = std::max<std::size_t>(1, epoch_len / std::max<std::size_t>(1, cfg.samples_per_epoch));

  TrialResult tr;
  Vec<T> ax(inst.a->rows());
  sc.observer = [&](const ProgressView<T>& v) {
    Sample s{v.iter, v.epoch, v.flops_model, v.flops_counted, v.wall_ns, 0.0, 0.0};
    s.err_norm = distance(v.x, inst.x_star);
    p.a->apply(v.x, ax, nullptr);
    s.resid_norm = distance(ax, inst.b);
    if (!tr.samples.empty() && s.err_norm <= cfg.tol && !tr.reached) {
      const Sample& prev = tr.samples.back();
      const double t = prev.err_norm > cfg.tol && s.err_norm > 0.0
                           ? (std::log(cfg.tol) - std::log(prev.err_norm)) /
                                 (std::log(s.err_norm) - std::log(prev.err_norm))
                           : 1.0;
      auto lerp = [&](double a0, double a1) { return a0 + t * (a1 - a0); };
      tr.flops_model_to_target = lerp(static_cast<double>(prev.flops_model), static_cast<double>(s.flops_model));
      tr.flops_counted_to_target =
          lerp(static_cast<double>(prev.flops_counted), static_cast<double>(s.flops_counted));
      tr.epochs_to_target = lerp(prev.epoch, s.epoch);
    }
    if (tr.samples.empty() && s.err_norm <= cfg.tol) {
      tr.flops_model_to_target = 0.0;
      tr.flops_counted_to_target = 0.0;
      tr.epochs_to_target = 0.0;
    }
    if (s.err_norm <= cfg.tol) tr.reached = true;
    tr.samples.push_back(s);
    if (tr.reached) return false;
    if (cfg.flop_budget && axis_value(s, cfg.axis) >= *cfg.flop_budget) return false;
    return true;
  };
  auto rep = simple ? run_simple_solver(p, sc) : run_block_solver(p, sc);
  (void)rep;
  tr.initial_error = tr.samples.front().err_norm;
  tr.final_error = tr.samples.back().err_norm;
  return tr;
}

template <class T>
Vec<T> make_xstar(std::size_t d, XStarKind kind, Rng& rng) {
  Vec<T> x(d, T{1.0});
  if (kind == XStarKind::Gaussian)
    for (auto& v : x) v = T{rng.normal()};
  return x;
}

template <class T>
void run_all(const Instance<T>& inst, const ExperimentConfig& cfg, ExperimentResult& out) {
  for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
    AlgorithmAggregate agg;
    agg.algorithm = cfg.algorithms[ai];
    agg.trials.resize(cfg.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t t = next++; t < cfg.trials; t = next++) {
        const std::uint64_t seed = Rng(cfg.seed, 1000 + t).split(ai).next_u64();
        agg.trials[t] = run_trial(inst, cfg, agg.algorithm, seed);
      }
    };
    const std::size_t nthreads = std::clamp<std::size_t>(cfg.threads, 1, std::max<std::size_t>(1, cfg.trials));
    if (nthreads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    out.algorithms.push_back(std::move(agg));
  }
}

void aggregate(ExperimentResult& res) {
  const auto& cfg = res.config;
  double grid_max = 0.0;
  for (const auto& a : res.algorithms)
    for (const auto& t : a.trials)
      if (!t.samples.empty()) grid_max = std::max(grid_max, axis_value(t.samples.back(), cfg.axis));
  const std::size_t k_points = std::max<std::size_t>(cfg.checkpoints, 2);
  for (auto& a : res.algorithms) {
    std::vector<double> fm, fc, ep;
    for (const auto& t : a.trials) {
      if (!t.reached) continue;
      ++a.reached;
      fm.push_back(*t.flops_model_to_target);
      fc.push_back(*t.flops_counted_to_target);
      ep.push_back(*t.epochs_to_target);
    }
    if (!fm.empty()) {
      a.flops_model_to_target = stat3(fm);
      a.flops_counted_to_target = stat3(fc);
      a.epochs_to_target = stat3(ep);
    }
    if (a.trials.empty()) continue;
    for (std::size_t k = 0; k < k_points; ++k) {
      const double g = grid_max * static_cast<double>(k) / static_cast<double>(k_points - 1);
      std::vector<double> it, epo, fmod, fcnt, wall, err, resid;
      for (const auto& t : a.trials) {
        const auto br = bracket(t.samples, g, cfg.axis);
        const Sample& s0 = t.samples[br.lo];
        const Sample& s1 = t.samples[br.hi];
        auto lin = [&](double x0, double x1) { return x0 + br.t * (x1 - x0); };
        it.push_back(lin(static_cast<double>(s0.iter), static_cast<double>(s1.iter)));
        epo.push_back(lin(s0.epoch, s1.epoch));
        fmod.push_back(lin(static_cast<double>(s0.flops_model), static_cast<double>(s1.flops_model)));
        fcnt.push_back(lin(static_cast<double>(s0.flops_counted), static_cast<double>(s1.flops_counted)));
        wall.push_back(lin(static_cast<double>(s0.wall_ns), static_cast<double>(s1.wall_ns)));
        err.push_back(log_interp(s0.err_norm, s1.err_norm, br.t));
        resid.push_back(log_interp(s0.resid_norm, s1.resid_norm, br.t));
      }
      CheckpointStats cs;
      cs.grid_flops = g;
      cs.iter = stat3(it);
      cs.epoch = stat3(epo);
      cs.flops_model = stat3(fmod);
      cs.flops_counted = stat3(fcnt);
      cs.wall_ns = stat3(wall);
      cs.err_norm = stat3(err);
      cs.resid_norm = stat3(resid);
      // The grid coordinate itself is common to every statistic.
      Stat3& axis_col = cfg.axis == FlopAxis::Model ? cs.flops_model : cs.flops_counted;
      axis_col = {g, g, g};
      a.checkpoints.push_back(cs);
    }
  }
}

}  // namespace

double error_at(const TrialResult& trial, double flops, FlopAxis axis) {
  require(!trial.samples.empty(), ErrorCode::InvalidArgument, "trial has no samples");
  const auto br = bracket(trial.samples, flops, axis);
  return log_interp(trial.samples[br.lo].err_norm, trial.samples[br.hi].err_norm, br.t);
}

Stat3 stat3(std::vector<double> v) {
  require(!v.empty(), ErrorCode::InvalidArgument, "statistics of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double med = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return {v.front(), med, v.back()};
}

const AlgorithmAggregate* ExperimentResult::find(Algorithm a) const {
  for (const auto& x : algorithms)
    if (x.algorithm == a) return &x;
  return nullptr;
}

ExperimentResult run_comparison(const ExperimentConfig& cfg) {
  require(cfg.trials >= 1, ErrorCode::InvalidArgument, "trials must be at least 1");
  require(cfg.tol > 0.0, ErrorCode::InvalidArgument, "tol must be positive");
  require(cfg.max_epochs >= 1, ErrorCode::InvalidArgument, "max_epochs must be at least 1");
  require(!cfg.algorithms.empty(), ErrorCode::InvalidArgument, "no algorithms selected");
  ExperimentResult res;
  res.config = cfg;
  Rng matrix_rng(cfg.seed, 0);
  Rng aux_rng(cfg.seed, 1);
  EnsembleSpec spec = cfg.ensemble;

  if (spec.kind == EnsembleKind::BlockCirculant) {
    require(cfg.blocks >= 1 && spec.n % cfg.blocks == 0, ErrorCode::InvalidArgument,
            "circulant ensemble needs n divisible by the block count");
    spec.block_count = cfg.blocks;
    spec.rows_per_block = spec.n / cfg.blocks;
    auto ens = gen_block_circulant(spec, matrix_rng);
    Instance<cplx> inst;
    inst.a = ens.a;
    inst.dense_a = std::make_shared<const DenseOperator<cplx>>(ens.a->materialize());
    inst.paving = cfg.paving == PavingKind::Random ? random_partition(spec.n, cfg.blocks, aux_rng)
                  : cfg.paving == PavingKind::Contiguous ? contiguous_paving(spec.n, cfg.blocks)
                                                         : ens.paving;
    inst.x_star = make_xstar<cplx>(spec.d, cfg.xstar, aux_rng);
    inst.b = matvec(*inst.a, std::span<const cplx>(inst.x_star));
    const auto s = sigma_extremes(*inst.dense_a);
    res.sigma_min2 = s.sigma_min_sq();
    res.sigma_max2 = s.sigma_max_sq();
    res.bounds = compute_paving_bounds(*inst.a, inst.paving);
    res.n = spec.n;
    res.d = spec.d;
    if (cfg.paving == PavingKind::Natural) res.step_model_block = flop_model(StepKind::CirculantBlock, spec.d);
    res.step_model_simple = flop_model(StepKind::Simple, spec.d);
    run_all(inst, cfg, res);
  } else {
    DenseMatrix<double> m = spec.kind == EnsembleKind::SphereRows ? gen_sphere_rows(spec, matrix_rng)
                                                                  : gen_coherent(spec, matrix_rng);
    Instance<double> inst;
    inst.a = std::make_shared<const DenseOperator<double>>(std::move(m));
    inst.dense_a = inst.a;
    inst.paving = cfg.paving == PavingKind::Random ? random_partition(spec.n, cfg.blocks, aux_rng)
                                                   : contiguous_paving(spec.n, cfg.blocks);
    inst.x_star = make_xstar<double>(spec.d, cfg.xstar, aux_rng);
    inst.b = matvec(*inst.a, std::span<const double>(inst.x_star));
    const auto s = sigma_extremes(*inst.a);
    res.sigma_min2 = s.sigma_min_sq();
    res.sigma_max2 = s.sigma_max_sq();
    res.bounds = compute_paving_bounds(*inst.a, inst.paving);
    res.n = spec.n;
    res.d = spec.d;
    res.step_model_simple = flop_model(StepKind::Simple, spec.d);
    run_all(inst, cfg, res);
  }
  aggregate(res);
  return res;
}

void emit_csv(const ExperimentResult& result, std::ostream& os) {
  os << "algorithm,trial_stat,checkpoint,iter,epoch,flops_model,flops_counted,wall_ns,err_norm,"
        "resid_norm\n";
  for (const auto& a : result.algorithms) {
    const std::string name = to_string(a.algorithm);
    for (int which = 0; which < 3; ++which) {
      const char* stat = which == 0 ? "min" : which == 1 ? "median" : "max";
      auto pick = [&](const Stat3& s) { return which == 0 ? s.min : which == 1 ? s.median : s.max; };
      for (std::size_t k = 0; k < a.checkpoints.size(); ++k) {
        const auto& c = a.checkpoints[k];
        os << name << ',' << stat << ',' << k << ',' << format_double(pick(c.iter)) << ','
           << format_double(pick(c.epoch)) << ',' << format_double(pick(c.flops_model)) << ','
           << format_double(pick(c.flops_counted)) << ',' << format_double(pick(c.wall_ns)) << ','
           << format_double(pick(c.err_norm)) << ',' << format_double(pick(c.resid_norm)) << '\n';
      }
    }
  }
}

void emit_csv_file(const ExperimentResult& result, const std::string& path) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::Io, "cannot open " + path + " for writing");
  emit_csv(result, os);
  require(static_cast<bool>(os), ErrorCode::Io, "write failed for " + path);
}

std::string summary_json(const ExperimentResult& r) {
  using nlohmann::json;
  auto stat = [](const std::optional<Stat3>& s) -> json {
    if (!s) return nullptr;
    return json{{"min", s->min}, {"median", s->median}, {"max", s->max}};
  };
  json j;
  j["name"] = r.config.name;
  j["config"] = r.config.to_map();
  j["n"] = r.n;
  j["d"] = r.d;
  j["sigma_min2"] = r.sigma_min2;
  j["sigma_max2"] = r.sigma_max2;
  j["paving"] = {{"m", r.bounds.m},
                 {"alpha", r.bounds.alpha},
                 {"beta", r.bounds.beta},
                 {"conditionBound", r.bounds.alpha > 0 ? json(r.bounds.condition_bound()) : json(nullptr)}};
  j["step_model_flops"] = {{"simple", r.step_model_simple},
                           {"block", r.step_model_block ? json(*r.step_model_block) : json(nullptr)}};
  j["notes"] = json::array({"simple method convergence cadence: every n iterations",
                            "block method convergence cadence: every m iterations",
                            "trials stop when ||x_j - x_star|| <= tol or the flop budget is spent"});
  json algs = json::array();
  for (const auto& a : r.algorithms) {
    std::vector<double> finals;
    for (const auto& t : a.trials) finals.push_back(t.final_error);
    const Stat3 fe = stat3(finals);
    algs.push_back({{"algorithm", to_string(a.algorithm)},
                    {"trials", a.trials.size()},
                    {"reached", a.reached},
                    {"flops_model_to_target", stat(a.flops_model_to_target)},
                    {"flops_counted_to_target", stat(a.flops_counted_to_target)},
                    {"epochs_to_target", stat(a.epochs_to_target)},
                    {"final_error", {{"min", fe.min}, {"median", fe.median}, {"max", fe.max}}}});
  }
  j["algorithms"] = algs;
  return j.dump(2);
}

}  // namespace bkz
