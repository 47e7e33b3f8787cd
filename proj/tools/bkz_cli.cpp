// bkz: command-line front end over the C interface.
//
// Reports go to stdout as JSON, warnings to stderr. Exit status: 0 on
// success or convergence, 1 on usage or input errors, 2 when a solve ran
// but did not converge.

#include <CLI11.hpp>
#include <json.hpp>

#include <bkz.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bkz_status s, const std::string& what) {
  if (s != BKZ_OK) throw Failure(what + ": " + bkz_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Op = std::unique_ptr<bkz_operator, Deleter<bkz_operator, bkz_operator_free>>;
using Vector = std::unique_ptr<bkz_vector, Deleter<bkz_vector, bkz_vector_free>>;
using Paving = std::unique_ptr<bkz_paving, Deleter<bkz_paving, bkz_paving_free>>;
using Report = std::unique_ptr<bkz_report, Deleter<bkz_report, bkz_report_free>>;
using ExpConfig =
    std::unique_ptr<bkz_experiment_config, Deleter<bkz_experiment_config, bkz_experiment_config_free>>;
using ExpResult =
    std::unique_ptr<bkz_experiment_result, Deleter<bkz_experiment_result, bkz_experiment_free>>;

Op read_matrix(const std::string& path) {
  bkz_operator* p = nullptr;
  check(bkz_operator_read_mm(path.c_str(), &p), "reading " + path);
  return Op(p);
}

Vector read_vec(const std::string& path) {
  bkz_vector* p = nullptr;
  check(bkz_vector_read(path.c_str(), &p), "reading " + path);
  return Vector(p);
}

struct Seed {
  std::uint64_t value = 0;
  bool from_entropy = false;
};

Seed resolve_seed(const std::optional<std::uint64_t>& s) {
  if (s) return {*s, false};
  return {bkz_entropy_seed(), true};
}

void put_seed(json& j, const Seed& s) {
  j["seed"] = s.value;
  j["seedFromEntropy"] = s.from_entropy;
}

/// file path, "rows", "random:m" or "contiguous:m"
Paving make_paving(const std::string& spec, std::size_t n, std::uint64_t seed, std::string* source) {
  bkz_paving* p = nullptr;
  auto count = [&](const std::string& tail) -> std::size_t {
    std::size_t pos = 0;
    unsigned long long m = 0;
    try {
      m = std::stoull(tail, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != tail.size()) throw Failure("bad block count in --paving '" + spec + "'");
    return static_cast<std::size_t>(m);
  };
  if (spec == "rows") {
    check(bkz_paving_single_rows(n, &p), "single-row paving");
    *source = "rows";
  } else if (spec.rfind("random:", 0) == 0) {
    check(bkz_paving_random(n, count(spec.substr(7)), seed, &p), "random paving");
    *source = "random";
  } else if (spec.rfind("contiguous:", 0) == 0) {
    check(bkz_paving_contiguous(n, count(spec.substr(11)), &p), "contiguous paving");
    *source = "contiguous";
  } else {
    check(bkz_paving_read(spec.c_str(), &p), "reading paving " + spec);
    *source = "file";
    const std::size_t rows = bkz_paving_rows(p);
    if (rows != n) {
      bkz_paving_free(p);
      throw Failure("paving covers " + std::to_string(rows) + " rows but the matrix has " +
                    std::to_string(n));
    }
  }
  return Paving(p);
}

json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json bounds_json(const bkz_paving_bounds& b) {
  return json{{"m", b.m},
              {"alpha", b.alpha},
              {"beta", b.beta},
              {"conditionBound", num(b.condition_bound)},
              {"exact", b.exact != 0},
              {"rankDeficientBlocks", b.rank_deficient_blocks}};
}

struct SolveFlags {
  std::string control = "uniform";
  std::string inner = "auto";
  double tol = 1e-8;
  std::size_t max_epochs = 1000;
  std::size_t check_every = 0;
  double cg_tol = 1e-6;
  std::size_t cg_max_iters = 0;
  bool warm_start = false;
  std::string trace;
};

void add_solve_flags(CLI::App* c, SolveFlags& f) {
  c->add_option("--control", f.control, "Block selection: uniform or cycle")
      ->check(CLI::IsMember({"uniform", "cycle"}));
  c->add_option("--inner", f.inner, "Block solve: auto, direct or cg")
      ->check(CLI::IsMember({"auto", "direct", "cg"}));
  c->add_option("--tol", f.tol, "Stop when ||Ax - b|| <= tol")->check(CLI::PositiveNumber);
  c->add_option("--max-epochs", f.max_epochs, "Epoch limit")->check(CLI::PositiveNumber);
  c->add_option("--check-every", f.check_every, "Residual check cadence in iterations (0: one epoch)");
  c->add_option("--cg-tol", f.cg_tol, "Relative tolerance of inner CG")->check(CLI::PositiveNumber);
  c->add_option("--cg-max-iters", f.cg_max_iters, "Inner CG iteration cap (0: twice the block size)");
  c->add_flag("--warm-start", f.warm_start, "Warm-start inner CG from the previous visit");
  c->add_option("--trace", f.trace, "Trace CSV output path");
}

bkz_solver_config solver_config(const SolveFlags& f, std::uint64_t seed) {
  bkz_solver_config c;
  bkz_solver_config_init(&c);
  c.tolerance = f.tol;
  c.max_epochs = f.max_epochs;
  c.check_every = f.check_every;
  c.control = f.control == "cycle" ? BKZ_CONTROL_CYCLE : BKZ_CONTROL_UNIFORM;
  c.inner = f.inner == "direct" ? BKZ_INNER_DIRECT : f.inner == "cg" ? BKZ_INNER_CG : BKZ_INNER_AUTO;
  c.cg_tol = f.cg_tol;
  c.cg_max_iters = f.cg_max_iters;
  c.warm_start = f.warm_start ? 1 : 0;
  c.seed = seed;
  return c;
}

json report_json(const bkz_report* r) {
  json j;
  j["converged"] = bkz_report_converged(r) != 0;
  j["iterations"] = bkz_report_iterations(r);
  j["epochs"] = bkz_report_epochs(r);
  const std::size_t rows = bkz_report_trace_size(r);
  bkz_trace_row last{};
  if (rows > 0) check(bkz_report_trace_row(r, rows - 1, &last), "trace");
  j["residNorm"] = rows > 0 ? num(last.resid_norm) : json(nullptr);
  j["errNorm"] = rows > 0 ? num(last.err_norm) : json(nullptr);
  j["flops"] = {{"model", bkz_report_flops_model(r)}, {"counted", bkz_report_flops_counted(r)}};
  j["toleranceFloor"] = num(bkz_report_tolerance_floor(r));
  json w = json::array();
  for (std::size_t i = 0; i < bkz_report_warning_count(r); ++i) {
    const char* msg = bkz_report_warning(r, i);
    std::cerr << "warning: " << msg << '\n';
    w.push_back(msg);
  }
  j["warnings"] = w;
  return j;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<double> to_buffer(const bkz_vector* v) {
  const std::size_t n = bkz_vector_size(v);
  std::vector<double> out(2 * n);
  for (std::size_t i = 0; i < n; ++i) check(bkz_vector_get(v, i, &out[2 * i], &out[2 * i + 1]), "vector");
  return out;
}

/// ||A x - b|| with x, b interleaved complex; real operators use the real parts.
double objective(const bkz_operator* a, const std::vector<double>& x, const std::vector<double>& b) {
  const std::size_t n = bkz_operator_rows(a), d = bkz_operator_cols(a);
  double s = 0.0;
  if (bkz_operator_is_complex(a)) {
    std::vector<double> y(2 * n);
    check(bkz_operator_matvec(a, x.data(), y.data()), "matvec");
    for (std::size_t i = 0; i < n; ++i) s += std::norm(std::complex<double>(y[2 * i] - b[2 * i], y[2 * i + 1] - b[2 * i + 1]));
  } else {
    std::vector<double> xr(d), y(n);
    for (std::size_t k = 0; k < d; ++k) xr[k] = x[2 * k];
    check(bkz_operator_matvec(a, xr.data(), y.data()), "matvec");
    for (std::size_t i = 0; i < n; ++i) s += std::norm(std::complex<double>(y[i] - b[2 * i], -b[2 * i + 1]));
  }
  return std::sqrt(s);
}

json coherence_json(const bkz_coherence& c, std::size_t n) {
  return json{{"maxOffDiagonal", c.max_off_diagonal},
              {"maxDiagonalDeviation", c.max_diagonal_deviation},
              {"argmaxPair", {c.pair_i + 1, c.pair_j + 1}},
              {"pairsExamined", c.pairs_examined},
              {"sampled", c.sampled != 0},
              {"scaledByLog", c.max_off_diagonal * std::log1p(static_cast<double>(n))}};
}

// ---- subcommands ----

int cmd_solve(const std::string& matrix, const std::string& rhs, const std::string& paving_spec,
              const std::string& method, const std::optional<std::string>& xstar,
              const std::optional<std::string>& solution, const std::optional<std::uint64_t>& seed_opt,
              const SolveFlags& f) {
  const Seed seed = resolve_seed(seed_opt);
  Op a = read_matrix(matrix);
  Vector b = read_vec(rhs);
  Vector xs;
  if (xstar) xs = read_vec(*xstar);
  const auto cfg = solver_config(f, seed.value);

  json out;
  bkz_report* rp = nullptr;
  if (method == "simple") {
    check(bkz_solve_simple(a.get(), b.get(), &cfg, xs.get(), &rp), "solve");
    out["method"] = "simple";
  } else {
    std::string source;
    Paving p = make_paving(paving_spec, bkz_operator_rows(a.get()), seed.value, &source);
    check(bkz_solve_block(a.get(), b.get(), p.get(), &cfg, xs.get(), &rp), "solve");
    out["method"] = "block";
    out["paving"] = {{"source", source}, {"m", bkz_paving_count(p.get())}};
  }
  Report r(rp);
  out.update(report_json(r.get()));
  put_seed(out, seed);
  if (!f.trace.empty()) check(bkz_report_write_trace(r.get(), f.trace.c_str()), "writing trace");
  if (solution) {
    bkz_vector* x = nullptr;
    check(bkz_report_solution(r.get(), &x), "solution");
    Vector xv(x);
    check(bkz_vector_write(xv.get(), solution->c_str()), "writing solution");
  }
  emit(out);
  return bkz_report_converged(r.get()) ? 0 : 2;
}

int cmd_pave(const std::string& matrix, std::optional<std::size_t> blocks,
             const std::optional<std::string>& paving_file, const std::string& layout,
             const std::optional<std::string>& out_path, const std::optional<std::uint64_t>& seed_opt) {
  if (!blocks && !paving_file) throw Failure("pave needs --blocks or --paving");
  const Seed seed = resolve_seed(seed_opt);
  Op a = read_matrix(matrix);
  const std::size_t n = bkz_operator_rows(a.get());
  std::string source;
  Paving p = paving_file ? make_paving(*paving_file, n, seed.value, &source)
                         : make_paving(layout + ":" + std::to_string(*blocks), n, seed.value, &source);
  bkz_paving_bounds b{};
  check(bkz_compute_paving_bounds(a.get(), p.get(), &b), "paving bounds");
  if (out_path) check(bkz_paving_write(p.get(), out_path->c_str()), "writing paving");
  json out = bounds_json(b);
  out["n"] = n;
  out["source"] = source;
  put_seed(out, seed);
  if (b.rank_deficient_blocks > 0) std::cerr << "warning: " << b.rank_deficient_blocks << " rank-deficient block(s); alpha = 0\n";
  emit(out);
  return 0;
}

int cmd_coherence(const std::string& matrix, const std::optional<std::uint64_t>& seed_opt) {
  const Seed seed = resolve_seed(seed_opt);
  Op a = read_matrix(matrix);
  bkz_coherence c{};
  check(bkz_coherence_compute(a.get(), seed.value, &c), "coherence");
  json out = coherence_json(c, bkz_operator_rows(a.get()));
  out["rows"] = bkz_operator_rows(a.get());
  out["standardized"] = bkz_operator_standardized(a.get()) != 0;
  if (c.sampled) put_seed(out, seed);
  emit(out);
  return 0;
}

struct FitFlags {
  std::string matrix, rhs, out_prefix;
  std::string signs = "random";
  bool then_solve = false;
  double delta = 0.5;
  double crand = 1.0;
  double cfit = 1.0;
  std::optional<std::string> xstar;
  SolveFlags solve;
};

int cmd_fit(const FitFlags& f, const std::optional<std::uint64_t>& seed_opt) {
  const Seed seed = resolve_seed(seed_opt);
  Op a = read_matrix(f.matrix);
  Vector b = read_vec(f.rhs);
  const std::size_t n = bkz_operator_rows(a.get()), d = bkz_operator_cols(a.get());
  if (bkz_vector_size(b.get()) != n) throw Failure("rhs length does not match the matrix row count");

  bkz_operator* wp = nullptr;
  bkz_vector* btp = nullptr;
  bkz_vector* sp = nullptr;
  check(bkz_fit_transform(a.get(), b.get(), seed.value, f.signs == "plus", &wp, &btp, &sp), "fit");
  Op w(wp);
  Vector bt(btp), signs(sp);

  const std::string w_path = f.out_prefix + "W.mtx";
  const std::string b_path = f.out_prefix + "b.vec";
  const std::string s_path = f.out_prefix + "signs.vec";
  check(bkz_operator_write_mm(w.get(), w_path.c_str()), "writing " + w_path);
  check(bkz_vector_write(bt.get(), b_path.c_str()), "writing " + b_path);
  check(bkz_vector_write(signs.get(), s_path.c_str()), "writing " + s_path);

  json out;
  out["files"] = {{"matrix", w_path}, {"rhs", b_path}, {"signs", s_path}};
  out["signMode"] = f.signs;
  put_seed(out, seed);

  bkz_coherence before{}, after{};
  check(bkz_coherence_compute(a.get(), seed.value, &before), "coherence");
  check(bkz_coherence_compute(w.get(), seed.value, &after), "coherence");
  out["coherence"] = {{"before", coherence_json(before, n)}, {"after", coherence_json(after, n)}};

  std::mt19937_64 gen(seed.value ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  std::vector<double> x(2 * d, 0.0);
  const bool cplx_in = bkz_operator_is_complex(a.get()) != 0;
  for (std::size_t k = 0; k < d; ++k) {
    x[2 * k] = normal(gen);
    if (cplx_in) x[2 * k + 1] = normal(gen);
  }
  const double obj_a = objective(a.get(), x, to_buffer(b.get()));
  const double obj_w = objective(w.get(), x, to_buffer(bt.get()));
  const double diff = std::abs(obj_w - obj_a);
  out["objectiveProbe"] = {{"original", obj_a}, {"transformed", obj_w}, {"absDifference", diff},
                           {"preserved", diff <= 1e-10}};
  if (diff > 1e-10) std::cerr << "warning: objective probe differs by " << diff << '\n';

  if (bkz_operator_standardized(a.get())) {
    int holds = 0;
    double norm_sq = 0.0, threshold = 0.0;
    check(bkz_check_fit_hypothesis(a.get(), f.cfit, &holds, &norm_sq, &threshold), "hypothesis");
    out["normHypothesis"] = {{"normSq", norm_sq}, {"threshold", threshold}, {"cFit", f.cfit}, {"holds", holds != 0}};
    if (!holds)
      std::cerr << "warning: ||A||^2 = " << norm_sq << " exceeds " << threshold
                << "; the transform is not guaranteed to produce incoherent rows\n";
  } else {
    out["normHypothesis"] = nullptr;
    std::cerr << "warning: input rows are not unit norm; norm hypothesis not checked\n";
  }

  if (!f.then_solve) {
    emit(out);
    return 0;
  }

  bkz_spectral sp_est{};
  check(bkz_sigma_extremes(a.get(), &sp_est), "spectral estimate");
  const double norm_sq = sp_est.sigma_max * sp_est.sigma_max;
  std::size_t m = 0;
  int clamped = 0;
  check(bkz_random_paving_block_count(norm_sq, n, f.delta, f.crand, &m, &clamped), "block count");
  if (clamped) std::cerr << "warning: block count formula exceeds n; using single-row blocks\n";
  bkz_paving* pp = nullptr;
  check(bkz_paving_random(n, m, seed.value, &pp), "random paving");
  Paving p(pp);
  bkz_paving_bounds pb{};
  check(bkz_compute_paving_bounds(w.get(), p.get(), &pb), "paving bounds");

  Vector xs;
  if (f.xstar) xs = read_vec(*f.xstar);
  const auto cfg = solver_config(f.solve, seed.value);
  bkz_report* rp = nullptr;
  check(bkz_solve_block(w.get(), bt.get(), p.get(), &cfg, xs.get(), &rp), "solve");
  Report r(rp);
  if (!f.solve.trace.empty()) check(bkz_report_write_trace(r.get(), f.solve.trace.c_str()), "writing trace");
  bkz_vector* xp = nullptr;
  check(bkz_report_solution(r.get(), &xp), "solution");
  Vector xv(xp);
  const std::string x_path = f.out_prefix + "x.vec";
  check(bkz_vector_write(xv.get(), x_path.c_str()), "writing " + x_path);

  json pj = bounds_json(pb);
  pj["delta"] = f.delta;
  pj["cRand"] = f.crand;
  pj["normSq"] = norm_sq;
  pj["clamped"] = clamped != 0;
  out["paving"] = pj;
  out["solve"] = report_json(r.get());
  out["files"]["solution"] = x_path;
  emit(out);
  return bkz_report_converged(r.get()) ? 0 : 2;
}

int cmd_bound(const std::string& matrix, const std::string& paving_spec, std::optional<double> err0,
              std::optional<double> resid_norm, std::optional<double> resid_inf,
              std::vector<std::size_t> at, const std::optional<std::uint64_t>& seed_opt) {
  const Seed seed = resolve_seed(seed_opt);
  Op a = read_matrix(matrix);
  const std::size_t n = bkz_operator_rows(a.get());
  std::string source;
  Paving p = make_paving(paving_spec, n, seed.value, &source);
  bkz_paving_bounds b{};
  check(bkz_compute_paving_bounds(a.get(), p.get(), &b), "paving bounds");
  bkz_spectral s{};
  check(bkz_sigma_extremes(a.get(), &s), "spectral estimate");
  const double smin2 = s.sigma_min * s.sigma_min;
  const double e2 = resid_norm ? *resid_norm * *resid_norm : NAN;
  const double einf2 = resid_inf ? *resid_inf * *resid_inf : NAN;
  bkz_rate_comparison rc{};
  check(bkz_compare_rates(n, smin2, &b, e2, einf2, &rc), "rates");

  json out;
  out["n"] = n;
  out["sigmaMin2"] = smin2;
  out["sigmaMax2"] = s.sigma_max * s.sigma_max;
  out["paving"] = bounds_json(b);
  out["paving"]["source"] = source;
  out["contraction"] = rc.contraction;
  out["blockRate"] = rc.block_rate;
  out["simpleRate"] = rc.simple_rate;
  out["speedup"] = num(rc.speedup);
  if (resid_norm) {
    if (std::isnan(rc.horizon_block)) {
      out["horizon"] = nullptr;
      out["horizonNote"] = "unavailable: alpha = 0";
      std::cerr << "warning: alpha = 0, horizon unavailable\n";
    } else {
      out["horizon"] = num(rc.horizon_block);
    }
  } else {
    out["horizon"] = nullptr;
    out["horizonNote"] = "unavailable: pass --residual-norm";
  }
  out["horizonSimple"] = num(rc.horizon_simple);
  if (err0) {
    if (at.empty()) at = {b.m};
    json vals = json::array();
    for (std::size_t j : at) {
      bkz_bound_value v{};
      check(bkz_theoretical_bound(j, smin2, &b, *err0, resid_norm ? e2 : 0.0, &v), "bound");
      vals.push_back({{"j", j}, {"bound", num(v.value)}, {"vacuous", v.vacuous != 0}});
    }
    out["bound"] = vals;
  }
  if (source == "random") put_seed(out, seed);
  emit(out);
  return 0;
}

int cmd_experiment(const std::string& name, std::optional<std::size_t> trials,
                   const std::optional<std::uint64_t>& seed_opt, const std::string& out_path,
                   const std::optional<std::string>& config, const std::vector<std::string>& sets,
                   std::optional<std::size_t> threads, const std::optional<std::string>& summary) {
  const Seed seed = resolve_seed(seed_opt);
  bkz_experiment_config* cp = nullptr;
  check(bkz_experiment_config_preset(name.c_str(), &cp), "experiment");
  ExpConfig cfg(cp);
  if (config) check(bkz_experiment_config_load(cfg.get(), config->c_str()), "loading " + *config);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Failure("--set expects key=value, got '" + kv + "'");
    check(bkz_experiment_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "--set");
  }
  if (trials) check(bkz_experiment_config_set(cfg.get(), "trials", std::to_string(*trials).c_str()), "trials");
  if (threads) check(bkz_experiment_config_set(cfg.get(), "threads", std::to_string(*threads).c_str()), "threads");
  check(bkz_experiment_config_set(cfg.get(), "seed", std::to_string(seed.value).c_str()), "seed");

  bkz_experiment_result* rp = nullptr;
  check(bkz_experiment_run(cfg.get(), &rp), "experiment");
  ExpResult res(rp);
  check(bkz_experiment_write_csv(res.get(), out_path.c_str()), "writing " + out_path);
  json out = json::parse(bkz_experiment_summary_json(res.get()));
  out["csv"] = out_path;
  out["seedFromEntropy"] = seed.from_entropy;
  if (summary) {
    std::ofstream os(*summary);
    os << out.dump(2) << '\n';
    if (!os) throw Failure("writing " + *summary);
  }
  emit(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized block Kaczmarz least-squares solver"};
  app.set_version_flag("--version", std::string(bkz_version()));
  app.require_subcommand(1, 1);

  std::optional<std::uint64_t> seed;

  // solve
  auto* solve = app.add_subcommand("solve", "Solve min ||Ax - b|| from files");
  std::string s_matrix, s_rhs, s_paving = "rows", s_method = "block";
  std::optional<std::string> s_xstar, s_solution;
  SolveFlags s_flags;
  solve->add_option("--matrix", s_matrix, "Matrix Market file")->required();
  solve->add_option("--rhs", s_rhs, "Right-hand side vector file")->required();
  solve->add_option("--paving", s_paving, "Paving file, rows, random:m or contiguous:m");
  solve->add_option("--method", s_method, "block or simple")->check(CLI::IsMember({"block", "simple"}));
  solve->add_option("--xstar", s_xstar, "Known solution; adds error columns to the trace");
  solve->add_option("--solution", s_solution, "Write the final iterate to this file");
  solve->add_option("--seed", seed, "Random seed (default: entropy)");
  add_solve_flags(solve, s_flags);

  // pave
  auto* pave = app.add_subcommand("pave", "Build or certify a row paving");
  std::string p_matrix, p_layout = "random";
  std::optional<std::size_t> p_blocks;
  std::optional<std::string> p_paving, p_out;
  pave->add_option("--matrix", p_matrix, "Matrix Market file")->required();
  auto* p_blocks_opt = pave->add_option("--blocks", p_blocks, "Number of blocks");
  pave->add_option("--paving", p_paving, "Existing paving file to certify")->excludes(p_blocks_opt);
  pave->add_option("--layout", p_layout, "random or contiguous")
      ->check(CLI::IsMember({"random", "contiguous"}));
  pave->add_option("--out", p_out, "Paving output path");
  pave->add_option("--seed", seed, "Random seed (default: entropy)");

  // coherence
  auto* coh = app.add_subcommand("coherence", "Row coherence of a matrix");
  std::string c_matrix;
  coh->add_option("--matrix", c_matrix, "Matrix Market file")->required();
  coh->add_option("--seed", seed, "Seed for sampled coherence on large inputs");

  // fit
  auto* fit = app.add_subcommand("fit", "Apply the fast incoherence transform");
  FitFlags f_flags;
  fit->add_option("--matrix", f_flags.matrix, "Matrix Market file")->required();
  fit->add_option("--rhs", f_flags.rhs, "Right-hand side vector file")->required();
  fit->add_option("--out-prefix", f_flags.out_prefix, "Prefix of output files")->required();
  fit->add_option("--signs", f_flags.signs, "random or plus")->check(CLI::IsMember({"random", "plus"}));
  fit->add_flag("--then-solve", f_flags.then_solve, "Partition and solve the transformed problem");
  fit->add_option("--delta", f_flags.delta, "Paving accuracy for the block count")->check(CLI::Range(1e-6, 1.0));
  fit->add_option("--crand", f_flags.crand, "Constant of the block count formula")->check(CLI::PositiveNumber);
  fit->add_option("--cfit", f_flags.cfit, "Constant of the norm hypothesis")->check(CLI::PositiveNumber);
  fit->add_option("--xstar", f_flags.xstar, "Known solution for the trace");
  fit->add_option("--seed", seed, "Random seed (default: entropy)");
  add_solve_flags(fit, f_flags.solve);

  // bound
  auto* bound = app.add_subcommand("bound", "Convergence bound and rate comparison");
  std::string b_matrix, b_paving = "rows";
  std::optional<double> b_err0, b_resid, b_resid_inf;
  std::vector<std::size_t> b_at;
  bound->add_option("--matrix", b_matrix, "Matrix Market file")->required();
  bound->add_option("--paving", b_paving, "Paving file, rows, random:m or contiguous:m");
  bound->add_option("--err0", b_err0, "Initial squared error ||x0 - x*||^2")->check(CLI::NonNegativeNumber);
  bound->add_option("--residual-norm", b_resid, "||e|| of the least-squares residual")
      ->check(CLI::NonNegativeNumber);
  bound->add_option("--residual-inf", b_resid_inf, "max |e_i| for the simple-method horizon")
      ->check(CLI::NonNegativeNumber);
  bound->add_option("--at", b_at, "Iterations at which to evaluate the bound (default: m)");
  bound->add_option("--seed", seed, "Seed for random pavings");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a canned comparison experiment");
  std::string e_name, e_out;
  std::optional<std::size_t> e_trials, e_threads;
  std::optional<std::string> e_config, e_summary;
  std::vector<std::string> e_sets;
  exp->add_option("--name", e_name, "circulant, sphere or coherent")
      ->required()
      ->check(CLI::IsMember({"circulant", "sphere", "coherent"}));
  exp->add_option("--trials", e_trials, "Number of trials")->check(CLI::PositiveNumber);
  exp->add_option("--seed", seed, "Master seed (default: entropy)");
  exp->add_option("--out", e_out, "Aggregate CSV path")->required();
  exp->add_option("--config", e_config, "key = value file applied over the preset");
  exp->add_option("--set", e_sets, "key=value override (repeatable)");
  exp->add_option("--threads", e_threads, "Worker threads")->check(CLI::PositiveNumber);
  exp->add_option("--summary", e_summary, "Also write the JSON summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*solve) return cmd_solve(s_matrix, s_rhs, s_paving, s_method, s_xstar, s_solution, seed, s_flags);
    if (*pave) return cmd_pave(p_matrix, p_blocks, p_paving, p_layout, p_out, seed);
    if (*coh) return cmd_coherence(c_matrix, seed);
    if (*fit) return cmd_fit(f_flags, seed);
    if (*bound) return cmd_bound(b_matrix, b_paving, b_err0, b_resid, b_resid_inf, b_at, seed);
    if (*exp) return cmd_experiment(e_name, e_trials, seed, e_out, e_config, e_sets, e_threads, e_summary);
  } catch (const Failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
