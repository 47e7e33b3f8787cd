#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bkz.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bkz_capi_" + name)).string();
}

bkz_operator* identity(size_t n) {
  std::vector<double> d(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
  bkz_operator* op = nullptr;
  REQUIRE(bkz_operator_from_dense(n, n, d.data(), 0, &op) == BKZ_OK);
  return op;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(bkz_version()) == "0.1.0");
  CHECK(std::string(bkz_status_name(BKZ_OK)) == "ok");
  CHECK(std::string(bkz_status_name(BKZ_ERR_DIMENSION)).size() > 0);
  CHECK(bkz_entropy_seed() != bkz_entropy_seed());
}

TEST_CASE("NULL arguments are reported, not dereferenced") {
  bkz_operator* op = nullptr;
  CHECK(bkz_operator_from_dense(2, 2, nullptr, 0, &op) == BKZ_ERR_INVALID_ARGUMENT);
  CHECK(op == nullptr);
  CHECK(std::strlen(bkz_last_error()) > 0);
  CHECK(bkz_operator_read_mm("/nonexistent/a.mtx", &op) == BKZ_ERR_IO);
  CHECK(bkz_solve_simple(nullptr, nullptr, nullptr, nullptr, nullptr) == BKZ_ERR_INVALID_ARGUMENT);
  bkz_operator_free(nullptr);
  bkz_vector_free(nullptr);
  bkz_paving_free(nullptr);
  bkz_report_free(nullptr);
  // success clears the message
  bkz_vector* v = nullptr;
  const double x = 1.0;
  CHECK(bkz_vector_from_real(1, &x, &v) == BKZ_OK);
  CHECK(std::string(bkz_last_error()).empty());
  bkz_vector_free(v);
}

TEST_CASE("operator round trip and matvec") {
  const std::vector<double> d{1, 2, 3, 4, 5, 6};
  bkz_operator* op = nullptr;
  REQUIRE(bkz_operator_from_dense(2, 3, d.data(), 0, &op) == BKZ_OK);
  CHECK(bkz_operator_rows(op) == 2);
  CHECK(bkz_operator_cols(op) == 3);
  CHECK_FALSE(bkz_operator_is_complex(op));
  CHECK_FALSE(bkz_operator_standardized(op));
  const double x[3] = {1, 0, -1};
  double y[2];
  REQUIRE(bkz_operator_matvec(op, x, y) == BKZ_OK);
  CHECK(y[0] == -2.0);
  CHECK(y[1] == -2.0);
  const auto path = tmp_path("op.mtx");
  REQUIRE(bkz_operator_write_mm(op, path.c_str()) == BKZ_OK);
  bkz_operator* back = nullptr;
  REQUIRE(bkz_operator_read_mm(path.c_str(), &back) == BKZ_OK);
  std::vector<double> got(6);
  REQUIRE(bkz_operator_to_dense(back, got.data()) == BKZ_OK);
  CHECK(got == d);
  bkz_operator_free(back);
  bkz_operator_free(op);
  std::remove(path.c_str());
}

TEST_CASE("paving handles") {
  bkz_paving* p = nullptr;
  REQUIRE(bkz_paving_random(10, 3, 7, &p) == BKZ_OK);
  CHECK(bkz_paving_count(p) == 3);
  CHECK(bkz_paving_rows(p) == 10);
  size_t total = 0;
  for (size_t b = 0; b < 3; ++b) total += bkz_paving_block_size(p, b);
  CHECK(total == 10);
  std::vector<size_t> idx(bkz_paving_block_size(p, 0));
  CHECK(bkz_paving_block_indices(p, 0, idx.data()) == BKZ_OK);
  CHECK(bkz_paving_block_indices(p, 3, idx.data()) == BKZ_ERR_INVALID_ARGUMENT);
  bkz_paving* q = nullptr;
  REQUIRE(bkz_paving_random(10, 3, 7, &q) == BKZ_OK);
  std::vector<size_t> idx2(idx.size());
  bkz_paving_block_indices(q, 0, idx2.data());
  CHECK(idx == idx2);
  CHECK(bkz_paving_random(3, 4, 1, &q) != BKZ_OK);
  bkz_paving_free(q);
  bkz_paving_free(p);
}

TEST_CASE("identity solve") {
  bkz_operator* a = identity(4);
  const double bd[4] = {1, -2, 3, 0.5};
  bkz_vector* b = nullptr;
  REQUIRE(bkz_vector_from_real(4, bd, &b) == BKZ_OK);
  bkz_paving* p = nullptr;
  REQUIRE(bkz_paving_contiguous(4, 2, &p) == BKZ_OK);
  bkz_solver_config cfg;
  bkz_solver_config_init(&cfg);
  cfg.tolerance = 1e-12;
  cfg.control = BKZ_CONTROL_CYCLE;
  bkz_report* r = nullptr;
  REQUIRE(bkz_solve_block(a, b, p, &cfg, b, &r) == BKZ_OK);
  CHECK(bkz_report_converged(r));
  CHECK(bkz_report_iterations(r) == 2);
  bkz_vector* x = nullptr;
  REQUIRE(bkz_report_solution(r, &x) == BKZ_OK);
  for (size_t i = 0; i < 4; ++i) {
    double re = 0, im = 0;
    bkz_vector_get(x, i, &re, &im);
    CHECK(re == doctest::Approx(bd[i]));
  }
  bkz_trace_row row;
  REQUIRE(bkz_report_trace_row(r, bkz_report_trace_size(r) - 1, &row) == BKZ_OK);
  CHECK(row.err_norm < 1e-12);
  CHECK(bkz_report_trace_row(r, 1000, &row) == BKZ_ERR_INVALID_ARGUMENT);
  bkz_vector_free(x);
  bkz_report_free(r);
  bkz_paving_free(p);
  bkz_vector_free(b);
  bkz_operator_free(a);
}

TEST_CASE("dimension mismatch is reported") {
  bkz_operator* a = identity(3);
  const double bd[2] = {1, 2};
  bkz_vector* b = nullptr;
  bkz_vector_from_real(2, bd, &b);
  bkz_solver_config cfg;
  bkz_solver_config_init(&cfg);
  bkz_report* r = nullptr;
  CHECK(bkz_solve_simple(a, b, &cfg, nullptr, &r) == BKZ_ERR_DIMENSION);
  CHECK(r == nullptr);
  bkz_vector_free(b);
  bkz_operator_free(a);
}

TEST_CASE("bounds through the C API") {
  bkz_operator* a = nullptr;
  bkz_paving* p = nullptr;
  REQUIRE(bkz_operator_generate("circulant", 300, 100, 15, 3, &a, &p) == BKZ_OK);
  CHECK(bkz_operator_is_complex(a));
  bkz_paving_bounds pb;
  REQUIRE(bkz_compute_paving_bounds(a, p, &pb) == BKZ_OK);
  CHECK(pb.m == 15);
  CHECK(pb.alpha == doctest::Approx(1.0).epsilon(1e-12));
  bkz_spectral s;
  REQUIRE(bkz_sigma_extremes(a, &s) == BKZ_OK);
  bkz_rate_comparison rc;
  REQUIRE(bkz_compare_rates(300, s.sigma_min * s.sigma_min, &pb, 0.0, NAN, &rc) == BKZ_OK);
  CHECK(rc.speedup == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(rc.horizon_block == 0.0);
  CHECK(std::isnan(rc.horizon_simple));
  double fl = 0;
  REQUIRE(bkz_tolerance_floor(&pb, 0.25, &fl) == BKZ_OK);
  CHECK(fl == doctest::Approx(0.5));
  size_t m = 0;
  int clamped = 1;
  REQUIRE(bkz_random_paving_block_count(4.0, 100, 0.5, 1.0, &m, &clamped) == BKZ_OK);
  CHECK(m == 74);
  CHECK_FALSE(clamped);
  bkz_paving_free(p);
  bkz_operator_free(a);
}

TEST_CASE("generated operator matches the experiment's matrix") {
  bkz_experiment_config* c = nullptr;
  REQUIRE(bkz_experiment_config_preset("sphere", &c) == BKZ_OK);
  for (auto [k, v] : std::vector<std::pair<const char*, const char*>>{
           {"n", "40"}, {"d", "12"}, {"blocks", "4"}, {"trials", "1"}, {"seed", "31"}, {"checkpoints", "5"},
           {"max_epochs", "5"}}) {
    REQUIRE(bkz_experiment_config_set(c, k, v) == BKZ_OK);
  }
  CHECK(bkz_experiment_config_set(c, "nope", "1") == BKZ_ERR_PARSE);
  bkz_experiment_result* res = nullptr;
  REQUIRE(bkz_experiment_run(c, &res) == BKZ_OK);
  const auto j = nlohmann::json::parse(bkz_experiment_summary_json(res));
  bkz_operator* a = nullptr;
  REQUIRE(bkz_operator_generate("sphere", 40, 12, 4, 31, &a, nullptr) == BKZ_OK);
  bkz_spectral s;
  REQUIRE(bkz_sigma_extremes(a, &s) == BKZ_OK);
  CHECK(s.sigma_min * s.sigma_min == doctest::Approx(j["sigma_min2"].get<double>()).epsilon(1e-12));
  CHECK(s.sigma_max * s.sigma_max == doctest::Approx(j["sigma_max2"].get<double>()).epsilon(1e-12));
  const auto csv = tmp_path("exp.csv");
  REQUIRE(bkz_experiment_write_csv(res, csv.c_str()) == BKZ_OK);
  std::ifstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header.rfind("algorithm,", 0) == 0);
  std::remove(csv.c_str());
  bkz_operator_free(a);
  bkz_experiment_free(res);
  bkz_experiment_config_free(c);
}

TEST_CASE("fit through the C API") {
  bkz_operator* a = identity(5);
  const double bd[5] = {1, 1, 1, 1, 1};
  bkz_vector* b = nullptr;
  bkz_vector_from_real(5, bd, &b);
  bkz_operator* w = nullptr;
  bkz_vector* bt = nullptr;
  REQUIRE(bkz_fit_transform(a, b, 0, 1, &w, &bt, nullptr) == BKZ_OK);
  CHECK(bkz_operator_is_complex(w));
  std::vector<double> dense(2 * 25);
  REQUIRE(bkz_operator_to_dense(w, dense.data()) == BKZ_OK);
  for (size_t k = 0; k < 25; ++k)
    CHECK(std::hypot(dense[2 * k], dense[2 * k + 1]) == doctest::Approx(1.0 / std::sqrt(5.0)));
  double re = 0, im = 0;
  bkz_vector_get(bt, 0, &re, &im);
  CHECK(re == doctest::Approx(std::sqrt(5.0)));
  int holds = 0;
  double nsq = 0, thr = 0;
  REQUIRE(bkz_check_fit_hypothesis(a, 1.0, &holds, &nsq, &thr) == BKZ_OK);
  CHECK(nsq == doctest::Approx(1.0));
  bkz_vector_free(bt);
  bkz_operator_free(w);
  bkz_vector_free(b);
  bkz_operator_free(a);
}
