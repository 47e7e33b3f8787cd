#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "io.hpp"
#include "support.hpp"

using namespace bkz;

namespace {

template <class T>
DenseMatrix<T> parse_as(const std::string& text) {
  std::istringstream is(text);
  auto m = read_matrix_market(is);
  REQUIRE(std::holds_alternative<DenseMatrix<T>>(m));
  return std::get<DenseMatrix<T>>(m);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("array real general is column-major") {
  const auto a = parse_as<double>("%%MatrixMarket matrix array real general\n% c\n2 3\n1\n2\n3\n4\n5\n6\n");
  CHECK(a.rows() == 2);
  CHECK(a(0, 0) == 1.0);
  CHECK(a(1, 0) == 2.0);
  CHECK(a(0, 2) == 5.0);
  CHECK(a(1, 2) == 6.0);
}

TEST_CASE("coordinate layout sums duplicates") {
  const auto a = parse_as<double>("%%MatrixMarket matrix coordinate real general\n3 2 3\n1 1 1.5\n3 2 -2\n1 1 0.5\n");
  CHECK(a(0, 0) == 2.0);
  CHECK(a(2, 1) == -2.0);
  CHECK(a(1, 0) == 0.0);
}

TEST_CASE("integer field reads as real") {
  const auto a = parse_as<double>("%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 7\n");
  CHECK(a(0, 0) == 7.0);
}

TEST_CASE("symmetric, skew and hermitian expansion") {
  const auto s = parse_as<double>("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n2 1 3\n");
  CHECK(s(0, 1) == 3.0);
  CHECK(s(1, 0) == 3.0);
  const auto k = parse_as<double>("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 4\n");
  CHECK(k(1, 0) == 4.0);
  CHECK(k(0, 1) == -4.0);
  const auto h = parse_as<cplx>("%%MatrixMarket matrix coordinate complex hermitian\n2 2 2\n1 1 2 0\n2 1 1 1\n");
  CHECK(h(1, 0) == cplx(1, 1));
  CHECK(h(0, 1) == cplx(1, -1));
  const auto ar = parse_as<double>("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n");
  CHECK(ar(0, 1) == 2.0);
  CHECK(ar(1, 1) == 3.0);
}

TEST_CASE("malformed input is rejected") {
  for (const char* text : {"", "garbage\n", "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n",
                           "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n",
                           "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n",
                           "%%MatrixMarket matrix array real general\n1 1\nx\n"}) {
    CAPTURE(text);
    std::istringstream is(text);
    CHECK_THROWS_AS(read_matrix_market(is), Error);
  }
  CHECK_THROWS_AS(read_matrix_market_file("/nonexistent/a.mtx"), Error);
}

TEST_CASE("matrix round trip is exact") {
  Rng rng(91);
  const auto a = testutil::gaussian_c(4, 3, rng);
  std::stringstream ss;
  write_matrix_market(ss, a);
  const auto b = std::get<DenseMatrix<cplx>>(read_matrix_market(ss));
  CHECK(b.data() == a.data());
  const auto r = testutil::gaussian(3, 5, rng);
  std::stringstream sr;
  write_matrix_market(sr, r);
  CHECK(std::get<DenseMatrix<double>>(read_matrix_market(sr)).data() == r.data());
}

TEST_CASE("vector files") {
  std::istringstream real("# x\n1\n\n2.5\n");
  const auto v = read_vector(real);
  REQUIRE(std::holds_alternative<Vec<double>>(v));
  CHECK(std::get<Vec<double>>(v) == Vec<double>{1.0, 2.5});
  std::istringstream mixed("1\n2 3\n");
  const auto c = read_vector(mixed);
  REQUIRE(std::holds_alternative<Vec<cplx>>(c));
  CHECK(std::get<Vec<cplx>>(c)[1] == cplx(2, 3));
  CHECK_THROWS_AS(as_real_vector(c), Error);
  CHECK(as_complex_vector(v)[1] == cplx(2.5, 0));
  std::istringstream junk("1 2 3\n");
  CHECK_THROWS_AS(read_vector(junk), Error);

  Rng rng(92);
  const auto x = testutil::random_vec<cplx>(9, rng);
  const auto path = (std::filesystem::temp_directory_path() / "bkz_io_test.vec").string();
  write_vector_file<cplx>(path, x);
  CHECK(std::get<Vec<cplx>>(read_vector_file(path)) == x);
  std::remove(path.c_str());
}

}
