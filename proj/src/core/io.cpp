#include "io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "format.hpp"

namespace bkz {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool next_data_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '%') continue;
    return true;
  }
  return false;
}

double parse_number(std::istringstream& ls, const char* what) {
  double v;
  require(static_cast<bool>(ls >> v), ErrorCode::Parse, std::string("malformed ") + what);
  return v;
}

template <class T>
DenseMatrix<T> read_body(std::istream& is, bool array, bool complex_field, const std::string& symmetry) {
  std::string line;
  require(next_data_line(is, line), ErrorCode::Parse, "Matrix Market size line missing");
  std::istringstream hs(line);
  long long rows = 0, cols = 0, nnz = 0;
  require(static_cast<bool>(hs >> rows >> cols), ErrorCode::Parse, "malformed Matrix Market size line");
  if (!array) require(static_cast<bool>(hs >> nnz), ErrorCode::Parse, "coordinate size line needs nnz");
  require(rows >= 1 && cols >= 1 && nnz >= 0, ErrorCode::Parse, "Matrix Market dimensions must be positive");
  const bool general = symmetry == "general";
  require(general || rows == cols, ErrorCode::Parse, "symmetric Matrix Market data must be square");
  DenseMatrix<T> a(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));

  auto read_value = [&](std::istringstream& ls) -> T {
    const double re = parse_number(ls, "matrix entry");
    if (complex_field) {
      const double im = parse_number(ls, "imaginary part");
      if constexpr (is_complex_v<T>) return T{re, im};
    }
    return T{re};
  };
  auto place = [&](std::size_t i, std::size_t j, T v, bool accumulate) {
    if (accumulate)
      a(i, j) += v;
    else
      a(i, j) = v;
    if (i == j || general) return;
    T mirror = v;
    if (symmetry == "skew-symmetric") mirror = -v;
    if (symmetry == "hermitian") mirror = conj(v);
    if (accumulate)
      a(j, i) += mirror;
    else
      a(j, i) = mirror;
  };

  if (array) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const std::size_t start = general ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j);
      for (std::size_t i = start; i < a.rows(); ++i) {
        require(next_data_line(is, line), ErrorCode::Parse, "Matrix Market array data ended early");
        std::istringstream ls(line);
        place(i, j, read_value(ls), false);
      }
    }
  } else {
    for (long long k = 0; k < nnz; ++k) {
      require(next_data_line(is, line), ErrorCode::Parse, "Matrix Market coordinate data ended early");
      std::istringstream ls(line);
      long long i = 0, j = 0;
      require(static_cast<bool>(ls >> i >> j), ErrorCode::Parse, "malformed coordinate entry");
      require(i >= 1 && i <= rows && j >= 1 && j <= cols, ErrorCode::Parse,
              "coordinate entry (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
      place(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), read_value(ls), true);
    }
  }
  return a;
}

template <class T>
void write_mm(std::ostream& os, const DenseMatrix<T>& a) {
  os << "%%MatrixMarket matrix array " << (is_complex_v<T> ? "complex" : "real") << " general\n";
  os << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if constexpr (is_complex_v<T>)
        os << format_double(a(i, j).real()) << ' ' << format_double(a(i, j).imag()) << '\n';
      else
        os << format_double(a(i, j)) << '\n';
    }
}

}  // namespace

AnyMatrix read_matrix_market(std::istream& is) {
  std::string header;
  require(static_cast<bool>(std::getline(is, header)), ErrorCode::Parse, "empty Matrix Market input");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  require(banner == "%%MatrixMarket", ErrorCode::Parse, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  require(object == "matrix", ErrorCode::Parse, "only 'matrix' objects are supported");
  require(format == "array" || format == "coordinate", ErrorCode::Parse, "unknown layout '" + format + "'");
  require(field == "real" || field == "integer" || field == "double" || field == "complex",
          ErrorCode::Parse, "unsupported field '" + field + "'");
  require(symmetry == "general" || symmetry == "symmetric" || symmetry == "skew-symmetric" ||
              symmetry == "hermitian",
          ErrorCode::Parse, "unknown symmetry '" + symmetry + "'");
  const bool array = format == "array";
  if (field == "complex") return read_body<cplx>(is, array, true, symmetry);
  require(symmetry != "hermitian", ErrorCode::Parse, "hermitian symmetry needs a complex field");
  return read_body<double>(is, array, false, symmetry);
}

AnyMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::Io, "cannot open " + path);
  return read_matrix_market(is);
}

void write_matrix_market(std::ostream& os, const DenseMatrix<double>& a) { write_mm(os, a); }
void write_matrix_market(std::ostream& os, const DenseMatrix<cplx>& a) { write_mm(os, a); }

template <class T>
void write_matrix_market_file(const std::string& path, const DenseMatrix<T>& a) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::Io, "cannot open " + path + " for writing");
  write_mm(os, a);
  require(static_cast<bool>(os), ErrorCode::Io, "write failed for " + path);
}

AnyVector read_vector(std::istream& is) {
  std::vector<double> re, im;
  bool complex_data = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#' || line[b] == '%') continue;
    std::istringstream ls(line);
    double x = 0.0, y = 0.0;
    require(static_cast<bool>(ls >> x), ErrorCode::Parse, "malformed vector entry on line " + std::to_string(lineno));
    if (ls >> y)
      complex_data = true;
    else
      y = 0.0;
    ls.clear();
    std::string rest;
    require(!(ls >> rest), ErrorCode::Parse,
            "too many values on vector line " + std::to_string(lineno));
    re.push_back(x);
    im.push_back(y);
  }
  require(!re.empty(), ErrorCode::Parse, "vector file has no entries");
  if (!complex_data) return re;
  Vec<cplx> out(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) out[i] = {re[i], im[i]};
  return out;
}

AnyVector read_vector_file(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::Io, "cannot open " + path);
  return read_vector(is);
}

void write_vector(std::ostream& os, std::span<const double> v) {
  for (double x : v) os << format_double(x) << '\n';
}

void write_vector(std::ostream& os, std::span<const cplx> v) {
  for (const cplx& x : v) os << format_double(x.real()) << ' ' << format_double(x.imag()) << '\n';
}

template <class T>
void write_vector_file(const std::string& path, std::span<const T> v) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::Io, "cannot open " + path + " for writing");
  write_vector(os, v);
  require(static_cast<bool>(os), ErrorCode::Io, "write failed for " + path);
}

Vec<cplx> as_complex_vector(const AnyVector& v) {
  if (auto* r = std::get_if<Vec<double>>(&v)) return Vec<cplx>(r->begin(), r->end());
  return std::get<Vec<cplx>>(v);
}

Vec<double> as_real_vector(const AnyVector& v) {
  if (auto* r = std::get_if<Vec<double>>(&v)) return *r;
  const auto& c = std::get<Vec<cplx>>(v);
  Vec<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    require(c[i].imag() == 0.0, ErrorCode::InvalidArgument, "complex vector used with a real matrix");
    out[i] = c[i].real();
  }
  return out;
}

template void write_matrix_market_file(const std::string&, const DenseMatrix<double>&);
template void write_matrix_market_file(const std::string&, const DenseMatrix<cplx>&);
template void write_vector_file(const std::string&, std::span<const double>);
template void write_vector_file(const std::string&, std::span<const cplx>);

}  // namespace bkz
