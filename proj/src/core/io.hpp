#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "dense_matrix.hpp"

namespace bkz {

/// A matrix read from disk keeps the scalar field of the file.
using AnyMatrix = std::variant<DenseMatrix<double>, DenseMatrix<cplx>>;
using AnyVector = std::variant<Vec<double>, Vec<cplx>>;

/// Matrix Market reader: array and coordinate layouts; real, integer and
/// complex fields; general, symmetric, skew-symmetric and hermitian
/// symmetry. Coordinate duplicates are summed.
AnyMatrix read_matrix_market(std::istream& is);
AnyMatrix read_matrix_market_file(const std::string& path);

/// Writes the dense array layout (column-major) with 17 significant digits.
void write_matrix_market(std::ostream& os, const DenseMatrix<double>& a);
void write_matrix_market(std::ostream& os, const DenseMatrix<cplx>& a);
template <class T>
void write_matrix_market_file(const std::string& path, const DenseMatrix<T>& a);

/// One entry per line: "re" for real data, "re im" for complex. Blank lines
/// and lines starting with '#' or '%' are skipped. The vector is complex as
/// soon as any line carries two numbers.
AnyVector read_vector(std::istream& is);
AnyVector read_vector_file(const std::string& path);
void write_vector(std::ostream& os, std::span<const double> v);
void write_vector(std::ostream& os, std::span<const cplx> v);
template <class T>
void write_vector_file(const std::string& path, std::span<const T> v);

/// Field conversions; narrowing to real requires zero imaginary parts.
Vec<cplx> as_complex_vector(const AnyVector& v);
Vec<double> as_real_vector(const AnyVector& v);

}  // namespace bkz
