#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace critmult {

using Rational = mpq_class;
using Vec = std::vector<Rational>;
// Row-major; every row has the same length.
using Matrix = std::vector<Vec>;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Accepts "p", "-p", "p/q". Zero denominators and stray characters throw ParseError.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Vec& v);

// Exact conversion; every finite double is a dyadic rational.
Rational from_double(double x);
std::vector<double> to_doubles(const Vec& v);

Vec zeros(std::size_t n);
Vec unit(std::size_t n, std::size_t i);
Matrix zero_matrix(std::size_t rows, std::size_t cols);
Matrix identity(std::size_t n);

Rational dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Rational& c, const Vec& a);
Vec neg(const Vec& a);
// a += c * b
void axpy(Vec& a, const Rational& c, const Vec& b);
bool is_zero(const Vec& v);
Rational norm2_squared(const Vec& v);

Matrix transpose(const Matrix& a, std::size_t cols);
Vec mat_vec(const Matrix& a, const Vec& x);
Vec mat_t_vec(const Matrix& a, const Vec& y, std::size_t cols);
Matrix mat_mul(const Matrix& a, const Matrix& b, std::size_t b_cols);

// Positive multiple with coprime integer entries. The zero vector is returned unchanged.
Vec primitive(const Vec& v);
// Like primitive() but also flips sign so the first nonzero entry is positive.
Vec primitive_signed(const Vec& v);

// Normalizes (normal, rhs) jointly to a primitive integer row.
void primitive_row(Vec& normal, Rational& rhs);

}  // namespace critmult
