#include "critmult/rational.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace critmult {

namespace {

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den) || den[0] == '-' || den[0] == '+')
    throw ParseError("malformed rational '" + std::string(text) + "'");
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const Vec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ')';
  return os.str();
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite double has no rational value");
  return Rational(x);
}

std::vector<double> to_doubles(const Vec& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

Vec zeros(std::size_t n) { return Vec(n, Rational(0)); }

Vec unit(std::size_t n, std::size_t i) {
  Vec e = zeros(n);
  e[i] = 1;
  return e;
}

Matrix zero_matrix(std::size_t rows, std::size_t cols) { return Matrix(rows, zeros(cols)); }

Matrix identity(std::size_t n) {
  Matrix m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Rational dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

Vec add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("add: length mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("sub: length mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scale(const Rational& c, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

Vec neg(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

void axpy(Vec& a, const Rational& c, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("axpy: length mismatch");
  if (sgn(c) == 0) return;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(b[i]) != 0) a[i] += c * b[i];
}

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

Rational norm2_squared(const Vec& v) { return dot(v, v); }

Matrix transpose(const Matrix& a, std::size_t cols) {
  Matrix t = zero_matrix(cols, a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = a[i][j];
  return t;
}

Vec mat_vec(const Matrix& a, const Vec& x) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = dot(a[i], x);
  return r;
}

Vec mat_t_vec(const Matrix& a, const Vec& y, std::size_t cols) {
  if (a.size() != y.size()) throw DimensionError("mat_t_vec: length mismatch");
  Vec r = zeros(cols);
  for (std::size_t i = 0; i < a.size(); ++i) axpy(r, y[i], a[i]);
  return r;
}

Matrix mat_mul(const Matrix& a, const Matrix& b, std::size_t b_cols) {
  Matrix r = zero_matrix(a.size(), b_cols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      if (sgn(a[i][k]) != 0) axpy(r[i], a[i][k], b[k]);
  return r;
}

namespace {

// Returns the positive scale factor that makes v primitive.
Rational primitive_factor(const Vec& v, const Rational* extra) {
  mpz_class l = 1, g = 0;
  auto visit = [&](const Rational& x) {
    if (sgn(x) == 0) return;
    mpz_class den = x.get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
  };
  for (const auto& x : v) visit(x);
  if (extra) visit(*extra);
  auto visit_num = [&](const Rational& x) {
    if (sgn(x) == 0) return;
    mpz_class n = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  };
  for (const auto& x : v) visit_num(x);
  if (extra) visit_num(*extra);
  if (g == 0) return Rational(1);
  Rational f(l, g);
  f.canonicalize();
  return f;
}

}  // namespace

Vec primitive(const Vec& v) {
  Rational f = primitive_factor(v, nullptr);
  return scale(f, v);
}

Vec primitive_signed(const Vec& v) {
  Vec p = primitive(v);
  for (const auto& x : p) {
    if (sgn(x) == 0) continue;
    if (sgn(x) < 0)
      for (auto& y : p) y = -y;
    break;
  }
  return p;
}

void primitive_row(Vec& normal, Rational& rhs) {
  Rational f = primitive_factor(normal, &rhs);
  for (auto& x : normal) x *= f;
  rhs *= f;
}

}  // namespace critmult
