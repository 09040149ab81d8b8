#pragma once

#include <string>
#include <vector>

#include "critmult/rational.hpp"

namespace critmult {

struct Monomial {
  Rational coeff;
  std::vector<unsigned> exponents;
};

// Multivariate polynomial with rational coefficients, kept canonical:
// exponent patterns sorted and unique, zero terms dropped.
class PolyExpr {
 public:
  PolyExpr() = default;
  explicit PolyExpr(std::size_t nvars) : nvars_(nvars) {}
  PolyExpr(std::size_t nvars, std::vector<Monomial> terms);

  static PolyExpr constant(std::size_t nvars, const Rational& c);
  static PolyExpr variable(std::size_t nvars, std::size_t i);

  std::size_t nvars() const { return nvars_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;

  Rational eval(const Vec& x) const;
  double eval(const std::vector<double>& x) const;
  PolyExpr derivative(std::size_t var) const;

  PolyExpr operator+(const PolyExpr& o) const;
  PolyExpr operator-(const PolyExpr& o) const;
  PolyExpr operator*(const PolyExpr& o) const;
  PolyExpr operator*(const Rational& c) const;
  bool operator==(const PolyExpr& o) const;

  std::string str() const;

 private:
  void canonicalize();

  std::size_t nvars_ = 0;
  std::vector<Monomial> terms_;
  std::vector<double> coeff_d_;
};

using PolyMatrix = std::vector<std::vector<PolyExpr>>;

class PolyMap {
 public:
  PolyMap() = default;
  PolyMap(std::size_t nvars, std::vector<PolyExpr> components);

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return components_.size(); }
  const std::vector<PolyExpr>& components() const { return components_; }
  const PolyExpr& operator[](std::size_t i) const { return components_[i]; }

  Vec eval(const Vec& x) const;
  std::vector<double> eval(const std::vector<double>& x) const;

 private:
  std::size_t nvars_ = 0;
  std::vector<PolyExpr> components_;
};

// Row i holds the partial derivatives of component i.
PolyMatrix jacobian(const PolyMap& f);
// One symmetric matrix per component.
std::vector<PolyMatrix> hessians(const PolyMap& f);
PolyMap gradient(const PolyExpr& p);

struct Derivatives {
  PolyMatrix jacobian;
  std::vector<PolyMatrix> hessians;
};
Derivatives differentiate(const PolyMap& f);

Matrix eval_matrix(const PolyMatrix& m, const Vec& x);
std::vector<std::vector<double>> eval_matrix(const PolyMatrix& m, const std::vector<double>& x);

// Largest entrywise gap between central differences of f and its exact Jacobian.
double fd_check(const PolyMap& f, const std::vector<double>& x, double h);

}  // namespace critmult
