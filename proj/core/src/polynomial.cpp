#include "critmult/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace critmult {

PolyExpr::PolyExpr(std::size_t nvars, std::vector<Monomial> terms)
    : nvars_(nvars), terms_(std::move(terms)) {
  for (const auto& t : terms_)
    if (t.exponents.size() != nvars_) throw DimensionError("PolyExpr: exponent list length mismatch");
  canonicalize();
}

PolyExpr PolyExpr::constant(std::size_t nvars, const Rational& c) {
  return PolyExpr(nvars, {Monomial{c, std::vector<unsigned>(nvars, 0)}});
}

PolyExpr PolyExpr::variable(std::size_t nvars, std::size_t i) {
  std::vector<unsigned> e(nvars, 0);
  e.at(i) = 1;
  return PolyExpr(nvars, {Monomial{Rational(1), e}});
}

void PolyExpr::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
  std::vector<Monomial> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exponents == t.exponents)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(std::move(t));
  }
  terms_.clear();
  for (auto& t : merged)
    if (sgn(t.coeff) != 0) terms_.push_back(std::move(t));
  coeff_d_.clear();
  for (const auto& t : terms_) coeff_d_.push_back(t.coeff.get_d());
}

unsigned PolyExpr::degree() const {
  unsigned d = 0;
  for (const auto& t : terms_) {
    unsigned s = 0;
    for (auto e : t.exponents) s += e;
    d = std::max(d, s);
  }
  return d;
}

Rational PolyExpr::eval(const Vec& x) const {
  if (x.size() != nvars_) throw DimensionError("PolyExpr::eval: arity mismatch");
  Rational s = 0;
  for (const auto& t : terms_) {
    Rational m = t.coeff;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (unsigned k = 0; k < t.exponents[i]; ++k) m *= x[i];
    s += m;
  }
  return s;
}

double PolyExpr::eval(const std::vector<double>& x) const {
  if (x.size() != nvars_) throw DimensionError("PolyExpr::eval: arity mismatch");
  double s = 0;
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    double m = coeff_d_[j];
    const auto& e = terms_[j].exponents;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (unsigned k = 0; k < e[i]; ++k) m *= x[i];
    s += m;
  }
  return s;
}

PolyExpr PolyExpr::derivative(std::size_t var) const {
  if (var >= nvars_) throw DimensionError("PolyExpr::derivative: variable out of range");
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    if (t.exponents[var] == 0) continue;
    Monomial d = t;
    d.coeff *= t.exponents[var];
    d.exponents[var] -= 1;
    out.push_back(std::move(d));
  }
  return PolyExpr(nvars_, std::move(out));
}

PolyExpr PolyExpr::operator+(const PolyExpr& o) const {
  if (o.nvars_ != nvars_) throw DimensionError("PolyExpr: arity mismatch");
  std::vector<Monomial> t = terms_;
  t.insert(t.end(), o.terms_.begin(), o.terms_.end());
  return PolyExpr(nvars_, std::move(t));
}

PolyExpr PolyExpr::operator-(const PolyExpr& o) const { return *this + o * Rational(-1); }

PolyExpr PolyExpr::operator*(const PolyExpr& o) const {
  if (o.nvars_ != nvars_) throw DimensionError("PolyExpr: arity mismatch");
  std::vector<Monomial> t;
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      Monomial m{a.coeff * b.coeff, a.exponents};
      for (std::size_t i = 0; i < nvars_; ++i) m.exponents[i] += b.exponents[i];
      t.push_back(std::move(m));
    }
  return PolyExpr(nvars_, std::move(t));
}

PolyExpr PolyExpr::operator*(const Rational& c) const {
  std::vector<Monomial> t = terms_;
  for (auto& m : t) m.coeff *= c;
  return PolyExpr(nvars_, std::move(t));
}

bool PolyExpr::operator==(const PolyExpr& o) const {
  if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].coeff != o.terms_[i].coeff || terms_[i].exponents != o.terms_[i].exponents)
      return false;
  return true;
}

std::string PolyExpr::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    const auto& t = terms_[j];
    if (j) os << (sgn(t.coeff) < 0 ? " - " : " + ");
    else if (sgn(t.coeff) < 0) os << '-';
    Rational a = abs(t.coeff);
    bool constant = std::all_of(t.exponents.begin(), t.exponents.end(), [](unsigned e) { return e == 0; });
    if (a != 1 || constant) os << a.get_str();
    bool first = (a == 1);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (t.exponents[i] == 0) continue;
      if (!first) os << '*';
      first = false;
      os << 'x' << (i + 1);
      if (t.exponents[i] > 1) os << '^' << t.exponents[i];
    }
  }
  return os.str();
}

PolyMap::PolyMap(std::size_t nvars, std::vector<PolyExpr> components)
    : nvars_(nvars), components_(std::move(components)) {
  for (const auto& c : components_)
    if (c.nvars() != nvars_) throw DimensionError("PolyMap: component arity mismatch");
}

Vec PolyMap::eval(const Vec& x) const {
  Vec out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c.eval(x));
  return out;
}

std::vector<double> PolyMap::eval(const std::vector<double>& x) const {
  std::vector<double> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c.eval(x));
  return out;
}

PolyMatrix jacobian(const PolyMap& f) {
  PolyMatrix j;
  for (const auto& c : f.components()) {
    std::vector<PolyExpr> row;
    for (std::size_t v = 0; v < f.nvars(); ++v) row.push_back(c.derivative(v));
    j.push_back(std::move(row));
  }
  return j;
}

std::vector<PolyMatrix> hessians(const PolyMap& f) {
  std::vector<PolyMatrix> out;
  const std::size_t n = f.nvars();
  for (const auto& c : f.components()) {
    PolyMatrix h(n, std::vector<PolyExpr>(n, PolyExpr(n)));
    for (std::size_t i = 0; i < n; ++i) {
      PolyExpr di = c.derivative(i);
      for (std::size_t j = i; j < n; ++j) {
        h[i][j] = di.derivative(j);
        h[j][i] = h[i][j];
      }
    }
    out.push_back(std::move(h));
  }
  return out;
}

PolyMap gradient(const PolyExpr& p) {
  std::vector<PolyExpr> g;
  for (std::size_t v = 0; v < p.nvars(); ++v) g.push_back(p.derivative(v));
  return PolyMap(p.nvars(), std::move(g));
}

Derivatives differentiate(const PolyMap& f) { return {jacobian(f), hessians(f)}; }

Matrix eval_matrix(const PolyMatrix& m, const Vec& x) {
  Matrix out;
  for (const auto& row : m) {
    Vec r;
    for (const auto& p : row) r.push_back(p.eval(x));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::vector<double>> eval_matrix(const PolyMatrix& m, const std::vector<double>& x) {
  std::vector<std::vector<double>> out;
  for (const auto& row : m) {
    std::vector<double> r;
    for (const auto& p : row) r.push_back(p.eval(x));
    out.push_back(std::move(r));
  }
  return out;
}

double fd_check(const PolyMap& f, const std::vector<double>& x, double h) {
  if (!(h > 0)) throw std::invalid_argument("fd_check: step must be positive");
  if (x.size() != f.nvars()) throw DimensionError("fd_check: arity mismatch");
  auto j = eval_matrix(jacobian(f), x);
  double worst = 0;
  for (std::size_t v = 0; v < f.nvars(); ++v) {
    auto xp = x, xm = x;
    xp[v] += h;
    xm[v] -= h;
    auto fp = f.eval(xp), fm = f.eval(xm);
    for (std::size_t i = 0; i < f.size(); ++i) {
      double fd = (fp[i] - fm[i]) / (2 * h);
      worst = std::max(worst, std::abs(fd - j[i][v]));
    }
  }
  return worst;
}

}  // namespace critmult
