#include "critmult/criticality.hpp"

#include <stdexcept>

#include "critmult/linalg.hpp"

namespace critmult {

namespace {

Matrix gram(const Matrix& q, const std::vector<Vec>& a, const std::vector<Vec>& b) {
  Matrix g(a.size(), Vec(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    Vec qa = mat_vec(q, a[i]);
    for (std::size_t j = 0; j < b.size(); ++j) g[i][j] = dot(qa, b[j]);
  }
  return g;
}

// Exact LDL^T; on the first nonpositive pivot returns c with c^T M c <= 0.
std::optional<Vec> ldlt_failure(const Matrix& m) {
  const std::size_t k = m.size();
  Matrix l = identity(k);
  Vec d(k);
  for (std::size_t j = 0; j < k; ++j) {
    Rational s = m[j][j];
    for (std::size_t p = 0; p < j; ++p) s -= l[j][p] * l[j][p] * d[p];
    d[j] = s;
    if (sgn(d[j]) <= 0) {
      // Solve L^T c = e_j on the leading (j+1) block.
      Vec c = zeros(k);
      c[j] = 1;
      for (std::size_t r = j; r-- > 0;) {
        Rational acc = 0;
        for (std::size_t t = r + 1; t <= j; ++t) acc += l[t][r] * c[t];
        c[r] = -acc;
      }
      return c;
    }
    for (std::size_t i = j + 1; i < k; ++i) {
      Rational s2 = m[i][j];
      for (std::size_t p = 0; p < j; ++p) s2 -= l[i][p] * l[j][p] * d[p];
      l[i][j] = s2 / d[j];
    }
  }
  return std::nullopt;
}

Vec combine(const std::vector<Vec>& gens, const Vec& coeffs, std::size_t dim) {
  Vec out = zeros(dim);
  for (std::size_t i = 0; i < gens.size(); ++i) axpy(out, coeffs[i], gens[i]);
  return out;
}

}  // namespace

SoscVerdict quadratic_positive_on_cone(const Matrix& q, const std::vector<Vec>& rays, const std::vector<Vec>& lines) {
  const std::size_t dim = q.size();
  Matrix qs(dim, Vec(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) qs[i][j] = (q[i][j] + q[j][i]) / 2;

  Matrix mll = gram(qs, lines, lines);
  if (auto c = ldlt_failure(mll)) return {false, primitive(combine(lines, *c, dim))};
  if (rays.empty()) return {true, std::nullopt};

  // Minimizing over the lineality part leaves the Schur complement S on the ray coefficients.
  const std::size_t nr = rays.size();
  Matrix mlr = gram(qs, lines, rays);
  Matrix mrr = gram(qs, rays, rays);
  Matrix sol(lines.size(), Vec(nr));  // M_LL^{-1} M_LR, column by column
  for (std::size_t j = 0; j < nr && !lines.empty(); ++j) {
    Vec col(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) col[i] = mlr[i][j];
    auto x = solve_linear(mll, col, lines.size());
    if (!x) throw std::logic_error("singular lineality block");
    for (std::size_t i = 0; i < lines.size(); ++i) sol[i][j] = (*x)[i];
  }
  Matrix s = mrr;
  for (std::size_t a = 0; a < nr; ++a)
    for (std::size_t b = 0; b < nr; ++b)
      for (std::size_t i = 0; i < lines.size(); ++i) s[a][b] -= mlr[i][a] * sol[i][b];

  if (nr > 24) throw std::length_error("too many extreme rays for support enumeration");
  // Minimum of beta^T S beta on the standard simplex through KKT points of each support.
  std::optional<Rational> best;
  Vec best_beta;
  for (unsigned long mask = 1; mask < (1UL << nr); ++mask) {
    std::vector<std::size_t> sup;
    for (std::size_t i = 0; i < nr; ++i)
      if (mask & (1UL << i)) sup.push_back(i);
    const std::size_t k = sup.size();
    Matrix sys(k + 1, Vec(k + 1));
    Vec rhs = zeros(k + 1);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) sys[a][b] = s[sup[a]][sup[b]];
      sys[a][k] = -1;
      sys[k][a] = 1;
    }
    rhs[k] = 1;
    if (rank(sys, k + 1) != k + 1) continue;
    auto x = solve_linear(sys, rhs, k + 1);
    if (!x) continue;
    bool interior = true;
    for (std::size_t a = 0; a < k; ++a)
      if (sgn((*x)[a]) <= 0) interior = false;
    if (!interior) continue;
    if (!best || (*x)[k] < *best) {
      best = (*x)[k];
      best_beta = zeros(nr);
      for (std::size_t a = 0; a < k; ++a) best_beta[sup[a]] = (*x)[a];
    }
  }
  if (!best) throw std::logic_error("no KKT point on the simplex");
  if (sgn(*best) > 0) return {true, std::nullopt};
  Vec u = combine(rays, best_beta, dim);
  if (!lines.empty()) {
    Vec c(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      Rational acc = 0;
      for (std::size_t j = 0; j < nr; ++j) acc += sol[i][j] * best_beta[j];
      c[i] = -acc;
    }
    u = add(u, combine(lines, c, dim));
  }
  return {false, primitive(u)};
}

SoscVerdict sosc_check(const VariationalSystem& vs, const Vec& x, const Vec& v) {
  Vec z = require_multiplier(vs, x, v);
  Matrix h = vs.psi_jacobian_x(x, v);
  Matrix j = vs.phi_jacobian(x);
  HPoly k = critical_cone(vs.theta(), z, v).hrep;
  VPoly c = convert_rep(pullback(k, j, vs.n()));
  return quadratic_positive_on_cone(h, c.rays, c.lines);
}

}  // namespace critmult
