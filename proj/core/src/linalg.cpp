#include "critmult/linalg.hpp"

namespace critmult {

RowEchelon rref(Matrix a, std::size_t cols) {
  RowEchelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && sgn(a[p][c]) == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      Rational f = -a[i][c];
      axpy(a[i], f, a[r]);
    }
    out.pivots.push_back(c);
    ++r;
  }
  a.resize(r);
  out.rows = std::move(a);
  return out;
}

std::size_t rank(const Matrix& a, std::size_t cols) { return rref(a, cols).pivots.size(); }

std::vector<Vec> linear_kernel(const Matrix& a, std::size_t cols) {
  for (const auto& row : a)
    if (row.size() != cols) throw DimensionError("linear_kernel: ragged matrix");
  RowEchelon e = rref(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec u = zeros(cols);
    u[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) u[e.pivots[r]] = -e.rows[r][f];
    basis.push_back(primitive_signed(u));
  }
  return basis;
}

std::optional<Vec> solve_linear(const Matrix& a, const Vec& b, std::size_t cols) {
  if (a.size() != b.size()) throw DimensionError("solve_linear: rhs length mismatch");
  Matrix aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  RowEchelon e = rref(std::move(aug), cols + 1);
  Vec x = zeros(cols);
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == cols) return std::nullopt;
    x[e.pivots[r]] = e.rows[r][cols];
  }
  return x;
}

std::vector<std::size_t> independent_rows(const Matrix& a, std::size_t cols) {
  std::vector<std::size_t> keep;
  Matrix basis;  // kept rows in echelon-reduced form
  std::vector<std::size_t> piv;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Vec r = a[i];
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (sgn(r[piv[k]]) != 0) {
        Rational f = -r[piv[k]];
        axpy(r, f, basis[k]);
      }
    std::size_t p = 0;
    while (p < cols && sgn(r[p]) == 0) ++p;
    if (p == cols) continue;
    Rational inv = 1 / r[p];
    for (auto& x : r) x *= inv;
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (sgn(basis[k][p]) != 0) {
        Rational f = -basis[k][p];
        axpy(basis[k], f, r);
      }
    basis.push_back(std::move(r));
    piv.push_back(p);
    keep.push_back(i);
  }
  return keep;
}

std::optional<Vec> project_affine(const Matrix& m, const Vec& c, const Vec& z) {
  const std::size_t n = z.size();
  if (m.empty()) return z;
  auto idx = independent_rows(m, n);
  Matrix rows;
  Vec rhs;
  for (auto i : idx) {
    rows.push_back(m[i]);
    rhs.push_back(c[i]);
  }
  // Consistency of the dropped rows.
  if (!solve_linear(m, c, n)) return std::nullopt;
  const std::size_t k = rows.size();
  Matrix gram = zero_matrix(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) gram[i][j] = gram[j][i] = dot(rows[i], rows[j]);
  Vec r(k);
  for (std::size_t i = 0; i < k; ++i) r[i] = dot(rows[i], z) - rhs[i];
  auto y = solve_linear(gram, r, k);
  Vec x = z;
  for (std::size_t i = 0; i < k; ++i) axpy(x, -(*y)[i], rows[i]);
  return x;
}

Vec orthogonal_residual(const Vec& v, const std::vector<Vec>& basis) {
  if (basis.empty()) return v;
  return *project_affine(basis, zeros(basis.size()), v);
}

}  // namespace critmult
