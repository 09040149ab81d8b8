#include "critmult/lp.hpp"

#include <limits>

namespace critmult {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Tableau for min c.y, A y = b, y >= 0, kept in basic form.
class Tableau {
 public:
  Tableau(Matrix a, Vec b, std::size_t ncols) : ncols_(ncols) {
    const std::size_t m = a.size();
    for (std::size_t r = 0; r < m; ++r) {
      if (sgn(b[r]) < 0) {
        for (auto& x : a[r]) x = -x;
        b[r] = -b[r];
      }
    }
    // Reuse unit columns as the starting basis; add artificials elsewhere.
    basis_.assign(m, kNone);
    for (std::size_t j = 0; j < ncols; ++j) {
      std::size_t hit = kNone;
      bool unit = true;
      for (std::size_t r = 0; r < m && unit; ++r) {
        if (sgn(a[r][j]) == 0) continue;
        if (a[r][j] == 1 && hit == kNone)
          hit = r;
        else
          unit = false;
      }
      if (unit && hit != kNone && basis_[hit] == kNone) basis_[hit] = j;
    }
    std::size_t artificials = 0;
    for (auto b_r : basis_)
      if (b_r == kNone) ++artificials;
    total_ = ncols + artificials;
    rows_.assign(m, Vec());
    std::size_t next = ncols;
    for (std::size_t r = 0; r < m; ++r) {
      Vec row = std::move(a[r]);
      row.resize(total_ + 1, Rational(0));
      row[total_] = b[r];
      if (basis_[r] == kNone) {
        row[next] = 1;
        basis_[r] = next++;
      }
      rows_[r] = std::move(row);
    }
  }

  bool is_artificial(std::size_t j) const { return j >= ncols_ && j < total_; }

  // Minimizes the given cost (length total_) over allowed columns.
  LpStatus optimize(const Vec& cost, bool allow_artificial) {
    obj_.assign(total_ + 1, Rational(0));
    for (std::size_t j = 0; j < total_; ++j) obj_[j] = cost[j];
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Rational& cb = cost[basis_[r]];
      if (sgn(cb) != 0) axpy(obj_, -cb, rows_[r]);
    }
    for (;;) {
      std::size_t enter = kNone;
      for (std::size_t j = 0; j < total_; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (sgn(obj_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == kNone) return LpStatus::Optimal;
      std::size_t leave = kNone;
      Rational best;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (sgn(rows_[r][enter]) <= 0) continue;
        Rational ratio = rows_[r][total_] / rows_[r][enter];
        if (leave == kNone || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == kNone) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    Rational inv = 1 / rows_[r][c];
    for (auto& x : rows_[r]) x *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r || sgn(rows_[i][c]) == 0) continue;
      Rational f = -rows_[i][c];
      axpy(rows_[i], f, rows_[r]);
    }
    if (!obj_.empty() && sgn(obj_[c]) != 0) {
      Rational f = -obj_[c];
      axpy(obj_, f, rows_[r]);
    }
    basis_[r] = c;
  }

  // Pivots artificials out of the basis or drops their (redundant) rows.
  void purge_artificials() {
    for (std::size_t r = 0; r < rows_.size();) {
      if (!is_artificial(basis_[r])) {
        ++r;
        continue;
      }
      std::size_t c = kNone;
      for (std::size_t j = 0; j < ncols_; ++j)
        if (sgn(rows_[r][j]) != 0) {
          c = j;
          break;
        }
      if (c == kNone) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
      } else {
        pivot(r, c);
        ++r;
      }
    }
  }

  Rational objective_value(const Vec& cost) const {
    Rational v = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) v += cost[basis_[r]] * rows_[r][total_];
    return v;
  }

  Vec solution() const {
    Vec y = zeros(ncols_);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      if (basis_[r] < ncols_) y[basis_[r]] = rows_[r][total_];
    return y;
  }

  std::size_t total() const { return total_; }

 private:
  std::size_t ncols_;
  std::size_t total_ = 0;
  Matrix rows_;
  std::vector<std::size_t> basis_;
  Vec obj_;
};

struct StandardResult {
  LpStatus status;
  Vec y;
};

StandardResult solve_standard(Matrix a, Vec b, const Vec& c) {
  const std::size_t ncols = c.size();
  Tableau t(std::move(a), std::move(b), ncols);
  Vec phase1 = zeros(t.total());
  for (std::size_t j = ncols; j < t.total(); ++j) phase1[j] = 1;
  t.optimize(phase1, true);
  if (sgn(t.objective_value(phase1)) > 0) return {LpStatus::Infeasible, {}};
  t.purge_artificials();
  Vec phase2 = zeros(t.total());
  for (std::size_t j = 0; j < ncols; ++j) phase2[j] = c[j];
  LpStatus st = t.optimize(phase2, false);
  return {st, t.solution()};
}

}  // namespace

LpResult lp_maximize(const HPoly& p, const Vec& c) {
  p.check();
  if (c.size() != p.dim) throw DimensionError("lp_maximize: objective length mismatch");
  const std::size_t n = p.dim, k = p.ineqs.size(), e = p.eqs.size();
  const std::size_t ncols = 2 * n + k;
  Matrix a;
  Vec b;
  a.reserve(k + e);
  for (std::size_t i = 0; i < k; ++i) {
    Vec row = zeros(ncols);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = p.ineqs[i].normal[j];
      row[n + j] = -p.ineqs[i].normal[j];
    }
    row[2 * n + i] = 1;
    a.push_back(std::move(row));
    b.push_back(p.ineqs[i].rhs);
  }
  for (std::size_t i = 0; i < e; ++i) {
    Vec row = zeros(ncols);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = p.eqs[i].normal[j];
      row[n + j] = -p.eqs[i].normal[j];
    }
    a.push_back(std::move(row));
    b.push_back(p.eqs[i].rhs);
  }
  Vec cost = zeros(ncols);
  for (std::size_t j = 0; j < n; ++j) {
    cost[j] = -c[j];
    cost[n + j] = c[j];
  }
  StandardResult s = solve_standard(std::move(a), std::move(b), cost);
  LpResult out;
  out.status = s.status;
  if (s.status == LpStatus::Infeasible) return out;
  out.x = zeros(n);
  for (std::size_t j = 0; j < n; ++j) out.x[j] = s.y[j] - s.y[n + j];
  out.value = dot(c, out.x);
  return out;
}

Feasibility lp_feasible(const HPoly& p) {
  p.check();
  LpResult r = lp_maximize(p, zeros(p.dim));
  if (r.status != LpStatus::Infeasible) return Feasible{r.x};
  // Alternative system in (y, z).
  const std::size_t k = p.ineqs.size(), e = p.eqs.size();
  HPoly alt(k + e);
  for (std::size_t i = 0; i < k; ++i) {
    Vec row = zeros(k + e);
    row[i] = -1;
    alt.add_ineq(std::move(row), 0);
  }
  for (std::size_t t = 0; t < p.dim; ++t) {
    Vec row = zeros(k + e);
    for (std::size_t i = 0; i < k; ++i) row[i] = p.ineqs[i].normal[t];
    for (std::size_t j = 0; j < e; ++j) row[k + j] = p.eqs[j].normal[t];
    alt.add_eq(std::move(row), 0);
  }
  Vec row = zeros(k + e);
  for (std::size_t i = 0; i < k; ++i) row[i] = p.ineqs[i].rhs;
  for (std::size_t j = 0; j < e; ++j) row[k + j] = p.eqs[j].rhs;
  alt.add_eq(std::move(row), -1);
  LpResult a = lp_maximize(alt, zeros(k + e));
  if (a.status == LpStatus::Infeasible)
    throw std::logic_error("lp_feasible: neither primal nor Farkas system is feasible");
  return Infeasible{primitive(a.x)};
}

bool is_feasible(const HPoly& p) {
  return lp_maximize(p, zeros(p.dim)).status != LpStatus::Infeasible;
}

bool verify_farkas(const HPoly& p, const Vec& cert) {
  const std::size_t k = p.ineqs.size(), e = p.eqs.size();
  if (cert.size() != k + e) return false;
  for (std::size_t i = 0; i < k; ++i)
    if (sgn(cert[i]) < 0) return false;
  Vec combo = zeros(p.dim);
  Rational rhs = 0;
  for (std::size_t i = 0; i < k; ++i) {
    axpy(combo, cert[i], p.ineqs[i].normal);
    rhs += cert[i] * p.ineqs[i].rhs;
  }
  for (std::size_t j = 0; j < e; ++j) {
    axpy(combo, cert[k + j], p.eqs[j].normal);
    rhs += cert[k + j] * p.eqs[j].rhs;
  }
  return is_zero(combo) && sgn(rhs) < 0;
}

}  // namespace critmult
