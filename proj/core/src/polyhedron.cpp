#include "critmult/polyhedron.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "critmult/linalg.hpp"

namespace critmult {

namespace {

using Bits = boost::dynamic_bitset<>;

struct Ray {
  Vec v;
  Bits zero;  // processed inequality rows with <a, v> = 0
};

void grow(std::vector<Ray>& rays, std::size_t size) {
  for (auto& r : rays) r.zero.resize(size);
}

void sort_unique(std::vector<Vec>& vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

std::vector<Vec> echelon_lines(const std::vector<Vec>& lines, std::size_t dim) {
  RowEchelon e = rref(lines, dim);
  std::vector<Vec> out;
  for (auto& row : e.rows) out.push_back(primitive_signed(row));
  return out;
}

}  // namespace

ConeGenerators cone_generators(std::size_t dim, const Matrix& ineqs, const Matrix& eqs) {
  std::vector<Vec> lines;
  for (std::size_t i = 0; i < dim; ++i) lines.push_back(unit(dim, i));
  std::vector<Ray> rays;
  std::size_t processed = 0;  // inequality rows folded into zero sets

  auto process = [&](const Vec& a, bool equality) {
    for (std::size_t k = 0; k < lines.size(); ++k) {
      Rational s = dot(a, lines[k]);
      if (sgn(s) == 0) continue;
      Vec l = std::move(lines[k]);
      lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(k));
      for (auto& other : lines) {
        Rational t = dot(a, other);
        if (sgn(t) != 0) other = primitive(sub(other, scale(t / s, l)));
      }
      for (auto& r : rays) {
        Rational t = dot(a, r.v);
        if (sgn(t) != 0) r.v = primitive(sub(r.v, scale(t / s, l)));
      }
      if (!equality) {
        grow(rays, processed + 1);
        for (auto& r : rays) r.zero.set(processed);
        Ray nr{primitive(sgn(s) > 0 ? neg(l) : l), Bits(processed + 1)};
        for (std::size_t j = 0; j < processed; ++j) nr.zero.set(j);
        rays.push_back(std::move(nr));
        ++processed;
      }
      return;
    }
    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, negs, zer;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(a, rays[i].v);
      int sg = sgn(val[i]);
      (sg > 0 ? pos : sg < 0 ? negs : zer).push_back(i);
    }
    std::vector<Ray> next;
    const std::size_t width = equality ? processed : processed + 1;
    for (auto i : zer) next.push_back(rays[i]);
    if (!equality)
      for (auto i : negs) next.push_back(rays[i]);
    for (auto p : pos)
      for (auto n : negs) {
        Bits common = rays[p].zero & rays[n].zero;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (common.is_subset_of(rays[r].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        Vec w = add(scale(val[p], rays[n].v), scale(-val[n], rays[p].v));
        next.push_back(Ray{primitive(w), common});
      }
    if (!equality) {
      grow(next, width);
      for (auto& r : next)
        if (sgn(dot(a, r.v)) == 0) r.zero.set(processed);
      ++processed;
    }
    rays = std::move(next);
  };

  for (const auto& e : eqs) {
    if (e.size() != dim) throw DimensionError("cone_generators: equality length mismatch");
    process(e, true);
  }
  for (const auto& a : ineqs) {
    if (a.size() != dim) throw DimensionError("cone_generators: inequality length mismatch");
    process(a, false);
  }

  ConeGenerators out;
  out.lines = echelon_lines(lines, dim);
  for (auto& r : rays) {
    Vec v = primitive(orthogonal_residual(r.v, out.lines));
    if (!is_zero(v)) out.rays.push_back(std::move(v));
  }
  sort_unique(out.rays);
  return out;
}

VPoly convert_rep(const HPoly& p) {
  p.check();
  const std::size_t n = p.dim;
  Matrix a, e;
  for (const auto& c : p.ineqs) {
    Vec row = c.normal;
    row.push_back(-c.rhs);
    a.push_back(std::move(row));
  }
  Vec t = zeros(n + 1);
  t[n] = -1;
  a.push_back(t);
  for (const auto& c : p.eqs) {
    Vec row = c.normal;
    row.push_back(-c.rhs);
    e.push_back(std::move(row));
  }
  ConeGenerators g = cone_generators(n + 1, a, e);
  VPoly v(n);
  for (const auto& r : g.rays) {
    Vec x(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n));
    if (sgn(r[n]) > 0)
      v.points.push_back(scale(1 / r[n], x));
    else
      v.rays.push_back(primitive(x));
  }
  if (v.points.empty()) return VPoly(n);
  for (const auto& l : g.lines) v.lines.push_back(Vec(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(n)));
  v.lines = echelon_lines(v.lines, n);
  sort_unique(v.points);
  sort_unique(v.rays);
  return v;
}

HPoly convert_rep_v(const VPoly& v) {
  const std::size_t n = v.dim;
  if (v.is_empty()) return HPoly::empty_set(n);
  Matrix a, e;
  for (const auto& p : v.points) {
    if (p.size() != n) throw DimensionError("convert_rep_v: point length mismatch");
    Vec row = p;
    row.push_back(1);
    a.push_back(std::move(row));
  }
  for (const auto& r : v.rays) {
    if (r.size() != n) throw DimensionError("convert_rep_v: ray length mismatch");
    Vec row = r;
    row.push_back(0);
    a.push_back(std::move(row));
  }
  for (const auto& l : v.lines) {
    if (l.size() != n) throw DimensionError("convert_rep_v: line length mismatch");
    Vec row = l;
    row.push_back(0);
    e.push_back(std::move(row));
  }
  ConeGenerators g = cone_generators(n + 1, a, e);
  HPoly h(n);
  for (const auto& r : g.rays) {
    Vec y(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n));
    if (is_zero(y)) continue;
    Rational rhs = -r[n];
    primitive_row(y, rhs);
    h.ineqs.push_back({std::move(y), std::move(rhs)});
  }
  for (const auto& l : g.lines) {
    Vec y(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(n));
    if (is_zero(y)) continue;
    h.eqs.push_back({std::move(y), -l[n]});
  }
  // Canonical equalities: reduced echelon form of [E | f].
  if (!h.eqs.empty()) {
    Matrix aug;
    for (auto& c : h.eqs) {
      Vec row = c.normal;
      row.push_back(c.rhs);
      aug.push_back(std::move(row));
    }
    RowEchelon ech = rref(aug, n + 1);
    h.eqs.clear();
    for (auto& row : ech.rows) {
      Vec r = primitive_signed(row);
      Rational rhs = r[n];
      r.pop_back();
      h.eqs.push_back({std::move(r), std::move(rhs)});
    }
  }
  std::sort(h.ineqs.begin(), h.ineqs.end(), [](const Constraint& x, const Constraint& y) {
    return x.normal != y.normal ? x.normal < y.normal : x.rhs < y.rhs;
  });
  return h;
}

HPoly dual_cone(const VPoly& c) {
  if (!c.is_cone()) throw std::invalid_argument("dual_cone: input is not a cone");
  HPoly h(c.dim);
  for (const auto& r : c.rays) h.add_ineq(r, 0);
  for (const auto& l : c.lines) h.add_eq(l, 0);
  return convert_rep_v(convert_rep(h));
}

VPoly dual_cone_h(const HPoly& c) {
  c.check();
  if (!c.is_cone()) throw std::invalid_argument("dual_cone_h: input is not a cone");
  std::vector<Vec> rays, lines;
  for (const auto& r : c.ineqs) rays.push_back(r.normal);
  for (const auto& l : c.eqs) lines.push_back(l.normal);
  return convert_rep(convert_rep_v(VPoly::cone(c.dim, rays, lines)));
}

std::vector<Face> enumerate_faces(const HPoly& p) {
  VPoly v = convert_rep(p);
  if (v.is_empty()) return {};
  const std::size_t k = p.ineqs.size();
  struct Gen {
    Bits zero;
    bool point;
  };
  std::vector<Gen> gens;
  for (const auto& x : v.points) {
    Bits z(k);
    for (std::size_t i = 0; i < k; ++i)
      if (dot(p.ineqs[i].normal, x) == p.ineqs[i].rhs) z.set(i);
    gens.push_back({z, true});
  }
  for (const auto& r : v.rays) {
    Bits z(k);
    for (std::size_t i = 0; i < k; ++i)
      if (sgn(dot(p.ineqs[i].normal, r)) == 0) z.set(i);
    gens.push_back({z, false});
  }
  // Smallest active set containing s, or nullopt when the face is empty.
  auto closure = [&](const Bits& s) -> std::optional<Bits> {
    Bits c(k);
    c.set();
    bool has_point = false;
    for (const auto& g : gens) {
      if (!s.is_subset_of(g.zero)) continue;
      c &= g.zero;
      has_point = has_point || g.point;
    }
    if (!has_point) return std::nullopt;
    return c;
  };
  std::vector<Bits> found;
  std::vector<Bits> queue;
  auto root = closure(Bits(k));
  queue.push_back(*root);
  found.push_back(*root);
  for (std::size_t q = 0; q < queue.size(); ++q) {
    Bits s = queue[q];
    for (std::size_t i = 0; i < k; ++i) {
      if (s.test(i)) continue;
      Bits t = s;
      t.set(i);
      auto c = closure(t);
      if (!c) continue;
      if (std::find(found.begin(), found.end(), *c) != found.end()) continue;
      found.push_back(*c);
      queue.push_back(*c);
    }
  }
  std::vector<Face> faces;
  for (const auto& s : found) {
    Face f;
    f.carrier = HPoly(p.dim);
    f.carrier.eqs = p.eqs;
    for (std::size_t i = 0; i < k; ++i) {
      if (s.test(i)) {
        f.active_ineq_indices.insert(i);
        f.carrier.eqs.push_back(p.ineqs[i]);
      } else {
        f.carrier.ineqs.push_back(p.ineqs[i]);
      }
    }
    faces.push_back(std::move(f));
  }
  std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    if (a.active_ineq_indices.size() != b.active_ineq_indices.size())
      return a.active_ineq_indices.size() > b.active_ineq_indices.size();
    return a.active_ineq_indices < b.active_ineq_indices;
  });
  return faces;
}

HPoly remove_redundancy(const HPoly& p) {
  p.check();
  const std::size_t n = p.dim;
  if (!is_feasible(p)) return HPoly::empty_set(n);
  HPoly work(n);
  for (const auto& c : p.eqs) {
    if (is_zero(c.normal)) continue;
    work.eqs.push_back(c);
  }
  std::vector<Constraint> ineqs;
  for (auto c : p.ineqs) {
    if (is_zero(c.normal)) continue;
    primitive_row(c.normal, c.rhs);
    ineqs.push_back(std::move(c));
  }
  std::sort(ineqs.begin(), ineqs.end(), [](const Constraint& x, const Constraint& y) {
    return x.normal != y.normal ? x.normal < y.normal : x.rhs < y.rhs;
  });
  // Same normal: only the tightest rhs matters.
  std::vector<Constraint> uniq;
  for (auto& c : ineqs)
    if (uniq.empty() || uniq.back().normal != c.normal) uniq.push_back(std::move(c));
  // Implicit equalities.
  HPoly all = work;
  all.ineqs = uniq;
  std::vector<Constraint> strict;
  for (const auto& c : uniq) {
    LpResult r = lp_maximize(all, neg(c.normal));
    if (r.status == LpStatus::Optimal && -r.value == c.rhs)
      work.eqs.push_back(c);
    else
      strict.push_back(c);
  }
  // Redundant inequalities, one exact LP per row.
  std::vector<bool> keep(strict.size(), true);
  for (std::size_t i = 0; i < strict.size(); ++i) {
    HPoly rest = work;
    for (std::size_t j = 0; j < strict.size(); ++j)
      if (j != i && keep[j]) rest.ineqs.push_back(strict[j]);
    LpResult r = lp_maximize(rest, strict[i].normal);
    if (r.status == LpStatus::Optimal && r.value <= strict[i].rhs) keep[i] = false;
  }
  HPoly out(n);
  if (!work.eqs.empty()) {
    Matrix aug;
    for (auto& c : work.eqs) {
      Vec row = c.normal;
      row.push_back(c.rhs);
      aug.push_back(std::move(row));
    }
    RowEchelon ech = rref(aug, n + 1);
    for (auto& row : ech.rows) {
      Vec r = primitive_signed(row);
      Rational rhs = r[n];
      r.pop_back();
      out.eqs.push_back({std::move(r), std::move(rhs)});
    }
  }
  std::vector<Vec> eq_normals;
  for (const auto& c : out.eqs) eq_normals.push_back(c.normal);
  for (std::size_t i = 0; i < strict.size(); ++i) {
    if (!keep[i]) continue;
    // Reduce modulo the equalities: a' = a - sum c_j e_j with a' orthogonal to them.
    Vec a = strict[i].normal;
    Rational b = strict[i].rhs;
    if (!eq_normals.empty()) {
      Vec ar = orthogonal_residual(a, eq_normals);
      Vec diff = sub(a, ar);
      // diff = E^T y; recover y to shift the rhs.
      Matrix et = transpose(eq_normals, n);
      auto y = solve_linear(et, diff, eq_normals.size());
      for (std::size_t j = 0; j < eq_normals.size(); ++j) b -= (*y)[j] * out.eqs[j].rhs;
      a = std::move(ar);
    }
    if (is_zero(a)) continue;
    primitive_row(a, b);
    out.ineqs.push_back({std::move(a), std::move(b)});
  }
  std::sort(out.ineqs.begin(), out.ineqs.end(), [](const Constraint& x, const Constraint& y) {
    return x.normal != y.normal ? x.normal < y.normal : x.rhs < y.rhs;
  });
  return out;
}

std::string canonical_key(const HPoly& p) {
  if (!is_feasible(p)) return "empty";
  return remove_redundancy(p).str();
}

HPoly project_out(const HPoly& p, const std::vector<std::size_t>& coords) {
  p.check();
  const std::size_t n = p.dim;
  std::vector<bool> drop(n, false);
  for (auto c : coords) {
    if (c >= n) throw DimensionError("project_out: coordinate out of range");
    drop[c] = true;
  }
  HPoly cur = p;
  for (std::size_t c = 0; c < n; ++c) {
    if (!drop[c]) continue;
    std::size_t pivot = cur.eqs.size();
    for (std::size_t j = 0; j < cur.eqs.size(); ++j)
      if (sgn(cur.eqs[j].normal[c]) != 0) {
        pivot = j;
        break;
      }
    if (pivot < cur.eqs.size()) {
      Constraint e = cur.eqs[pivot];
      cur.eqs.erase(cur.eqs.begin() + static_cast<std::ptrdiff_t>(pivot));
      auto substitute = [&](Constraint& row) {
        if (sgn(row.normal[c]) == 0) return;
        Rational f = -row.normal[c] / e.normal[c];
        axpy(row.normal, f, e.normal);
        row.rhs += f * e.rhs;
      };
      for (auto& row : cur.eqs) substitute(row);
      for (auto& row : cur.ineqs) substitute(row);
      continue;
    }
    std::vector<Constraint> pos, negs, next;
    for (auto& row : cur.ineqs) {
      int s = sgn(row.normal[c]);
      (s > 0 ? pos : s < 0 ? negs : next).push_back(row);
    }
    for (const auto& a : pos)
      for (const auto& b : negs) {
        Rational wa = -b.normal[c], wb = a.normal[c];
        Constraint comb{add(scale(wa, a.normal), scale(wb, b.normal)), wa * a.rhs + wb * b.rhs};
        comb.normal[c] = 0;
        next.push_back(std::move(comb));
      }
    cur.ineqs = std::move(next);
    cur = remove_redundancy(cur);
    if (!cur.ineqs.empty() && is_zero(cur.ineqs[0].normal) && sgn(cur.ineqs[0].rhs) < 0) break;
  }
  HPoly out(n - static_cast<std::size_t>(std::count(drop.begin(), drop.end(), true)));
  auto shrink = [&](const Vec& v) {
    Vec r;
    for (std::size_t j = 0; j < n; ++j)
      if (!drop[j]) r.push_back(v[j]);
    return r;
  };
  if (!is_feasible(cur)) return HPoly::empty_set(out.dim);
  for (const auto& row : cur.ineqs) out.ineqs.push_back({shrink(row.normal), row.rhs});
  for (const auto& row : cur.eqs) out.eqs.push_back({shrink(row.normal), row.rhs});
  return remove_redundancy(out);
}

std::optional<Rational> squared_distance(const Vec& z, const HPoly& p) {
  if (z.size() != p.dim) throw DimensionError("squared_distance: point length mismatch");
  if (p.contains(z)) return Rational(0);
  auto faces = enumerate_faces(p);
  if (faces.empty()) return std::nullopt;
  std::optional<Rational> best;
  for (const auto& f : faces) {
    Matrix m;
    Vec c;
    for (const auto& e : f.carrier.eqs) {
      m.push_back(e.normal);
      c.push_back(e.rhs);
    }
    auto x = project_affine(m, c, z);
    if (!x || !p.contains(*x)) continue;
    Rational d = norm2_squared(sub(*x, z));
    if (!best || d < *best) best = d;
  }
  return best;
}

double distance_point_polyhedron(const std::vector<double>& z, const HPoly& p) {
  Vec zq(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) zq[i] = from_double(z[i]);
  auto d = squared_distance(zq, p);
  if (!d) return std::numeric_limits<double>::infinity();
  return std::sqrt(d->get_d());
}

bool contains(const HPoly& outer, const VPoly& inner) {
  if (outer.dim != inner.dim) throw DimensionError("contains: dimension mismatch");
  if (inner.is_empty()) return true;
  for (const auto& x : inner.points)
    if (!outer.contains(x)) return false;
  for (const auto& r : inner.rays) {
    for (const auto& c : outer.ineqs)
      if (sgn(dot(c.normal, r)) > 0) return false;
    for (const auto& c : outer.eqs)
      if (sgn(dot(c.normal, r)) != 0) return false;
  }
  for (const auto& l : inner.lines) {
    for (const auto& c : outer.ineqs)
      if (sgn(dot(c.normal, l)) != 0) return false;
    for (const auto& c : outer.eqs)
      if (sgn(dot(c.normal, l)) != 0) return false;
  }
  return true;
}

bool subset(const HPoly& inner, const HPoly& outer) { return contains(outer, convert_rep(inner)); }

bool set_equal(const HPoly& a, const HPoly& b) {
  return contains(b, convert_rep(a)) && contains(a, convert_rep(b));
}

bool set_equal(const VPoly& a, const VPoly& b) {
  return contains(convert_rep_v(b), a) && contains(convert_rep_v(a), b);
}

bool covered_by_union(const HPoly& c, std::span<const HPoly> pieces) {
  if (!is_feasible(c)) return true;
  if (pieces.empty()) return false;
  const HPoly& first = pieces.front();
  std::vector<Constraint> rows = first.ineqs;
  for (const auto& e : first.eqs) {
    rows.push_back(e);
    rows.push_back({neg(e.normal), -e.rhs});
  }
  for (const auto& row : rows) {
    LpResult r = lp_maximize(c, row.normal);
    if (r.status == LpStatus::Optimal && r.value <= row.rhs) continue;
    HPoly outside = c;
    outside.add_ineq(neg(row.normal), -row.rhs);
    if (!covered_by_union(outside, pieces.subspan(1))) return false;
  }
  return true;
}

bool union_equals(std::span<const HPoly> pieces, const HPoly& c) {
  for (const auto& p : pieces)
    if (!subset(p, c)) return false;
  return covered_by_union(c, pieces);
}

int affine_dimension(const HPoly& p) {
  VPoly v = convert_rep(p);
  if (v.is_empty()) return -1;
  Matrix dirs;
  for (std::size_t i = 1; i < v.points.size(); ++i) dirs.push_back(sub(v.points[i], v.points[0]));
  for (const auto& r : v.rays) dirs.push_back(r);
  for (const auto& l : v.lines) dirs.push_back(l);
  return static_cast<int>(rank(dirs, p.dim));
}

HPoly pullback(const HPoly& c, const Matrix& m, std::size_t cols) {
  if (m.size() != c.dim) throw DimensionError("pullback: matrix rows must equal polyhedron dimension");
  HPoly out(cols);
  for (const auto& row : c.ineqs) out.add_ineq(mat_t_vec(m, row.normal, cols), row.rhs);
  for (const auto& row : c.eqs) out.add_eq(mat_t_vec(m, row.normal, cols), row.rhs);
  return out;
}

}  // namespace critmult
