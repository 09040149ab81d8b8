#include "critmult/graph.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace critmult {

namespace {

std::vector<std::vector<std::size_t>> subsets(const std::vector<std::size_t>& s, bool nonempty) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = s.size();
  for (std::size_t mask = nonempty ? 1 : 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> sub;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) sub.push_back(s[i]);
    out.push_back(std::move(sub));
  }
  return out;
}

// Rows of h that are tight at x, homogenized.
HPoly tangent_at(const HPoly& h, const Vec& x) {
  HPoly t(h.dim);
  for (const auto& c : h.ineqs)
    if (dot(c.normal, x) == c.rhs) t.add_ineq(c.normal, 0);
  for (const auto& c : h.eqs) t.add_eq(c.normal, 0);
  return t;
}

HPoly product(const HPoly& a, const HPoly& b) {
  HPoly p(a.dim + b.dim);
  auto lift = [&](const Vec& v, bool first) {
    Vec r = zeros(a.dim + b.dim);
    for (std::size_t i = 0; i < v.size(); ++i) r[(first ? 0 : a.dim) + i] = v[i];
    return r;
  };
  for (const auto& c : a.ineqs) p.add_ineq(lift(c.normal, true), c.rhs);
  for (const auto& c : a.eqs) p.add_eq(lift(c.normal, true), c.rhs);
  for (const auto& c : b.ineqs) p.add_ineq(lift(c.normal, false), c.rhs);
  for (const auto& c : b.eqs) p.add_eq(lift(c.normal, false), c.rhs);
  return p;
}

void push_unique(std::vector<HPoly>& out, std::set<std::string>& seen, HPoly h) {
  HPoly canon = remove_redundancy(h);
  if (seen.insert(canon.str()).second) out.push_back(std::move(canon));
}

}  // namespace

const GraphPiece& SubdifferentialGraph::piece(const std::vector<std::size_t>& P,
                                              const std::vector<std::size_t>& Q) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto key = std::make_pair(P, Q);
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;
  if (P.empty()) throw std::invalid_argument("graph piece needs at least one affine piece");
  const std::size_t m = theta_.dim();
  const auto& a = theta_.pieces();
  const auto& d = theta_.domain_rows();
  auto piece = std::make_unique<GraphPiece>();
  piece->P = P;
  piece->Q = Q;
  HPoly z(m);
  const std::size_t s = P.front();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i == s) continue;
    Vec row = sub(a[i].a, a[s].a);
    Rational rhs = a[i].alpha - a[s].alpha;
    if (std::find(P.begin(), P.end(), i) != P.end())
      z.add_eq(std::move(row), rhs);
    else
      z.add_ineq(std::move(row), rhs);
  }
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (std::find(Q.begin(), Q.end(), j) != Q.end())
      z.add_eq(d[j].d, d[j].beta);
    else
      z.add_ineq(d[j].d, d[j].beta);
  }
  piece->z_part = std::move(z);
  // Lift (v, lambda_P, mu_Q) and project the multipliers away.
  const std::size_t np = P.size(), nq = Q.size(), dim = m + np + nq;
  HPoly lift(dim);
  for (std::size_t r = 0; r < m; ++r) {
    Vec row = zeros(dim);
    row[r] = 1;
    for (std::size_t i = 0; i < np; ++i) row[m + i] = -a[P[i]].a[r];
    for (std::size_t j = 0; j < nq; ++j) row[m + np + j] = -d[Q[j]].d[r];
    lift.add_eq(std::move(row), 0);
  }
  Vec sum = zeros(dim);
  for (std::size_t i = 0; i < np; ++i) sum[m + i] = 1;
  lift.add_eq(std::move(sum), 1);
  std::vector<std::size_t> extra;
  for (std::size_t k = m; k < dim; ++k) {
    lift.add_ineq(scale(Rational(-1), unit(dim, k)), 0);
    extra.push_back(k);
  }
  piece->v_part = project_out(lift, extra);
  auto [pos, inserted] = cache_.emplace(key, std::move(piece));
  return *pos->second;
}

std::vector<const GraphPiece*> SubdifferentialGraph::pieces_at(const Vec& z, const Vec& v) const {
  Evaluation ev = eval_and_active(theta_, z);
  if (!ev.value) throw MembershipError("(z, v) is off the graph: z outside dom theta");
  std::vector<const GraphPiece*> out;
  for (const auto& P : subsets(ev.active.K, true))
    for (const auto& Q : subsets(ev.active.I, false)) {
      const GraphPiece& gp = piece(P, Q);
      if (gp.v_part.contains(v)) out.push_back(&gp);
    }
  if (out.empty()) throw MembershipError("(z, v) is off the graph: v is not a subgradient");
  return out;
}

std::vector<HPoly> graph_tangent_cones(const SubdifferentialGraph& g, const Vec& z, const Vec& v) {
  std::vector<HPoly> out;
  std::set<std::string> seen;
  for (const GraphPiece* p : g.pieces_at(z, v))
    push_unique(out, seen, product(tangent_at(p->z_part, z), tangent_at(p->v_part, v)));
  return out;
}

std::vector<HPoly> graph_tangent_oracle(const SubdifferentialGraph& g, const Vec& z, const Vec& v,
                                        const Vec& u) {
  if (u.size() != g.theta().dim()) throw DimensionError("graph_tangent_oracle: direction length mismatch");
  std::vector<HPoly> out;
  std::set<std::string> seen;
  for (const GraphPiece* p : g.pieces_at(z, v)) {
    if (!tangent_at(p->z_part, z).contains(u)) continue;
    push_unique(out, seen, tangent_at(p->v_part, v));
  }
  return out;
}

HPoly regular_coderivative_domain(const CpwlFunction& theta, const Vec& z, const Vec& v) {
  HPoly k = critical_cone(theta, z, v).hrep;
  HPoly minus(k.dim);
  for (const auto& c : k.ineqs) minus.add_ineq(neg(c.normal), 0);
  for (const auto& c : k.eqs) minus.add_eq(c.normal, 0);
  return minus;
}

std::optional<VPoly> regular_coderivative(const CpwlFunction& theta, const Vec& z, const Vec& v,
                                          const Vec& u) {
  if (u.size() != theta.dim()) throw DimensionError("regular_coderivative: direction length mismatch");
  HPoly k = critical_cone(theta, z, v).hrep;
  if (!k.contains(neg(u))) return std::nullopt;
  return dual_cone_h(k);
}

namespace {

HPoly polar_as_hpoly(const HPoly& cone) {
  std::vector<Vec> rays, lines;
  for (const auto& c : cone.ineqs) rays.push_back(c.normal);
  for (const auto& c : cone.eqs) lines.push_back(c.normal);
  return convert_rep_v(VPoly::cone(cone.dim, rays, lines));
}

}  // namespace

HPoly regular_normal_cone(const SubdifferentialGraph& g, const Vec& z, const Vec& v) {
  auto cones = graph_tangent_cones(g, z, v);
  HPoly n(2 * g.theta().dim());
  for (const auto& t : cones) n = n.intersect(polar_as_hpoly(t));
  return remove_redundancy(n);
}

std::optional<HPoly> coderivative_slice(const HPoly& c, const Vec& u) {
  const std::size_t m = u.size();
  if (c.dim != 2 * m) throw DimensionError("coderivative_slice: expected a set in R^{2m}");
  HPoly w(m);
  auto split = [&](const Constraint& row) {
    Vec gw(row.normal.begin(), row.normal.begin() + static_cast<std::ptrdiff_t>(m));
    Vec gy(row.normal.begin() + static_cast<std::ptrdiff_t>(m), row.normal.end());
    return std::make_pair(gw, row.rhs + dot(gy, u));
  };
  for (const auto& row : c.ineqs) {
    auto [gw, rhs] = split(row);
    w.add_ineq(gw, rhs);
  }
  for (const auto& row : c.eqs) {
    auto [gw, rhs] = split(row);
    w.add_eq(gw, rhs);
  }
  if (!is_feasible(w)) return std::nullopt;
  return remove_redundancy(w);
}

std::optional<HPoly> regular_coderivative_oracle(const SubdifferentialGraph& g, const Vec& z, const Vec& v,
                                                 const Vec& u) {
  return coderivative_slice(regular_normal_cone(g, z, v), u);
}

namespace {

struct RowRef {
  std::size_t hyperplane;
  int sign;  // normal = sign * hyperplane
  bool equality;
};

struct Arrangement {
  std::size_t dim;
  std::vector<Vec> hyperplanes;
  std::vector<std::vector<RowRef>> cones;  // rows of each tangent cone
  std::vector<const HPoly*> sources;
};

Arrangement build_arrangement(const std::vector<HPoly>& cones, std::size_t dim) {
  Arrangement ar{dim, {}, {}, {}};
  std::map<Vec, std::size_t> index;
  auto ref = [&](const Vec& normal, bool eq) {
    Vec p = primitive_signed(normal);
    int s = (p == primitive(normal)) ? 1 : -1;
    auto it = index.find(p);
    std::size_t h;
    if (it == index.end()) {
      h = ar.hyperplanes.size();
      index.emplace(p, h);
      ar.hyperplanes.push_back(p);
    } else {
      h = it->second;
    }
    return RowRef{h, s, eq};
  };
  for (const auto& c : cones) {
    std::vector<RowRef> rows;
    for (const auto& r : c.ineqs)
      if (!is_zero(r.normal)) rows.push_back(ref(r.normal, false));
    for (const auto& r : c.eqs)
      if (!is_zero(r.normal)) rows.push_back(ref(r.normal, true));
    ar.cones.push_back(std::move(rows));
    ar.sources.push_back(&c);
  }
  return ar;
}

// Cone k excluded by the assigned signs?
bool excluded(const std::vector<RowRef>& rows, const std::vector<int>& signs, std::size_t assigned) {
  for (const auto& r : rows) {
    if (r.hyperplane >= assigned) continue;
    int s = r.sign * signs[r.hyperplane];
    if (r.equality ? s != 0 : s > 0) return true;
  }
  return false;
}

}  // namespace

std::vector<HPoly> limiting_normal_cone(const SubdifferentialGraph& g, const Vec& z, const Vec& v) {
  const std::size_t dim = 2 * g.theta().dim();
  auto cones = graph_tangent_cones(g, z, v);
  Arrangement ar = build_arrangement(cones, dim);
  const std::size_t nh = ar.hyperplanes.size();
  std::set<std::vector<std::vector<std::size_t>>> signatures;
  std::vector<int> signs(nh, 0);

  std::function<void(std::size_t, const HPoly&)> dfs = [&](std::size_t level, const HPoly& cell) {
    bool any = false;
    for (std::size_t k = 0; k < ar.cones.size() && !any; ++k)
      if (!excluded(ar.cones[k], signs, level)) any = true;
    if (!any) return;
    if (level == nh) {
      std::vector<std::vector<std::size_t>> sig;
      for (std::size_t k = 0; k < ar.cones.size(); ++k) {
        if (excluded(ar.cones[k], signs, nh)) {
          sig.push_back({std::size_t(-1)});
          continue;
        }
        std::vector<std::size_t> tight;
        for (std::size_t r = 0; r < ar.cones[k].size(); ++r)
          if (signs[ar.cones[k][r].hyperplane] == 0) tight.push_back(r);
        sig.push_back(std::move(tight));
      }
      signatures.insert(std::move(sig));
      return;
    }
    const Vec& h = ar.hyperplanes[level];
    for (int s : {0, 1, -1}) {
      HPoly next = cell;
      if (s == 0)
        next.add_eq(h, 0);
      else if (s > 0)
        next.add_ineq(neg(h), -1);
      else
        next.add_ineq(h, -1);
      if (!is_feasible(next)) continue;
      signs[level] = s;
      dfs(level + 1, next);
    }
    signs[level] = 0;
  };
  dfs(0, HPoly(dim));

  std::vector<HPoly> out;
  std::set<std::string> seen;
  for (const auto& sig : signatures) {
    HPoly n(dim);
    for (std::size_t k = 0; k < sig.size(); ++k) {
      if (sig[k].size() == 1 && sig[k][0] == std::size_t(-1)) continue;
      std::vector<Vec> rays, lines;
      for (auto r : sig[k]) {
        const RowRef& ref = ar.cones[k][r];
        Vec normal = scale(Rational(ref.sign), ar.hyperplanes[ref.hyperplane]);
        (ref.equality ? lines : rays).push_back(std::move(normal));
      }
      n = n.intersect(convert_rep_v(VPoly::cone(dim, rays, lines)));
    }
    push_unique(out, seen, n);
  }
  return out;
}

std::vector<HPoly> limiting_coderivative(const SubdifferentialGraph& g, const Vec& z, const Vec& v,
                                         const Vec& u) {
  if (u.size() != g.theta().dim()) throw DimensionError("limiting_coderivative: direction length mismatch");
  std::vector<HPoly> out;
  std::set<std::string> seen;
  for (const auto& n : limiting_normal_cone(g, z, v))
    if (auto s = coderivative_slice(n, u)) push_unique(out, seen, *s);
  return out;
}

}  // namespace critmult
