#include "critmult/criticality.hpp"

#include <algorithm>

namespace critmult {

const char* to_string(Criticality c) { return c == Criticality::Critical ? "Critical" : "Noncritical"; }

namespace {

struct PairData {
  std::size_t n = 0, m = 0;
  Matrix h;  // grad_x Psi
  Matrix j;  // grad Phi
  Vec z;
};

PairData pair_data(const VariationalSystem& vs, const Vec& x, const Vec& v) {
  PairData d;
  d.z = require_multiplier(vs, x, v);
  d.n = vs.n();
  d.m = vs.m();
  d.h = vs.psi_jacobian_x(x, v);
  d.j = vs.phi_jacobian(x);
  return d;
}

// Variables (xi, rho, tau) with eta = sum rho_t r_t + sum tau_t l_t and rho >= 0.
struct Lifted {
  HPoly sys;
  std::vector<Vec> eta_rays;
  std::vector<Vec> eta_lines;
  std::size_t n = 0;

  std::size_t dim() const { return sys.dim; }
  Vec xi(const Vec& y) const { return Vec(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n)); }
  Vec eta(const Vec& y, std::size_t m) const {
    Vec e = zeros(m);
    for (std::size_t t = 0; t < eta_rays.size(); ++t) axpy(e, y[n + t], eta_rays[t]);
    for (std::size_t t = 0; t < eta_lines.size(); ++t) axpy(e, y[n + eta_rays.size() + t], eta_lines[t]);
    return e;
  }
  // Linear form on y giving coordinate i of eta.
  Vec eta_form(std::size_t i) const {
    Vec f = zeros(dim());
    for (std::size_t t = 0; t < eta_rays.size(); ++t) f[n + t] = eta_rays[t][i];
    for (std::size_t t = 0; t < eta_lines.size(); ++t) f[n + eta_rays.size() + t] = eta_lines[t][i];
    return f;
  }
};

// w = J xi must satisfy w_cons (a cone in R^m); eta ranges over cone(rays) + span(lines).
Lifted build(const PairData& d, const HPoly& w_cons, std::vector<Vec> rays, std::vector<Vec> lines) {
  Lifted l;
  l.n = d.n;
  l.eta_rays = std::move(rays);
  l.eta_lines = std::move(lines);
  const std::size_t nr = l.eta_rays.size(), nl = l.eta_lines.size();
  const std::size_t dim = d.n + nr + nl;
  l.sys = HPoly(dim);
  auto lift_w = [&](const Vec& g) {
    Vec row = zeros(dim);
    Vec jt = mat_t_vec(d.j, g, d.n);
    for (std::size_t k = 0; k < d.n; ++k) row[k] = jt[k];
    return row;
  };
  for (const auto& c : w_cons.ineqs) l.sys.add_ineq(lift_w(c.normal), 0);
  for (const auto& c : w_cons.eqs) l.sys.add_eq(lift_w(c.normal), 0);
  std::vector<Vec> jt_rays, jt_lines;
  for (const auto& r : l.eta_rays) jt_rays.push_back(mat_t_vec(d.j, r, d.n));
  for (const auto& r : l.eta_lines) jt_lines.push_back(mat_t_vec(d.j, r, d.n));
  for (std::size_t k = 0; k < d.n; ++k) {
    Vec row = zeros(dim);
    for (std::size_t c = 0; c < d.n; ++c) row[c] = d.h[k][c];
    for (std::size_t t = 0; t < nr; ++t) row[d.n + t] = jt_rays[t][k];
    for (std::size_t t = 0; t < nl; ++t) row[d.n + nr + t] = jt_lines[t][k];
    l.sys.add_eq(std::move(row), 0);
  }
  for (std::size_t t = 0; t < nr; ++t) l.sys.add_ineq(scale(Rational(-1), unit(dim, d.n + t)), 0);
  return l;
}

struct Hit {
  Vec y;
  Vec form;
  int sign;
};

// A point of the cone on which some form is nonzero.
std::optional<Hit> find_nonzero(const HPoly& cone, const std::vector<Vec>& forms) {
  HPoly boxed = cone;
  for (const auto& f : forms) {
    boxed.add_ineq(f, 1);
    boxed.add_ineq(neg(f), 1);
  }
  for (const auto& f : forms)
    for (int s : {1, -1}) {
      LpResult r = lp_maximize(boxed, scale(Rational(s), f));
      if (r.status == LpStatus::Optimal && sgn(r.value) > 0) return Hit{r.x, f, s};
    }
  return std::nullopt;
}

// Sparse representative: fix s * form = 1 and minimize the l1 size of (xi, rho, tau).
Vec polish(const Lifted& l, const Hit& hit) {
  const std::size_t dim = l.dim();
  const std::size_t nr = l.eta_rays.size();
  // Extra variables: bounds a_k >= |y_k| for the free coordinates (xi and tau).
  std::vector<std::size_t> free_idx;
  for (std::size_t k = 0; k < l.n; ++k) free_idx.push_back(k);
  for (std::size_t k = l.n + nr; k < dim; ++k) free_idx.push_back(k);
  const std::size_t total = dim + free_idx.size();
  HPoly p(total);
  auto widen = [&](const Vec& v) {
    Vec r = v;
    r.resize(total, Rational(0));
    return r;
  };
  for (const auto& c : l.sys.ineqs) p.add_ineq(widen(c.normal), c.rhs);
  for (const auto& c : l.sys.eqs) p.add_eq(widen(c.normal), c.rhs);
  p.add_eq(widen(scale(Rational(hit.sign), hit.form)), 1);
  Vec cost = zeros(total);
  for (std::size_t t = 0; t < nr; ++t) cost[l.n + t] = -1;
  for (std::size_t a = 0; a < free_idx.size(); ++a) {
    Vec up = zeros(total), down = zeros(total);
    up[free_idx[a]] = 1;
    up[dim + a] = -1;
    down[free_idx[a]] = -1;
    down[dim + a] = -1;
    p.add_ineq(std::move(up), 0);
    p.add_ineq(std::move(down), 0);
    cost[dim + a] = -1;
  }
  LpResult r = lp_maximize(p, cost);
  if (r.status != LpStatus::Optimal) return hit.y;
  return Vec(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(dim));
}

CriticalityWitness normalized(const Lifted& l, const Vec& y, std::size_t m) {
  Vec xi = l.xi(y), eta = l.eta(y, m);
  Vec both = xi;
  both.insert(both.end(), eta.begin(), eta.end());
  both = primitive(both);
  return {Vec(both.begin(), both.begin() + static_cast<std::ptrdiff_t>(xi.size())),
          Vec(both.begin() + static_cast<std::ptrdiff_t>(xi.size()), both.end())};
}

std::vector<Vec> xi_forms(const Lifted& l) {
  std::vector<Vec> f;
  for (std::size_t k = 0; k < l.n; ++k) f.push_back(unit(l.dim(), k));
  return f;
}

// Face pairs of K: xi side in the face, eta in the conjugate face.
Lifted face_system(const PairData& d, const HPoly& k, const Face& face) {
  std::vector<Vec> rays, lines;
  for (auto i : face.active_ineq_indices) rays.push_back(k.ineqs[i].normal);
  for (const auto& e : k.eqs) lines.push_back(e.normal);
  return build(d, face.carrier, rays, lines);
}

CriticalityVerdict finish(CriticalityVerdict v, const VariationalSystem& vs, const Vec& x, const Vec& mult) {
  if (v.witness && !verify_critical_witness(vs, x, mult, *v.witness))
    throw std::logic_error("criticality witness failed exact verification");
  return v;
}

}  // namespace

CriticalityVerdict classify_multiplier(const VariationalSystem& vs, const Vec& x, const Vec& v) {
  PairData d = pair_data(vs, x, v);
  CriticalityVerdict out;
  out.critical_cone = critical_cone(vs.theta(), d.z, v).hrep;
  for (const auto& face : enumerate_faces(out.critical_cone)) {
    Lifted l = face_system(d, out.critical_cone, face);
    auto hit = find_nonzero(l.sys, xi_forms(l));
    std::vector<std::size_t> idx(face.active_ineq_indices.begin(), face.active_ineq_indices.end());
    out.certificates.push_back({idx, hit.has_value()});
    if (hit) {
      out.status = Criticality::Critical;
      out.witness = normalized(l, polish(l, *hit), d.m);
      out.face = idx;
      break;
    }
  }
  return finish(std::move(out), vs, x, v);
}

CriticalityVerdict classify_multiplier_coderivative(const VariationalSystem& vs, const Vec& x, const Vec& v) {
  PairData d = pair_data(vs, x, v);
  CriticalityVerdict out;
  HPoly dom = regular_coderivative_domain(vs.theta(), d.z, v);  // -K
  out.critical_cone = HPoly(d.m);
  for (const auto& c : dom.ineqs) out.critical_cone.add_ineq(neg(c.normal), 0);
  for (const auto& c : dom.eqs) out.critical_cone.add_eq(c.normal, 0);
  // Value at any u in the domain; zero always qualifies.
  std::optional<VPoly> value = regular_coderivative(vs.theta(), d.z, v, zeros(d.m));
  HPoly kstar = convert_rep_v(*value);
  for (const auto& g : enumerate_faces(kstar)) {
    VPoly gens = convert_rep(g.carrier);
    HPoly w_cons = out.critical_cone;
    for (const auto& r : gens.rays) w_cons.add_eq(r, 0);
    for (const auto& r : gens.lines) w_cons.add_eq(r, 0);
    Lifted l = build(d, w_cons, gens.rays, gens.lines);
    auto hit = find_nonzero(l.sys, xi_forms(l));
    std::vector<std::size_t> idx(g.active_ineq_indices.begin(), g.active_ineq_indices.end());
    out.certificates.push_back({idx, hit.has_value()});
    if (hit) {
      out.status = Criticality::Critical;
      out.witness = normalized(l, polish(l, *hit), d.m);
      out.face = idx;
      break;
    }
  }
  return finish(std::move(out), vs, x, v);
}

bool verify_critical_witness(const VariationalSystem& vs, const Vec& x, const Vec& v, const CriticalityWitness& w) {
  if (w.xi.size() != vs.n() || w.eta.size() != vs.m() || is_zero(w.xi)) return false;
  Vec z = vs.phi().eval(x);
  Matrix h = vs.psi_jacobian_x(x, v);
  Matrix j = vs.phi_jacobian(x);
  Vec r = mat_vec(h, w.xi);
  Vec jt_eta = mat_t_vec(j, w.eta, vs.n());
  if (!is_zero(add(r, jt_eta))) return false;
  Vec jxi = mat_vec(j, w.xi);
  if (sgn(dot(w.eta, jxi)) != 0) return false;
  HPoly k = critical_cone(vs.theta(), z, v).hrep;
  if (!k.contains(jxi)) return false;
  VPoly kv = convert_rep(k);
  for (const auto& ray : kv.rays)
    if (sgn(dot(w.eta, ray)) > 0) return false;
  for (const auto& line : kv.lines)
    if (sgn(dot(w.eta, line)) != 0) return false;
  return true;
}

std::optional<CriticalityWitness> nontrivial_pair(const VariationalSystem& vs, const Vec& x, const Vec& v) {
  PairData d = pair_data(vs, x, v);
  HPoly k = critical_cone(vs.theta(), d.z, v).hrep;
  for (const auto& face : enumerate_faces(k)) {
    Lifted l = face_system(d, k, face);
    std::vector<Vec> forms = xi_forms(l);
    for (std::size_t i = 0; i < d.m; ++i) {
      Vec f = l.eta_form(i);
      if (!is_zero(f)) forms.push_back(std::move(f));
    }
    if (auto hit = find_nonzero(l.sys, forms)) return normalized(l, polish(l, *hit), d.m);
  }
  return std::nullopt;
}

}  // namespace critmult
