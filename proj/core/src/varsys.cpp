#include "critmult/varsys.hpp"

#include "critmult/linalg.hpp"

namespace critmult {

VariationalSystem::VariationalSystem(PolyMap f, PolyMap phi, CpwlFunction theta)
    : f_(std::move(f)), phi_(std::move(phi)) {
  if (f_.size() != f_.nvars()) throw std::invalid_argument("VariationalSystem: f must map R^n to R^n");
  if (phi_.nvars() != f_.nvars()) throw std::invalid_argument("VariationalSystem: Phi and f arity differ");
  if (phi_.size() != theta.dim()) throw std::invalid_argument("VariationalSystem: Phi range differs from dim theta");
  f_jac_ = jacobian(f_);
  phi_jac_ = jacobian(phi_);
  phi_hess_ = hessians(phi_);
  graph_ = std::make_shared<const SubdifferentialGraph>(std::move(theta));
}

Vec VariationalSystem::psi(const Vec& x, const Vec& v) const {
  if (v.size() != m()) throw DimensionError("psi: multiplier length mismatch");
  Vec out = f_.eval(x);
  Matrix j = phi_jacobian(x);
  for (std::size_t i = 0; i < m(); ++i) axpy(out, v[i], j[i]);
  return out;
}

std::vector<double> VariationalSystem::psi(const std::vector<double>& x, const std::vector<double>& v) const {
  if (v.size() != m()) throw DimensionError("psi: multiplier length mismatch");
  auto out = f_.eval(x);
  auto j = phi_jacobian(x);
  for (std::size_t i = 0; i < m(); ++i)
    for (std::size_t k = 0; k < n(); ++k) out[k] += v[i] * j[i][k];
  return out;
}

Matrix VariationalSystem::psi_jacobian_x(const Vec& x, const Vec& v) const {
  if (v.size() != m()) throw DimensionError("psi_jacobian_x: multiplier length mismatch");
  Matrix h = eval_matrix(f_jac_, x);
  for (std::size_t i = 0; i < m(); ++i) {
    if (sgn(v[i]) == 0) continue;
    Matrix hi = eval_matrix(phi_hess_[i], x);
    for (std::size_t r = 0; r < n(); ++r) axpy(h[r], v[i], hi[r]);
  }
  return h;
}

std::vector<std::vector<double>> VariationalSystem::psi_jacobian_x(const std::vector<double>& x,
                                                                   const std::vector<double>& v) const {
  if (v.size() != m()) throw DimensionError("psi_jacobian_x: multiplier length mismatch");
  auto h = eval_matrix(f_jac_, x);
  for (std::size_t i = 0; i < m(); ++i) {
    if (v[i] == 0) continue;
    auto hi = eval_matrix(phi_hess_[i], x);
    for (std::size_t r = 0; r < n(); ++r)
      for (std::size_t c = 0; c < n(); ++c) h[r][c] += v[i] * hi[r][c];
  }
  return h;
}

Matrix VariationalSystem::phi_jacobian(const Vec& x) const { return eval_matrix(phi_jac_, x); }

std::vector<std::vector<double>> VariationalSystem::phi_jacobian(const std::vector<double>& x) const {
  return eval_matrix(phi_jac_, x);
}

PrimalDualPoint make_point(const VariationalSystem& vs, const Vec& x, const Vec& v) {
  if (x.size() != vs.n() || v.size() != vs.m()) throw DimensionError("make_point: length mismatch");
  PrimalDualPoint p{x, v, vs.phi().eval(x)};
  Evaluation ev = eval_and_active(vs.theta(), p.z);
  p.z_in_domain = ev.value.has_value();
  p.v_in_subdifferential = p.z_in_domain && in_subdifferential(vs.theta(), p.z, v);
  p.psi_zero = is_zero(vs.psi(x, v));
  return p;
}

bool LagrangeSet::is_singleton() const {
  return vertices.points.size() == 1 && vertices.rays.empty() && vertices.lines.empty();
}

LagrangeSet multiplier_set(const VariationalSystem& vs, const Vec& x) {
  Vec z = vs.phi().eval(x);
  Subdifferentials sd = subdifferentials(vs.theta(), z);  // throws DomainError off dom
  HPoly h = convert_rep_v(sd.basic);
  Matrix j = vs.phi_jacobian(x);
  Vec fx = vs.f().eval(x);
  for (std::size_t k = 0; k < vs.n(); ++k) {
    Vec row = zeros(vs.m());
    for (std::size_t i = 0; i < vs.m(); ++i) row[i] = j[i][k];
    h.add_eq(std::move(row), -fx[k]);
  }
  LagrangeSet out;
  out.hpoly = remove_redundancy(h);
  out.vertices = convert_rep(out.hpoly);
  return out;
}

Vec require_multiplier(const VariationalSystem& vs, const Vec& x, const Vec& v) {
  PrimalDualPoint p = make_point(vs, x, v);
  if (!p.z_in_domain) throw DomainError("Phi(x) = " + to_string(p.z) + " lies outside dom theta");
  if (!p.v_in_subdifferential)
    throw MembershipError("v = " + to_string(v) + " is not a subgradient of theta at Phi(x)");
  if (!p.psi_zero) throw MembershipError("Psi(x, v) != 0: v is not a Lagrange multiplier");
  return p.z;
}

bool check_stationarity(const VariationalSystem& vs, const Vec& x) {
  Vec z = vs.phi().eval(x);
  if (!eval_and_active(vs.theta(), z).value) return false;
  return !multiplier_set(vs, x).is_empty();
}

NondegeneracyResult nondegeneracy_check(const VariationalSystem& vs, const Vec& x) {
  Vec z = vs.phi().eval(x);
  Evaluation ev = eval_and_active(vs.theta(), z);
  if (!ev.value) throw DomainError("Phi(x) lies outside dom theta");
  const std::size_t m = vs.m(), n = vs.n();
  // Direction space of aff subdiff theta(z).
  std::vector<Vec> gens;
  const Vec& a0 = vs.theta().pieces()[ev.active.K.front()].a;
  for (std::size_t t = 1; t < ev.active.K.size(); ++t)
    gens.push_back(sub(vs.theta().pieces()[ev.active.K[t]].a, a0));
  for (auto i : ev.active.I) gens.push_back(vs.theta().domain_rows()[i].d);
  NondegeneracyResult out;
  if (gens.empty()) {
    out.nondegenerate = true;
    return out;
  }
  Matrix j = vs.phi_jacobian(x);
  // J^T G c = 0
  Matrix jtg = zero_matrix(n, gens.size());
  for (std::size_t c = 0; c < gens.size(); ++c) {
    Vec col = mat_t_vec(j, gens[c], n);
    for (std::size_t r = 0; r < n; ++r) jtg[r][c] = col[r];
  }
  std::vector<Vec> vecs;
  for (const auto& c : linear_kernel(jtg, gens.size())) {
    Vec w = zeros(m);
    for (std::size_t t = 0; t < gens.size(); ++t) axpy(w, c[t], gens[t]);
    vecs.push_back(w);
  }
  RowEchelon e = rref(vecs, m);
  for (auto& row : e.rows) out.intersection_basis.push_back(primitive_signed(row));
  out.nondegenerate = out.intersection_basis.empty();
  return out;
}

RcqResult rcq_check(const VariationalSystem& vs, const Vec& x) {
  Vec z = vs.phi().eval(x);
  Subdifferentials sd = subdifferentials(vs.theta(), z);
  HPoly c = convert_rep_v(sd.singular);
  Matrix j = vs.phi_jacobian(x);
  for (std::size_t k = 0; k < vs.n(); ++k) {
    Vec row = zeros(vs.m());
    for (std::size_t i = 0; i < vs.m(); ++i) row[i] = j[i][k];
    c.add_eq(std::move(row), 0);
  }
  VPoly g = convert_rep(c);
  RcqResult out;
  if (!g.lines.empty())
    out.violating = g.lines.front();
  else if (!g.rays.empty())
    out.violating = g.rays.front();
  out.holds = !out.violating.has_value();
  return out;
}

}  // namespace critmult
