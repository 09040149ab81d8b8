#include "critmult/cpwl.hpp"

#include <algorithm>

namespace critmult {

CpwlFunction::CpwlFunction(std::size_t m, std::vector<AffinePiece> pieces, std::vector<DomainRow> domain)
    : m_(m), pieces_(std::move(pieces)), domain_(std::move(domain)) {
  if (pieces_.empty()) throw std::invalid_argument("CpwlFunction: at least one affine piece required");
  for (const auto& p : pieces_)
    if (p.a.size() != m_) throw std::invalid_argument("CpwlFunction: piece slope has wrong length");
  for (const auto& d : domain_)
    if (d.d.size() != m_) throw std::invalid_argument("CpwlFunction: domain row has wrong length");
  if (!is_feasible(this->domain())) throw std::invalid_argument("CpwlFunction: empty domain");
}

HPoly CpwlFunction::domain() const {
  HPoly h(m_);
  for (const auto& d : domain_) h.add_ineq(d.d, d.beta);
  return h;
}

CpwlFunction CpwlFunction::scaled(const Rational& c) const {
  if (sgn(c) <= 0) throw std::invalid_argument("CpwlFunction::scaled: factor must be positive");
  auto p = pieces_;
  for (auto& piece : p) {
    piece.a = scale(c, piece.a);
    piece.alpha *= c;
  }
  return CpwlFunction(m_, std::move(p), domain_);
}

Evaluation eval_and_active(const CpwlFunction& theta, const Vec& z) {
  if (z.size() != theta.dim()) throw DimensionError("eval_and_active: point length mismatch");
  Evaluation ev;
  bool inside = true;
  const auto& rows = theta.domain_rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Rational s = dot(rows[i].d, z);
    if (s > rows[i].beta) inside = false;
    if (s == rows[i].beta) ev.active.I.push_back(i);
  }
  if (!inside) {
    ev.active.I.clear();
    return ev;
  }
  const auto& pieces = theta.pieces();
  std::vector<Rational> vals;
  for (const auto& p : pieces) vals.push_back(dot(p.a, z) - p.alpha);
  Rational best = *std::max_element(vals.begin(), vals.end());
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i] == best) ev.active.K.push_back(i);
  ev.value = best;
  return ev;
}

namespace {

ActiveSets active_in_domain(const CpwlFunction& theta, const Vec& z) {
  Evaluation ev = eval_and_active(theta, z);
  if (!ev.value) throw DomainError("point " + to_string(z) + " lies outside dom theta");
  return ev.active;
}

}  // namespace

Subdifferentials subdifferentials(const CpwlFunction& theta, const Vec& z) {
  ActiveSets act = active_in_domain(theta, z);
  const std::size_t m = theta.dim();
  VPoly basic(m), singular = VPoly::cone(m);
  for (auto i : act.K) basic.points.push_back(theta.pieces()[i].a);
  for (auto i : act.I) {
    basic.rays.push_back(theta.domain_rows()[i].d);
    singular.rays.push_back(theta.domain_rows()[i].d);
  }
  return {convert_rep(convert_rep_v(basic)), convert_rep(convert_rep_v(singular))};
}

std::optional<Rational> directional_derivative(const CpwlFunction& theta, const Vec& z, const Vec& w) {
  ActiveSets act = active_in_domain(theta, z);
  if (w.size() != theta.dim()) throw DimensionError("directional_derivative: direction length mismatch");
  for (auto i : act.I)
    if (sgn(dot(theta.domain_rows()[i].d, w)) > 0) return std::nullopt;
  std::optional<Rational> best;
  for (auto i : act.K) {
    Rational s = dot(theta.pieces()[i].a, w);
    if (!best || s > *best) best = s;
  }
  return best;
}

namespace {

// Lifted system in (lambda_K, mu_I) representing v.
HPoly decomposition_system(const CpwlFunction& theta, const ActiveSets& act, const Vec& v) {
  const std::size_t m = theta.dim(), nk = act.K.size(), ni = act.I.size();
  HPoly h(nk + ni);
  for (std::size_t j = 0; j < nk + ni; ++j) h.add_ineq(scale(Rational(-1), unit(nk + ni, j)), 0);
  for (std::size_t r = 0; r < m; ++r) {
    Vec row = zeros(nk + ni);
    for (std::size_t j = 0; j < nk; ++j) row[j] = theta.pieces()[act.K[j]].a[r];
    for (std::size_t j = 0; j < ni; ++j) row[nk + j] = theta.domain_rows()[act.I[j]].d[r];
    h.add_eq(std::move(row), v[r]);
  }
  Vec sum = zeros(nk + ni);
  for (std::size_t j = 0; j < nk; ++j) sum[j] = 1;
  h.add_eq(std::move(sum), 1);
  return h;
}

}  // namespace

bool in_subdifferential(const CpwlFunction& theta, const Vec& z, const Vec& v) {
  Evaluation ev = eval_and_active(theta, z);
  if (!ev.value) return false;
  if (v.size() != theta.dim()) throw DimensionError("in_subdifferential: length mismatch");
  return is_feasible(decomposition_system(theta, ev.active, v));
}

SubgradientDecomposition make_decomposition(const CpwlFunction& theta, const Vec& z, const Vec& lambda,
                                            const Vec& mu) {
  ActiveSets act = active_in_domain(theta, z);
  const std::size_t m = theta.dim();
  if (lambda.size() != theta.pieces().size() || mu.size() != theta.domain_rows().size())
    throw DimensionError("make_decomposition: multiplier length mismatch");
  SubgradientDecomposition d;
  d.active = act;
  d.lambda = lambda;
  d.mu = mu;
  d.v1 = zeros(m);
  d.v2 = zeros(m);
  Rational total = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (sgn(lambda[i]) < 0) throw MembershipError("negative piece weight");
    if (sgn(lambda[i]) == 0) continue;
    if (!std::binary_search(act.K.begin(), act.K.end(), i))
      throw MembershipError("piece weight on an inactive piece");
    total += lambda[i];
    axpy(d.v1, lambda[i], theta.pieces()[i].a);
    d.J1.push_back(i);
  }
  if (total != 1) throw MembershipError("piece weights must sum to one");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (sgn(mu[i]) < 0) throw MembershipError("negative domain multiplier");
    if (sgn(mu[i]) == 0) continue;
    if (!std::binary_search(act.I.begin(), act.I.end(), i))
      throw MembershipError("domain multiplier on an inactive row");
    axpy(d.v2, mu[i], theta.domain_rows()[i].d);
    d.J2.push_back(i);
  }
  return d;
}

SubgradientDecomposition decompose_subgradient(const CpwlFunction& theta, const Vec& z, const Vec& v) {
  if (v.size() != theta.dim()) throw DimensionError("decompose_subgradient: length mismatch");
  ActiveSets act = active_in_domain(theta, z);
  HPoly sys = decomposition_system(theta, act, v);
  if (!is_feasible(sys)) throw MembershipError("v = " + to_string(v) + " is not a subgradient at z = " + to_string(z));
  const std::size_t nvar = sys.dim;
  // Lexicographic minimization, coordinate by coordinate.
  Vec best;
  for (std::size_t j = 0; j < nvar; ++j) {
    LpResult r = lp_maximize(sys, scale(Rational(-1), unit(nvar, j)));
    sys.add_eq(unit(nvar, j), -r.value);
    best = r.x;
  }
  if (nvar == 0) best = Vec();
  Vec lambda = zeros(theta.pieces().size()), mu = zeros(theta.domain_rows().size());
  for (std::size_t j = 0; j < act.K.size(); ++j) lambda[act.K[j]] = best[j];
  for (std::size_t j = 0; j < act.I.size(); ++j) mu[act.I[j]] = best[act.K.size() + j];
  return make_decomposition(theta, z, lambda, mu);
}

CriticalCone critical_cone(const CpwlFunction& theta, const SubgradientDecomposition& dec) {
  const std::size_t m = theta.dim();
  const auto& a = theta.pieces();
  const auto& d = theta.domain_rows();
  HPoly h(m);
  auto in = [](const std::vector<std::size_t>& s, std::size_t i) {
    return std::find(s.begin(), s.end(), i) != s.end();
  };
  for (auto i : dec.J1)
    for (auto j : dec.J1)
      if (i < j) h.add_eq(sub(a[i].a, a[j].a), 0);
  for (auto i : dec.J2) h.add_eq(d[i].d, 0);
  for (auto i : dec.active.K) {
    if (in(dec.J1, i)) continue;
    for (auto j : dec.J1) h.add_ineq(sub(a[i].a, a[j].a), 0);
  }
  for (auto i : dec.active.I)
    if (!in(dec.J2, i)) h.add_ineq(d[i].d, 0);
  return {h, dec};
}

CriticalCone critical_cone(const CpwlFunction& theta, const Vec& z, const Vec& v) {
  return critical_cone(theta, decompose_subgradient(theta, z, v));
}

HPoly domain_tangent_cone(const CpwlFunction& theta, const Vec& z) {
  ActiveSets act = active_in_domain(theta, z);
  HPoly t(theta.dim());
  for (auto i : act.I) t.add_ineq(theta.domain_rows()[i].d, 0);
  return t;
}

HPoly critical_cone_oracle(const CpwlFunction& theta, const Vec& z, const Vec& v) {
  if (!in_subdifferential(theta, z, v))
    throw MembershipError("v = " + to_string(v) + " is not a subgradient at z = " + to_string(z));
  ActiveSets act = active_in_domain(theta, z);
  const std::size_t m = theta.dim();
  HPoly tangent = domain_tangent_cone(theta, z);
  std::vector<HPoly> parts;
  VPoly hull = VPoly::cone(m);
  for (auto s : act.K) {
    HPoly piece = tangent;
    const Vec& as = theta.pieces()[s].a;
    for (auto i : act.K)
      if (i != s) piece.add_ineq(sub(theta.pieces()[i].a, as), 0);
    piece.add_eq(sub(v, as), 0);
    VPoly g = convert_rep(piece);
    hull.rays.insert(hull.rays.end(), g.rays.begin(), g.rays.end());
    hull.lines.insert(hull.lines.end(), g.lines.begin(), g.lines.end());
    parts.push_back(std::move(piece));
  }
  HPoly h = convert_rep_v(hull);
  if (!covered_by_union(h, parts))
    throw std::logic_error("critical_cone_oracle: union of pieces is not convex");
  return h;
}

}  // namespace critmult
