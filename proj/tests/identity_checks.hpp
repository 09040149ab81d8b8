#pragma once

#include <optional>
#include <string>

#include "critmult/graph.hpp"
#include "critmult/polyhedron.hpp"
#include "random_instances.hpp"

// Exact identity checks shared by the unit tests and the acceptance binary. Each returns an
// empty string on success and a short description of the first failure otherwise.
namespace testutil {

inline std::string check_critical_cone_oracle(const GraphSample& s) {
  using namespace critmult;
  const HPoly formula = critical_cone(s.theta, s.z, s.v).hrep;
  const HPoly oracle = critical_cone_oracle(s.theta, s.z, s.v);
  if (!set_equal(formula, oracle)) return "critical cone " + formula.str() + " vs oracle " + oracle.str();
  const auto alt = make_decomposition(s.theta, s.z, s.lambda, s.mu);
  if (!set_equal(critical_cone(s.theta, alt).hrep, formula)) return "critical cone depends on the decomposition";
  return {};
}

// Polar of G from the (P1,Q1),(P2,Q2) construction against the generators of F.
inline std::string check_farkas(std::mt19937_64& rng) {
  using namespace critmult;
  std::uniform_int_distribution<std::size_t> dim(1, 4), t1(1, 4), t2(0, 3);
  std::uniform_int_distribution<int> pick(0, 2);
  const std::size_t m = dim(rng), l = t1(rng), p = t2(rng);
  std::vector<Vec> a, d;
  for (std::size_t i = 0; i < l; ++i) a.push_back(random_vec(rng, m, -2, 2, 2));
  for (std::size_t i = 0; i < p; ++i) d.push_back(random_vec(rng, m, -2, 2, 2));
  // 0: outside Q, 1: in Q minus P, 2: in P
  std::vector<int> role1(l), role2(p);
  for (auto& r : role1) r = pick(rng);
  for (auto& r : role2) r = pick(rng);
  role1[0] = 2;
  HPoly g(m);
  VPoly f(m);
  f.points.push_back(zeros(m));
  std::vector<std::size_t> p1;
  for (std::size_t i = 0; i < l; ++i)
    if (role1[i] == 2) p1.push_back(i);
  for (std::size_t i = 0; i < l; ++i) {
    if (role1[i] == 2 && i != p1.front()) {
      g.add_eq(sub(a[i], a[p1.front()]), 0);
      f.lines.push_back(sub(a[i], a[p1.front()]));
    }
    if (role1[i] == 1)
      for (auto j : p1) {
        g.add_ineq(sub(a[i], a[j]), 0);
        f.rays.push_back(sub(a[i], a[j]));
      }
  }
  for (std::size_t i = 0; i < p; ++i) {
    if (role2[i] == 2) {
      g.add_eq(d[i], 0);
      f.lines.push_back(d[i]);
    }
    if (role2[i] == 1) {
      g.add_ineq(d[i], 0);
      f.rays.push_back(d[i]);
    }
  }
  std::erase_if(f.rays, [](const Vec& r) { return is_zero(r); });
  std::erase_if(f.lines, [](const Vec& r) { return is_zero(r); });
  if (!set_equal(dual_cone_h(g), f)) return "polar of " + g.str() + " differs from " + f.str();
  return {};
}

// Points of K: the origin, each generator, the sum of all of them.
inline std::vector<critmult::Vec> sample_cone(const critmult::HPoly& k) {
  using namespace critmult;
  const VPoly gens = convert_rep(k);
  std::vector<Vec> out{zeros(k.dim)};
  Vec sum = zeros(k.dim);
  for (const auto& r : gens.rays) {
    out.push_back(r);
    sum = add(sum, r);
  }
  for (const auto& l : gens.lines) {
    out.push_back(l);
    out.push_back(neg(l));
    sum = add(sum, l);
  }
  out.push_back(sum);
  return out;
}

struct DerivativeIdentityCounts {
  int u_checked = 0;
  int strict_inclusions = 0;  // u with the graphical derivative a proper subset of the limiting coderivative
};

// Domain equality dom D = -dom D^ = K, the graphical derivative as the orthogonal part of the
// regular coderivative on K, the closed form of the regular coderivative against the normal cone
// oracle, and D(u) inside the limiting coderivative.
inline std::string check_derivative_identities(const GraphSample& s, DerivativeIdentityCounts* counts = nullptr) {
  using namespace critmult;
  const std::size_t m = s.theta.dim();
  const SubdifferentialGraph graph(s.theta);
  const HPoly k = critical_cone(s.theta, s.z, s.v).hrep;

  std::vector<std::size_t> w_coords;
  for (std::size_t i = m; i < 2 * m; ++i) w_coords.push_back(i);
  std::vector<HPoly> dom_pieces;
  for (const auto& t : graph_tangent_cones(graph, s.z, s.v)) dom_pieces.push_back(project_out(t, w_coords));
  if (!union_equals(dom_pieces, k)) return "domain of the graphical derivative differs from K";

  HPoly minus_k(m);
  for (const auto& c : k.eqs) minus_k.add_eq(neg(c.normal), c.rhs);
  for (const auto& c : k.ineqs) minus_k.add_ineq(neg(c.normal), c.rhs);
  if (!set_equal(regular_coderivative_domain(s.theta, s.z, s.v), minus_k))
    return "domain of the regular coderivative differs from -K";

  for (const Vec& u : sample_cone(k)) {
    const auto reg = regular_coderivative(s.theta, s.z, s.v, neg(u));
    if (!reg) return "regular coderivative empty at -u for u = " + to_string(u);
    const auto reg_oracle = regular_coderivative_oracle(graph, s.z, s.v, neg(u));
    if (!reg_oracle || !set_equal(convert_rep_v(*reg), *reg_oracle))
      return "closed-form regular coderivative differs from the normal cone oracle at u = " + to_string(u);
    HPoly target = convert_rep_v(*reg);
    target.add_eq(u, 0);
    const auto d = graph_tangent_oracle(graph, s.z, s.v, u);
    if (d.empty() || !union_equals(d, target))
      return "graphical derivative differs from the orthogonal part at u = " + to_string(u);
    const auto lim = limiting_coderivative(graph, s.z, s.v, u);
    for (const auto& piece : d)
      if (!covered_by_union(piece, lim)) return "graphical derivative leaves the limiting coderivative at u = " + to_string(u);
    if (counts) {
      ++counts->u_checked;
      bool strict = false;
      for (const auto& piece : lim)
        if (!covered_by_union(piece, d)) strict = true;
      counts->strict_inclusions += strict;
    }
  }
  return {};
}

}  // namespace testutil
