#include <doctest.h>

#include <algorithm>
#include <random>

#include "critmult/graph.hpp"
#include "critmult/polyhedron.hpp"
#include "identity_checks.hpp"

using namespace critmult;
using namespace testutil;

namespace {

CpwlFunction max2() { return CpwlFunction(2, {{ivec({1, 0}), 0}, {ivec({0, 1}), 0}}, {}); }

CpwlFunction nonpositive_orthant(std::size_t m) {
  std::vector<DomainRow> rows;
  for (std::size_t i = 0; i < m; ++i) rows.push_back({unit(m, i), 0});
  return CpwlFunction(m, {{zeros(m), 0}}, rows);
}

CpwlFunction affine(const Vec& a, const Rational& alpha) { return CpwlFunction(a.size(), {{a, alpha}}, {}); }

HPoly hpoly(std::size_t dim, std::vector<Vec> ineqs, std::vector<Vec> eqs = {}) {
  HPoly p(dim);
  for (auto& r : ineqs) p.add_ineq(std::move(r), 0);
  for (auto& r : eqs) p.add_eq(std::move(r), 0);
  return p;
}

VPoly polytope(std::size_t dim, std::vector<Vec> points) {
  VPoly v(dim);
  v.points = std::move(points);
  return v;
}

bool union_is(const std::vector<HPoly>& pieces, const HPoly& c) { return !pieces.empty() && union_equals(pieces, c); }

}  // namespace

TEST_CASE("eval_and_active examples") {
  auto e = eval_and_active(max2(), ivec({1, 3}));
  CHECK(e.value == Rational(3));
  CHECK(e.active.K == std::vector<std::size_t>{1});
  CHECK(e.active.I.empty());

  e = eval_and_active(nonpositive_orthant(2), ivec({0, -1}));
  CHECK(e.value == Rational(0));
  CHECK(e.active.K == std::vector<std::size_t>{0});
  CHECK(e.active.I == std::vector<std::size_t>{0});

  CHECK_FALSE(eval_and_active(nonpositive_orthant(2), ivec({1, 0})).value.has_value());
}

TEST_CASE("constructor rejects an empty domain and missing pieces") {
  CHECK_THROWS_AS(CpwlFunction(1, {{ivec({0}), 0}}, {{ivec({1}), -1}, {ivec({-1}), -1}}), std::invalid_argument);
  CHECK_THROWS_AS(CpwlFunction(1, {}, {}), std::invalid_argument);
}

TEST_CASE("subdifferential examples") {
  auto s = subdifferentials(max2(), ivec({0, 0}));
  CHECK(set_equal(s.basic, polytope(2, {ivec({1, 0}), ivec({0, 1})})));
  CHECK(set_equal(s.singular, VPoly::cone(2)));

  s = subdifferentials(affine(ivec({2, -1}), 5), ivec({7, 7}));
  CHECK(set_equal(s.basic, polytope(2, {ivec({2, -1})})));
  CHECK(set_equal(s.singular, VPoly::cone(2)));

  s = subdifferentials(nonpositive_orthant(2), ivec({0, 0}));
  const VPoly orthant = VPoly::cone(2, {ivec({1, 0}), ivec({0, 1})});
  CHECK(set_equal(s.basic, orthant));
  CHECK(set_equal(s.singular, orthant));

  CHECK_THROWS_AS(subdifferentials(nonpositive_orthant(2), ivec({1, 0})), DomainError);
}

TEST_CASE("subgradient inequality holds for every basic subgradient vertex") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> dim(1, 3), l(1, 4), p(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_graph_point(rng, dim(rng), l(rng), p(rng));
    const auto base = eval_and_active(s.theta, s.z).value;
    REQUIRE(base);
    const VPoly basic = subdifferentials(s.theta, s.z).basic;
    int tested = 0;
    for (int k = 0; k < 200 && tested < 50; ++k) {
      Vec z2 = add(s.z, random_vec(rng, s.theta.dim(), -3, 3, 2));
      const auto value = eval_and_active(s.theta, z2).value;
      if (!value) continue;
      ++tested;
      for (const auto& vert : basic.points) CHECK(*value >= *base + dot(vert, sub(z2, s.z)));
    }
  }
}

TEST_CASE("directional derivative examples") {
  CHECK(directional_derivative(max2(), ivec({0, 0}), ivec({1, 2})) == Rational(2));
  CHECK_FALSE(directional_derivative(nonpositive_orthant(1), ivec({0}), ivec({1})).has_value());
  CHECK(directional_derivative(nonpositive_orthant(1), ivec({0}), ivec({-1})) == Rational(0));
}

TEST_CASE("subgradient decomposition examples") {
  auto d = decompose_subgradient(max2(), ivec({0, 0}), vec({"1/2", "1/2"}));
  CHECK(d.lambda == vec({"1/2", "1/2"}));
  CHECK(is_zero(d.v2));
  CHECK(d.J1 == std::vector<std::size_t>{0, 1});
  CHECK(d.J2.empty());

  d = decompose_subgradient(nonpositive_orthant(2), ivec({0, 0}), ivec({1, 0}));
  CHECK(d.lambda == ivec({1}));
  CHECK(d.mu == ivec({1, 0}));
  CHECK(d.J1 == std::vector<std::size_t>{0});
  CHECK(d.J2 == std::vector<std::size_t>{0});

  CHECK_THROWS_AS(decompose_subgradient(max2(), ivec({0, 0}), ivec({1, 1})), MembershipError);
}

TEST_CASE("duplicated domain rows give the same critical cone for either decomposition") {
  CpwlFunction theta(2, {{zeros(2), 0}}, {{ivec({1, 0}), 0}, {ivec({1, 0}), 0}, {ivec({0, 1}), 0}});
  const Vec z = zeros(2), v = ivec({1, 0});
  auto first = make_decomposition(theta, z, ivec({1}), ivec({1, 0, 0}));
  auto second = make_decomposition(theta, z, ivec({1}), ivec({0, 1, 0}));
  CHECK(first.J2 != second.J2);
  CHECK(set_equal(critical_cone(theta, first).hrep, critical_cone(theta, second).hrep));
  CHECK(set_equal(critical_cone(theta, first).hrep, critical_cone(theta, z, v).hrep));
  CHECK_THROWS_AS(make_decomposition(theta, z, ivec({1}), ivec({-1, 0, 0})), MembershipError);
}

TEST_CASE("critical cone examples and the brute-force oracle") {
  const auto orthant = nonpositive_orthant(3);
  const HPoly expected = hpoly(3, {ivec({0, 1, 0})}, {ivec({1, 0, 0}), ivec({0, 0, 1})});
  CHECK(set_equal(critical_cone(orthant, zeros(3), ivec({3, 0, 2})).hrep, expected));
  CHECK(set_equal(critical_cone_oracle(orthant, zeros(3), ivec({3, 0, 2})), expected));

  CHECK(set_equal(critical_cone(affine(ivec({1, -1}), 0), ivec({4, 4}), ivec({1, -1})).hrep, HPoly::universe(2)));
  CHECK(set_equal(critical_cone_oracle(affine(ivec({1, -1}), 0), ivec({4, 4}), ivec({1, -1})), HPoly::universe(2)));

  const HPoly half = hpoly(2, {ivec({-1, 1})});
  CHECK(set_equal(critical_cone(max2(), zeros(2), ivec({1, 0})).hrep, half));
  CHECK(set_equal(critical_cone_oracle(max2(), zeros(2), ivec({1, 0})), half));
}

TEST_CASE("critical cone formula equals the oracle on random instances") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 3), l(1, 4), p(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_graph_point(rng, dim(rng), l(rng), p(rng));
    CAPTURE(trial);
    CHECK(check_critical_cone_oracle(s) == "");
  }
}

TEST_CASE("Farkas duality of the index-set cones") {
  CHECK(set_equal(dual_cone_h(hpoly(2, {ivec({-1, 1})})), VPoly::cone(2, {ivec({-1, 1})})));
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    CAPTURE(trial);
    CHECK(check_farkas(rng) == "");
  }
}

TEST_CASE("graphical derivative of the indicator of the half-line") {
  const auto theta = nonpositive_orthant(1);
  const SubdifferentialGraph g(theta);
  const Vec o = zeros(1);
  CHECK(union_is(graph_tangent_oracle(g, o, o, ivec({-1})), hpoly(1, {}, {ivec({1})})));
  CHECK(union_is(graph_tangent_oracle(g, o, o, ivec({0})), hpoly(1, {ivec({-1})})));
  CHECK(graph_tangent_oracle(g, o, o, ivec({1})).empty());

  const SubdifferentialGraph flat(affine(ivec({1, 2}), 0));
  CHECK(union_is(graph_tangent_oracle(flat, ivec({3, 1}), ivec({1, 2}), ivec({5, -2})),
                 hpoly(2, {}, {ivec({1, 0}), ivec({0, 1})})));
}

TEST_CASE("regular coderivative closed form") {
  const auto theta = nonpositive_orthant(1);
  const Vec o = zeros(1);
  auto r = regular_coderivative(theta, o, o, ivec({2}));
  REQUIRE(r);
  CHECK(set_equal(*r, VPoly::cone(1, {ivec({1})})));
  CHECK_FALSE(regular_coderivative(theta, o, o, ivec({-1})).has_value());

  r = regular_coderivative(affine(ivec({1, 2}), 0), ivec({3, 1}), ivec({1, 2}), ivec({5, -2}));
  REQUIRE(r);
  CHECK(set_equal(*r, VPoly::cone(2)));

  // max(z1, z2) at the origin with v = e1: K = {u2 <= u1}, K* = {w1 + w2 = 0, w2 >= 0}
  r = regular_coderivative(max2(), zeros(2), ivec({1, 0}), ivec({0, 0}));
  REQUIRE(r);
  CHECK(set_equal(convert_rep_v(*r), hpoly(2, {ivec({0, -1})}, {ivec({1, 1})})));
}

TEST_CASE("limiting coderivative examples") {
  const SubdifferentialGraph g(nonpositive_orthant(1));
  const Vec o = zeros(1);
  CHECK(union_is(limiting_coderivative(g, o, o, o), HPoly::universe(1)));

  const SubdifferentialGraph flat(affine(ivec({1, 2}), 0));
  for (const auto& u : {ivec({0, 0}), ivec({1, -3})})
    CHECK(union_is(limiting_coderivative(flat, ivec({3, 1}), ivec({1, 2}), u), hpoly(2, {}, {ivec({1, 0}), ivec({0, 1})})));
}

TEST_CASE("graphical derivative is strictly inside the limiting coderivative for the half-line at u = 0") {
  const SubdifferentialGraph g(nonpositive_orthant(1));
  const Vec o = zeros(1);
  const auto d = graph_tangent_oracle(g, o, o, o);
  const auto lim = limiting_coderivative(g, o, o, o);
  for (const auto& piece : d) CHECK(covered_by_union(piece, lim));
  CHECK_FALSE(covered_by_union(HPoly::universe(1), d));
}

TEST_CASE("coderivative at zero contains the affine hull of the subdifferential") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> dim(1, 3), l(1, 3), p(0, 2);
  for (int trial = 0; trial < 15; ++trial) {
    auto s = random_graph_point(rng, dim(rng), l(rng), p(rng));
    const std::size_t m = s.theta.dim();
    const SubdifferentialGraph g(s.theta);
    const VPoly basic = subdifferentials(s.theta, s.z).basic;
    // aff of the subdifferential, translated to pass through the origin, is spanned by differences
    // of vertices and by the rays; the coderivative is a cone so it contains the linear span.
    VPoly span(m);
    span.points.push_back(zeros(m));
    for (const auto& pt : basic.points) span.lines.push_back(sub(pt, basic.points.front()));
    for (const auto& r : basic.rays) span.lines.push_back(r);
    for (const auto& l2 : basic.lines) span.lines.push_back(l2);
    std::erase_if(span.lines, [](const Vec& x) { return is_zero(x); });
    CHECK(covered_by_union(convert_rep_v(span), limiting_coderivative(g, s.z, s.v, zeros(m))));
  }
}

TEST_CASE("graphical derivative and regular coderivative identities on random instances") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> dim(1, 3), l(1, 3), p(0, 2);
  DerivativeIdentityCounts counts;
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_graph_point(rng, dim(rng), l(rng), p(rng));
    CAPTURE(trial);
    CHECK(check_derivative_identities(s, &counts) == "");
  }
  CHECK(counts.u_checked > 20);
}

TEST_CASE("indices positive in the representation stay active on nearby graph points") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> dim(1, 3), l(1, 4), p(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_graph_point(rng, dim(rng), l(rng), p(rng));
    const std::size_t m = s.theta.dim();
    const SubdifferentialGraph g(s.theta);
    const auto lex = decompose_subgradient(s.theta, s.z, s.v);
    const auto own = make_decomposition(s.theta, s.z, s.lambda, s.mu);
    for (const GraphPiece* piece : g.pieces_at(s.z, s.v)) {
      // a point of the z-part near z: move a small step toward its vertices and along its rays
      const VPoly zp = convert_rep(piece->z_part);
      Vec dir = zeros(m);
      for (const auto& pt : zp.points) dir = add(dir, sub(pt, s.z));
      for (const auto& r : zp.rays) dir = add(dir, r);
      const Rational t(1, 1000 * static_cast<long>(zp.points.size() + zp.rays.size()));
      const Vec z2 = add(s.z, scale(t, dir));
      REQUIRE(piece->z_part.contains(z2));
      const auto act = eval_and_active(s.theta, z2).active;
      for (const auto* dec : {&lex, &own}) {
        for (auto i : dec->J1) CHECK(std::find(act.K.begin(), act.K.end(), i) != act.K.end());
        for (auto j : dec->J2) CHECK(std::find(act.I.begin(), act.I.end(), j) != act.I.end());
      }
    }
  }
}
