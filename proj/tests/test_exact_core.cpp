#include <doctest.h>

#include <cmath>
#include <random>

#include "critmult/linalg.hpp"
#include "critmult/polyhedron.hpp"
#include "helpers.hpp"

using namespace critmult;
using namespace testutil;

TEST_CASE("rational parsing and canonical text") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-2")) == "-2");
  CHECK(to_string(parse_rational(" 0/7 ")) == "0");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
  CHECK_THROWS_AS(parse_rational("2/-3"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("lp_feasible on a box returns the origin") {
  HPoly p(1);
  p.add_ineq(ivec({-1}), 0);
  p.add_ineq(ivec({1}), 1);
  auto r = lp_feasible(p);
  REQUIRE(std::holds_alternative<Feasible>(r));
  CHECK(std::get<Feasible>(r).witness == ivec({0}));
}

TEST_CASE("lp_feasible certifies contradictory halfspaces") {
  HPoly p(1);
  p.add_ineq(ivec({1}), -1);
  p.add_ineq(ivec({-1}), -1);
  auto r = lp_feasible(p);
  REQUIRE(std::holds_alternative<Infeasible>(r));
  CHECK(std::get<Infeasible>(r).certificate == ivec({1, 1}));
  CHECK(verify_farkas(p, std::get<Infeasible>(r).certificate));
}

TEST_CASE("lp_feasible finds v = (1,0,0) in the multiplier polytope of the three-constraint program") {
  HPoly p(3);
  for (std::size_t i = 0; i < 3; ++i) p.add_ineq(scale(Rational(-1), unit(3, i)), 0);
  p.add_eq(ivec({1, 1, -1}), 1);
  auto r = lp_feasible(p);
  REQUIRE(std::holds_alternative<Feasible>(r));
  CHECK(std::get<Feasible>(r).witness == ivec({1, 0, 0}));
}

TEST_CASE("lp_feasible rejects ragged input") {
  HPoly p(2);
  p.ineqs.push_back({ivec({1}), 0});
  CHECK_THROWS_AS(lp_feasible(p), DimensionError);
}

TEST_CASE("lp soundness on random systems") {
  std::mt19937_64 rng(11);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 3;
    HPoly p(n);
    std::size_t k = 1 + rng() % 5;
    for (std::size_t i = 0; i < k; ++i) p.add_ineq(random_vec(rng, n), small_rational(rng));
    if (rng() % 3 == 0) p.add_eq(random_vec(rng, n), small_rational(rng));
    auto r = lp_feasible(p);
    if (auto* f = std::get_if<Feasible>(&r)) {
      CHECK(p.contains(f->witness));
      ++feasible;
    } else {
      CHECK(verify_farkas(p, std::get<Infeasible>(r).certificate));
      ++infeasible;
    }
  }
  CHECK(feasible > 0);
  CHECK(infeasible > 0);
}

TEST_CASE("linear_kernel examples") {
  CHECK(linear_kernel(identity(2), 2).empty());
  CHECK(linear_kernel({zeros(3)}, 3).size() == 3);
  Matrix jt = transpose({ivec({1, 0, 0}), ivec({1, 0, 0}), ivec({-1, 0, 0})}, 3);
  auto k = linear_kernel(jt, 3);
  REQUIRE(k.size() == 2);
  CHECK(k[0] == ivec({1, -1, 0}));
  CHECK(k[1] == ivec({1, 0, 1}));
}

TEST_CASE("dual cones") {
  SUBCASE("orthant polar") {
    VPoly c = VPoly::cone(2, {ivec({1, 0}), ivec({0, 1})});
    HPoly d = dual_cone(c);
    VPoly expect = VPoly::cone(2, {ivec({-1, 0}), ivec({0, -1})});
    CHECK(set_equal(convert_rep(d), expect));
  }
  SUBCASE("dual of the whole plane is the origin") {
    VPoly c = VPoly::cone(2, {}, {ivec({1, 0}), ivec({0, 1})});
    VPoly d = convert_rep(dual_cone(c));
    CHECK(d.rays.empty());
    CHECK(d.lines.empty());
    CHECK(d.is_cone());
  }
  SUBCASE("G = {<a2 - a1, u> <= 0} has dual cone{(-1,1)}") {
    HPoly g(2);
    g.add_ineq(ivec({-1, 1}), 0);
    VPoly f = dual_cone_h(g);
    CHECK(set_equal(f, VPoly::cone(2, {ivec({-1, 1})})));
  }
  SUBCASE("non-cone input is rejected") {
    HPoly h(1);
    h.add_ineq(ivec({1}), 1);
    CHECK_THROWS_AS(dual_cone_h(h), std::invalid_argument);
    VPoly v(1);
    v.points.push_back(ivec({1}));
    CHECK_THROWS_AS(dual_cone(v), std::invalid_argument);
  }
}

TEST_CASE("convert_rep examples") {
  SUBCASE("unit square has four vertices") {
    HPoly sq(2);
    sq.add_ineq(ivec({1, 0}), 1);
    sq.add_ineq(ivec({-1, 0}), 0);
    sq.add_ineq(ivec({0, 1}), 1);
    sq.add_ineq(ivec({0, -1}), 0);
    VPoly v = convert_rep(sq);
    CHECK(v.points.size() == 4);
    CHECK(v.rays.empty());
    CHECK(v.lines.empty());
  }
  SUBCASE("simplex co{e1,e2} converts to v1+v2=1, v>=0") {
    VPoly s(2);
    s.points = {ivec({1, 0}), ivec({0, 1})};
    HPoly h = convert_rep_v(s);
    REQUIRE(h.eqs.size() == 1);
    CHECK(h.eqs[0].normal == ivec({1, 1}));
    CHECK(h.eqs[0].rhs == 1);
    HPoly expect(2);
    expect.add_eq(ivec({1, 1}), 1);
    expect.add_ineq(ivec({-1, 0}), 0);
    expect.add_ineq(ivec({0, -1}), 0);
    CHECK(set_equal(h, expect));
  }
  SUBCASE("critical cone {w1=0, w3=0, w2<=0} is the ray (0,-1,0)") {
    HPoly k(3);
    k.add_eq(ivec({1, 0, 0}), 0);
    k.add_eq(ivec({0, 0, 1}), 0);
    k.add_ineq(ivec({0, 1, 0}), 0);
    VPoly v = convert_rep(k);
    CHECK(v.is_cone());
    REQUIRE(v.rays.size() == 1);
    CHECK(v.rays[0] == ivec({0, -1, 0}));
    CHECK(v.lines.empty());
  }
  SUBCASE("empty input gives an explicit empty result") {
    HPoly e(2);
    e.add_ineq(ivec({1, 0}), -1);
    e.add_ineq(ivec({-1, 0}), -1);
    CHECK(convert_rep(e).is_empty());
    CHECK_FALSE(is_feasible(convert_rep_v(VPoly(2))));
  }
}

TEST_CASE("convert_rep round trip agrees on random membership") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = 2 + rng() % 2;
    HPoly p(n);
    std::size_t k = 2 + rng() % 5;
    for (std::size_t i = 0; i < k; ++i) p.add_ineq(random_vec(rng, n), small_rational(rng, 0, 3));
    if (rng() % 4 == 0) p.add_eq(random_vec(rng, n), 0);
    VPoly v = convert_rep(p);
    HPoly back = convert_rep_v(v);
    VPoly again = convert_rep(back);
    CHECK(again.points == v.points);
    CHECK(again.rays == v.rays);
    CHECK(again.lines == v.lines);
    for (int s = 0; s < 100; ++s) {
      Vec z = random_vec(rng, n, -4, 4, 3);
      CHECK(p.contains(z) == back.contains(z));
    }
  }
}

TEST_CASE("double duality on random cones") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + rng() % 3;
    std::vector<Vec> rays, lines;
    std::size_t k = 1 + rng() % 4;
    for (std::size_t i = 0; i < k; ++i) rays.push_back(random_vec(rng, n));
    if (rng() % 3 == 0) lines.push_back(random_vec(rng, n));
    VPoly c = VPoly::cone(n, rays, lines);
    HPoly polar = dual_cone(c);
    VPoly back = dual_cone_h(polar);
    CHECK(set_equal(back, c));
  }
}

namespace {

std::size_t brute_force_faces(const HPoly& p) {
  const std::size_t k = p.ineqs.size();
  std::set<std::string> seen;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    HPoly f = p;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i)) f.add_eq(p.ineqs[i].normal, p.ineqs[i].rhs);
    if (!is_feasible(f)) continue;
    seen.insert(canonical_key(f));
  }
  return seen.size();
}

}  // namespace

TEST_CASE("enumerate_faces examples") {
  HPoly orthant(2);
  orthant.add_ineq(ivec({-1, 0}), 0);
  orthant.add_ineq(ivec({0, -1}), 0);
  CHECK(enumerate_faces(orthant).size() == 4);

  HPoly half(2);
  half.add_ineq(ivec({0, 1}), 0);
  CHECK(enumerate_faces(half).size() == 2);

  HPoly k(3);
  k.add_eq(ivec({1, 0, 0}), 0);
  k.add_eq(ivec({0, 0, 1}), 0);
  k.add_ineq(ivec({0, 1, 0}), 0);
  CHECK(enumerate_faces(k).size() == 2);
}

TEST_CASE("enumerate_faces matches brute force and carriers are nested") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + rng() % 3;
    HPoly p(n);
    std::size_t k = 1 + rng() % 4;
    for (std::size_t i = 0; i < k; ++i) p.add_ineq(random_vec(rng, n), rng() % 2 ? Rational(0) : small_rational(rng, 0, 2));
    auto faces = enumerate_faces(p);
    CHECK(faces.size() == brute_force_faces(p));
    for (const auto& f : faces) {
      CHECK(is_feasible(f.carrier));
      CHECK(subset(f.carrier, p));
    }
  }
}

TEST_CASE("project_out examples") {
  SUBCASE("triangle onto x") {
    HPoly t(2);
    t.add_ineq(ivec({1, 1}), 1);
    t.add_ineq(ivec({-1, 0}), 0);
    t.add_ineq(ivec({0, -1}), 0);
    HPoly x = project_out(t, {1});
    HPoly expect(1);
    expect.add_ineq(ivec({1}), 1);
    expect.add_ineq(ivec({-1}), 0);
    CHECK(set_equal(x, expect));
    CHECK(x.ineqs.size() == 2);
  }
  SUBCASE("criticality system at the noncritical vertex projects to xi = 0") {
    // variables (xi1, xi2, xi3, eta)
    HPoly s(4);
    s.add_eq(ivec({1, 0, 0, 0}), 0);
    s.add_eq(ivec({0, 4, 0, 0}), 0);
    s.add_eq(ivec({0, 0, 2, 0}), 0);
    HPoly xi = project_out(s, {3});
    CHECK(xi.dim == 3);
    VPoly v = convert_rep(xi);
    CHECK(v.rays.empty());
    CHECK(v.lines.empty());
    CHECK(xi.eqs.size() == 3);
  }
  SUBCASE("unconstrained coordinate gives a full line") {
    HPoly c(2);
    c.add_ineq(ivec({0, 1}), 0);
    HPoly x = project_out(c, {1});
    VPoly v = convert_rep(x);
    CHECK(v.lines.size() == 1);
  }
}

TEST_CASE("distance_point_polyhedron examples") {
  HPoly half(2);
  half.add_ineq(ivec({1, 0}), 0);
  CHECK(distance_point_polyhedron({2.0, 0.0}, half) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(distance_point_polyhedron({-1.0, 5.0}, half) == 0.0);
  HPoly neg_orthant(2);
  neg_orthant.add_ineq(ivec({1, 0}), 0);
  neg_orthant.add_ineq(ivec({0, 1}), 0);
  CHECK(std::abs(distance_point_polyhedron({1.0, 1.0}, neg_orthant) - std::sqrt(2.0)) < 1e-12);
  CHECK(std::isinf(distance_point_polyhedron({0.0, 0.0}, HPoly::empty_set(2))));
}

TEST_CASE("covered_by_union decides exact coverage") {
  HPoly line(1);
  HPoly left(1), right(1), right_open(1);
  left.add_ineq(ivec({1}), 0);
  right.add_ineq(ivec({-1}), 0);
  right_open.add_ineq(ivec({-1}), -1);
  std::vector<HPoly> both{left, right};
  std::vector<HPoly> gap{left, right_open};
  CHECK(covered_by_union(line, both));
  CHECK_FALSE(covered_by_union(line, gap));
}
