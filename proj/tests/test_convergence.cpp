#include <doctest.h>

#include <cmath>

#include "corpus_util.hpp"
#include "critmult/convergence.hpp"
#include "helpers.hpp"

using namespace critmult;
using namespace testutil;

namespace {

VariationalSystem scaled_system(const VariationalSystem& vs, const Rational& c) {
  std::vector<PolyExpr> f;
  for (const auto& p : vs.f().components()) f.push_back(p * c);
  return VariationalSystem(PolyMap(vs.n(), f), vs.phi(), vs.theta().scaled(c));
}

}  // namespace

TEST_CASE("rate classification of model sequences") {
  std::vector<double> geo, quad{1e-1}, flat;
  for (int k = 0; k < 12; ++k) geo.push_back(std::ldexp(1.0, -k));
  for (int k = 0; k < 3; ++k) quad.push_back(quad.back() * quad.back());
  for (int k = 0; k < 8; ++k) flat.push_back(1e-3);

  auto r = rate_classify(geo);
  CHECK(r.kind == RateKind::Linear);
  CHECK(r.ratio == doctest::Approx(0.5));
  CHECK(r.fitted_ratio == doctest::Approx(0.5));

  // 1e-1, 1e-2, 1e-4, 1e-8 then zero
  quad.push_back(0);
  r = rate_classify(quad);
  CHECK(r.kind == RateKind::Superlinear);
  CHECK(r.finite_termination);

  std::vector<double> fast;
  fast = {1, 0.5, 0.2, 0.05, 5e-3, 1e-4, 5e-7};
  r = rate_classify(fast);
  CHECK(r.kind == RateKind::Superlinear);
  CHECK_FALSE(r.finite_termination);

  CHECK(rate_classify(flat).kind == RateKind::Stalled);
  CHECK_THROWS_AS(rate_classify(std::vector<double>{1, 0.5, 0.25}), std::invalid_argument);
  CHECK_THROWS_AS(rate_classify(std::vector<double>{1}), std::invalid_argument);
}

TEST_CASE("linear constraints and quadratic objective: one Newton step") {
  const auto vs = corpus_problem("linquad").system();
  const auto t = newton_kkt_run(vs, ivec({0, 1}), Iterate{{0.3, 0.4}, {0.2}});
  REQUIRE(t.converged);
  REQUIRE(t.distances.size() >= 2);
  CHECK(t.distances[1] < 1e-12);
  CHECK(rate_classify(t).kind == RateKind::Superlinear);
}

TEST_CASE("one-dimensional instance converges superlinearly") {
  const auto vs = corpus_problem("onedim").system();
  const auto t = newton_kkt_run(vs, zeros(1), Iterate{{0.1}, {0.9}});
  REQUIRE(t.converged);
  CHECK(t.distances.size() <= 6);
  CHECK(t.distances.back() < 1e-12);
  CHECK(rate_classify(t).kind == RateKind::Superlinear);

  const auto s = converge_experiment(vs, zeros(1), ivec({1}), 20, 0.1, 7);
  CHECK(s.superlinear == 20);
}

TEST_CASE("critical multiplier attracts Newton iterates at a linear rate") {
  const auto vs = corpus_problem("three_constraints").system();
  const auto s = converge_experiment(vs, zeros(3), ivec({3, 0, 2}), 20, 0.1, 7);
  CHECK(s.linear + s.superlinear + s.stalled + s.unclassified == 20);
  CHECK(s.linear >= 12);
  CHECK(s.median_linear_ratio >= 0.2);
  CHECK(s.median_linear_ratio < 1);
}

TEST_CASE("experiments are reproducible across thread counts") {
  const auto vs = corpus_problem("three_constraints").system();
  const auto a = converge_experiment(vs, zeros(3), ivec({3, 0, 2}), 6, 0.1, 99, 50, 1e-12, 1);
  const auto b = converge_experiment(vs, zeros(3), ivec({3, 0, 2}), 6, 0.1, 99, 50, 1e-12, 4);
  REQUIRE(a.runs.size() == b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) CHECK(a.runs[i].distances == b.runs[i].distances);
  CHECK_THROWS_AS(converge_experiment(vs, zeros(3), ivec({3, 0, 2}), 0, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(converge_experiment(vs, zeros(3), ivec({3, 0, 2}), 3, 0, 1), std::invalid_argument);
}

TEST_CASE("primal iterates are unchanged when f, theta and v are scaled together") {
  const auto vs = corpus_problem("onedim").system();
  const auto scaled = scaled_system(vs, Rational(3));
  const auto a = newton_kkt_run(vs, zeros(1), Iterate{{0.1}, {0.9}});
  const auto b = newton_kkt_run(scaled, zeros(1), Iterate{{0.1}, {2.7}});
  REQUIRE(a.iterates.size() == b.iterates.size());
  for (std::size_t k = 0; k < a.iterates.size(); ++k) {
    CHECK(a.iterates[k].x[0] == doctest::Approx(b.iterates[k].x[0]));
    CHECK(3 * a.iterates[k].v[0] == doctest::Approx(b.iterates[k].v[0]));
  }
}

TEST_CASE("rate classification ignores rounding noise below working precision") {
  Trajectory t;
  for (int k = 0; k < 30; ++k) t.distances.push_back(0.1 * std::ldexp(1.0, -k));
  for (double noise : {3e-11, 1e-11, 4e-11, 4e-11, 5e-11, 6e-11}) t.distances.push_back(noise);
  auto r = rate_classify(t);
  CHECK(r.kind == RateKind::Linear);
  CHECK(r.ratio == doctest::Approx(0.5));
  // the raw sequence has a noisy tail
  CHECK(rate_classify(t.distances).kind == RateKind::Stalled);

  Trajectory quick;
  quick.distances = {0.1, 1e-3, 1e-9, 2e-12, 1e-12, 3e-12, 1e-12};
  r = rate_classify(quick);
  CHECK(r.kind == RateKind::Superlinear);
}

TEST_CASE("rate classification is invariant under scaling of the distances") {
  std::vector<std::vector<double>> seqs{{1, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625},
                                        {1, 0.5, 0.2, 0.05, 5e-3, 1e-4, 5e-7},
                                        {1, 0.9, 0.95, 1.0, 1.1, 1.0, 1.05},
                                        {1, 0.3, 0.2, 0.1, 0.09, 0.03, 0.01}};
  for (const auto& s : seqs)
    for (double c : {1e-3, 7.0, 1e4}) {
      std::vector<double> scaled;
      for (double d : s) scaled.push_back(c * d);
      const auto a = rate_classify(s), b = rate_classify(scaled);
      CHECK(a.kind == b.kind);
      CHECK(a.ratio == doctest::Approx(b.ratio));
    }
}
