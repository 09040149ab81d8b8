#pragma once

#include <algorithm>
#include <random>

#include "critmult/varsys.hpp"
#include "helpers.hpp"

namespace testutil {

struct GraphSample {
  critmult::CpwlFunction theta;
  Vec z;
  Vec v;
  Vec lambda;  // the representation v was built from
  Vec mu;
};

// theta with a random active pattern at an integer point z, and v drawn from the
// subdifferential there with some zero weights so that J+ is a proper subset of K.
inline GraphSample random_graph_point(std::mt19937_64& rng, std::size_t m, std::size_t l, std::size_t p) {
  using namespace critmult;
  std::uniform_int_distribution<int> coin(0, 1), weight(0, 3);
  for (;;) {
    Vec z = random_vec(rng, m, -2, 2, 1);
    std::vector<AffinePiece> pieces;
    std::vector<bool> active(l);
    for (std::size_t i = 0; i < l; ++i) {
      Vec a = (i > 0 && coin(rng) && coin(rng)) ? pieces[i - 1].a : random_vec(rng, m, -2, 2, 1);
      active[i] = i == 0 || coin(rng);
      Rational alpha = dot(a, z) + (active[i] ? Rational(0) : Rational(1 + weight(rng) % 2));
      pieces.push_back({a, alpha});
    }
    std::vector<DomainRow> rows;
    std::vector<bool> tight(p);
    for (std::size_t j = 0; j < p; ++j) {
      Vec d = random_vec(rng, m, -2, 2, 1);
      if (is_zero(d)) d = unit(m, j % m);
      tight[j] = coin(rng);
      rows.push_back({d, dot(d, z) + (tight[j] ? Rational(0) : Rational(1))});
    }
    Vec lambda = zeros(l), mu = zeros(p);
    Rational total = 0;
    for (std::size_t i = 0; i < l; ++i)
      if (active[i]) {
        lambda[i] = weight(rng);
        total += lambda[i];
      }
    if (total == 0) {
      lambda[0] = 1;
      total = 1;
    }
    for (auto& t : lambda) t /= total;
    for (std::size_t j = 0; j < p; ++j)
      if (tight[j]) {
        mu[j] = Rational(weight(rng), 2);
        mu[j].canonicalize();
      }
    Vec v = zeros(m);
    for (std::size_t i = 0; i < l; ++i) axpy(v, lambda[i], pieces[i].a);
    for (std::size_t j = 0; j < p; ++j) axpy(v, mu[j], rows[j].d);
    try {
      return {CpwlFunction(m, pieces, rows), z, v, lambda, mu};
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
}

struct SystemSample {
  critmult::VariationalSystem vs;
  Vec x;
  Vec v;
};

// A variational system with x = 0 and v a multiplier there: Phi has a random affine part and
// random quadratic terms; f is affine and chosen so that Psi(0, v) = 0.
inline SystemSample random_system(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t l,
                                  std::size_t p) {
  using namespace critmult;
  std::uniform_int_distribution<int> coin(0, 2), small(-1, 1);
  GraphSample g = random_graph_point(rng, m, l, p);
  const auto mono = [&](Rational c, std::vector<unsigned> e) { return Monomial{std::move(c), std::move(e)}; };
  std::vector<PolyExpr> phi;
  Matrix jac = zero_matrix(m, n);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<Monomial> terms;
    terms.push_back(mono(g.z[k], std::vector<unsigned>(n, 0)));
    for (std::size_t i = 0; i < n; ++i) {
      if (coin(rng) == 0) continue;
      jac[k][i] = small(rng);
      std::vector<unsigned> e(n, 0);
      e[i] = 1;
      terms.push_back(mono(jac[k][i], e));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        if (coin(rng) != 0) continue;
        std::vector<unsigned> e(n, 0);
        ++e[i];
        ++e[j];
        terms.push_back(mono(Rational(small(rng)), e));
      }
    phi.push_back(PolyExpr(n, terms));
  }
  Vec c0 = neg(mat_t_vec(jac, g.v, n));
  std::vector<PolyExpr> f;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Monomial> terms{mono(c0[i], std::vector<unsigned>(n, 0))};
    for (std::size_t j = 0; j < n; ++j) {
      if (coin(rng) == 0) continue;
      std::vector<unsigned> e(n, 0);
      e[j] = 1;
      terms.push_back(mono(Rational(small(rng)), e));
    }
    f.push_back(PolyExpr(n, terms));
  }
  return {VariationalSystem(PolyMap(n, f), PolyMap(n, phi), g.theta), zeros(n), g.v};
}

inline SystemSample random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 3), lp(1, 4);
  const std::size_t n = dim(rng), m = dim(rng), l = lp(rng);
  std::uniform_int_distribution<std::size_t> rows(0, std::min<std::size_t>(3, 5 - l));
  return random_system(rng, n, m, l, rows(rng));
}

}  // namespace testutil
