#pragma once

#include <random>
#include <string>
#include <vector>

#include "critmult/rational.hpp"

namespace testutil {

using critmult::Rational;
using critmult::Vec;

inline Rational q(const std::string& s) { return critmult::parse_rational(s); }

inline Vec vec(std::initializer_list<const char*> xs) {
  Vec v;
  for (auto x : xs) v.push_back(q(x));
  return v;
}

inline Vec ivec(std::initializer_list<long> xs) {
  Vec v;
  for (auto x : xs) v.push_back(Rational(x));
  return v;
}

inline Rational small_rational(std::mt19937_64& rng, int lo = -3, int hi = 3, int maxden = 2) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, maxden);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline Vec random_vec(std::mt19937_64& rng, std::size_t n, int lo = -3, int hi = 3, int maxden = 2) {
  Vec v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(small_rational(rng, lo, hi, maxden));
  return v;
}

}  // namespace testutil
