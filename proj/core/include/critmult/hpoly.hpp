#pragma once

#include <string>
#include <vector>

#include "critmult/rational.hpp"

namespace critmult {

// <normal, z> <= rhs, or = rhs when stored among equalities.
struct Constraint {
  Vec normal;
  Rational rhs;
};

struct HPoly {
  std::size_t dim = 0;
  std::vector<Constraint> ineqs;
  std::vector<Constraint> eqs;

  HPoly() = default;
  explicit HPoly(std::size_t d) : dim(d) {}

  static HPoly universe(std::size_t d) { return HPoly(d); }
  // Canonical empty set {0 <= -1}.
  static HPoly empty_set(std::size_t d);

  void add_ineq(Vec normal, Rational rhs = 0);
  void add_eq(Vec normal, Rational rhs = 0);
  // Throws DimensionError on ragged rows.
  void check() const;

  bool contains(const Vec& z) const;
  bool is_cone() const;  // every rhs is zero
  HPoly intersect(const HPoly& other) const;
  std::string str() const;
};

struct VPoly {
  std::size_t dim = 0;
  std::vector<Vec> points;
  std::vector<Vec> rays;
  std::vector<Vec> lines;

  VPoly() = default;
  explicit VPoly(std::size_t d) : dim(d) {}
  // {0} + cone(rays) + span(lines)
  static VPoly cone(std::size_t d, std::vector<Vec> rays = {}, std::vector<Vec> lines = {});

  bool is_empty() const { return points.empty(); }
  bool is_cone() const;
  std::string str() const;
};

}  // namespace critmult
