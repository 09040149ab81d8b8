#include "critmult/hpoly.hpp"

#include <sstream>

namespace critmult {

HPoly HPoly::empty_set(std::size_t d) {
  HPoly p(d);
  p.add_ineq(zeros(d), -1);
  return p;
}

void HPoly::add_ineq(Vec normal, Rational rhs) {
  if (normal.size() != dim) throw DimensionError("HPoly::add_ineq: normal length mismatch");
  ineqs.push_back({std::move(normal), std::move(rhs)});
}

void HPoly::add_eq(Vec normal, Rational rhs) {
  if (normal.size() != dim) throw DimensionError("HPoly::add_eq: normal length mismatch");
  eqs.push_back({std::move(normal), std::move(rhs)});
}

void HPoly::check() const {
  for (const auto& c : ineqs)
    if (c.normal.size() != dim) throw DimensionError("HPoly: inequality of wrong length");
  for (const auto& c : eqs)
    if (c.normal.size() != dim) throw DimensionError("HPoly: equality of wrong length");
}

bool HPoly::contains(const Vec& z) const {
  if (z.size() != dim) throw DimensionError("HPoly::contains: point length mismatch");
  for (const auto& c : ineqs)
    if (dot(c.normal, z) > c.rhs) return false;
  for (const auto& c : eqs)
    if (dot(c.normal, z) != c.rhs) return false;
  return true;
}

bool HPoly::is_cone() const {
  for (const auto& c : ineqs)
    if (sgn(c.rhs) != 0) return false;
  for (const auto& c : eqs)
    if (sgn(c.rhs) != 0) return false;
  return true;
}

HPoly HPoly::intersect(const HPoly& other) const {
  if (other.dim != dim) throw DimensionError("HPoly::intersect: dimension mismatch");
  HPoly r = *this;
  r.ineqs.insert(r.ineqs.end(), other.ineqs.begin(), other.ineqs.end());
  r.eqs.insert(r.eqs.end(), other.eqs.begin(), other.eqs.end());
  return r;
}

namespace {

void write_row(std::ostringstream& os, const Constraint& c, const char* rel) {
  os << to_string(c.normal) << rel << c.rhs.get_str();
}

}  // namespace

std::string HPoly::str() const {
  std::ostringstream os;
  os << "{R^" << dim;
  for (const auto& c : eqs) {
    os << "; ";
    write_row(os, c, " = ");
  }
  for (const auto& c : ineqs) {
    os << "; ";
    write_row(os, c, " <= ");
  }
  os << '}';
  return os.str();
}

VPoly VPoly::cone(std::size_t d, std::vector<Vec> rays, std::vector<Vec> lines) {
  VPoly v(d);
  v.points.push_back(zeros(d));
  v.rays = std::move(rays);
  v.lines = std::move(lines);
  return v;
}

bool VPoly::is_cone() const { return points.size() == 1 && is_zero(points[0]); }

std::string VPoly::str() const {
  if (is_empty()) return "empty";
  std::ostringstream os;
  auto list = [&](const char* tag, const std::vector<Vec>& vs) {
    os << tag << '[';
    for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? " " : "") << to_string(vs[i]);
    os << ']';
  };
  list("points", points);
  list(" rays", rays);
  list(" lines", lines);
  return os.str();
}

}  // namespace critmult
