#pragma once

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "critmult/hpoly.hpp"
#include "critmult/lp.hpp"

namespace critmult {

struct Face {
  std::set<std::size_t> active_ineq_indices;
  HPoly carrier;
};

// Generators of {x : A x <= 0, E x = 0}. Rays are primitive, orthogonal to the
// lines, sorted and free of duplicates; lines are an echelon basis.
struct ConeGenerators {
  std::vector<Vec> rays;
  std::vector<Vec> lines;
};
ConeGenerators cone_generators(std::size_t dim, const Matrix& ineqs, const Matrix& eqs);

// Double description. An empty polyhedron converts to a VPoly with no points.
VPoly convert_rep(const HPoly& p);
// Irredundant facets plus affine-hull equalities, primitive rows, canonical order.
HPoly convert_rep_v(const VPoly& v);

// Polar {y : <y,x> <= 0 for all x in C}. Throws std::invalid_argument on non-cones.
HPoly dual_cone(const VPoly& c);
VPoly dual_cone_h(const HPoly& c);

// All nonempty faces, smallest first.
std::vector<Face> enumerate_faces(const HPoly& p);

// Eliminates the listed coordinates and renumbers the rest in order.
HPoly project_out(const HPoly& p, const std::vector<std::size_t>& coords);

// +infinity when P is empty.
double distance_point_polyhedron(const std::vector<double>& z, const HPoly& p);
// Exact squared distance for rational z; nullopt when P is empty.
std::optional<Rational> squared_distance(const Vec& z, const HPoly& p);

// Exact set predicates.
bool contains(const HPoly& outer, const VPoly& inner);
bool set_equal(const HPoly& a, const HPoly& b);
bool set_equal(const VPoly& a, const VPoly& b);
bool subset(const HPoly& inner, const HPoly& outer);
// C is a subset of the union of the pieces.
bool covered_by_union(const HPoly& c, std::span<const HPoly> pieces);
// Union of pieces equals C (pieces inside C and C covered).
bool union_equals(std::span<const HPoly> pieces, const HPoly& c);

// Irredundant H-rep via exact LP per row; implicit equalities detected.
HPoly remove_redundancy(const HPoly& p);
// Canonical text for equality tests and dedup of already-canonical H-reps.
std::string canonical_key(const HPoly& p);

// Dimension of the affine hull; -1 for the empty set.
int affine_dimension(const HPoly& p);

// Pullback {u : M u in C} of a polyhedron C along a matrix with C.dim rows.
HPoly pullback(const HPoly& c, const Matrix& m, std::size_t cols);

}  // namespace critmult
