#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "critmult/cpwl.hpp"

namespace critmult {

// One polyhedral piece Z x V of gph(subdifferential of theta): P is the set of
// maximizing pieces, Q the set of tight domain rows.
struct GraphPiece {
  std::vector<std::size_t> P;
  std::vector<std::size_t> Q;
  HPoly z_part;
  HPoly v_part;  // co{a_i : i in P} + cone{d_j : j in Q}, from projecting the (v, lambda, mu) lift
};

// Pieces are built on first use and cached; lookups are safe from several threads.
class SubdifferentialGraph {
 public:
  explicit SubdifferentialGraph(CpwlFunction theta) : theta_(std::move(theta)) {}
  SubdifferentialGraph(const SubdifferentialGraph&) = delete;
  SubdifferentialGraph& operator=(const SubdifferentialGraph&) = delete;

  const CpwlFunction& theta() const { return theta_; }
  const GraphPiece& piece(const std::vector<std::size_t>& P, const std::vector<std::size_t>& Q) const;
  // Pieces containing (z, v); throws MembershipError when (z, v) is off the graph.
  std::vector<const GraphPiece*> pieces_at(const Vec& z, const Vec& v) const;

 private:
  CpwlFunction theta_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>, std::unique_ptr<GraphPiece>>
      cache_;
};

// Tangent cones in R^{2m} of the pieces containing (z, v), deduplicated.
std::vector<HPoly> graph_tangent_cones(const SubdifferentialGraph& g, const Vec& z, const Vec& v);

// Graphical derivative D(subdiff theta)(z,v)(u) from first principles: union of cones in R^m.
// An empty list is the empty set.
std::vector<HPoly> graph_tangent_oracle(const SubdifferentialGraph& g, const Vec& z, const Vec& v,
                                        const Vec& u);

// Closed form: the polar of the critical cone K when u lies in -K, nullopt otherwise.
std::optional<VPoly> regular_coderivative(const CpwlFunction& theta, const Vec& z, const Vec& v,
                                          const Vec& u);
// Domain of the closed form, i.e. -K.
HPoly regular_coderivative_domain(const CpwlFunction& theta, const Vec& z, const Vec& v);

// Regular normal cone to the graph at (z, v) in R^{2m}, as the intersection of the polars
// of the piece tangent cones.
HPoly regular_normal_cone(const SubdifferentialGraph& g, const Vec& z, const Vec& v);
// {w : (w, -u) in the regular normal cone}; nullopt when empty.
std::optional<HPoly> regular_coderivative_oracle(const SubdifferentialGraph& g, const Vec& z, const Vec& v,
                                                 const Vec& u);

// Limiting normal cone as a union of regular normal cones over the cells of the
// hyperplane arrangement spanned by all piece tangent rows.
std::vector<HPoly> limiting_normal_cone(const SubdifferentialGraph& g, const Vec& z, const Vec& v);
// {w : (w, -u) in N}, one polyhedron per nonempty slice.
std::vector<HPoly> limiting_coderivative(const SubdifferentialGraph& g, const Vec& z, const Vec& v,
                                         const Vec& u);

// {w : (w, -u) in C} for a set C in R^{2m}; nullopt when empty.
std::optional<HPoly> coderivative_slice(const HPoly& c, const Vec& u);

}  // namespace critmult
