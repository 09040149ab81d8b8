#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "critmult/graph.hpp"
#include "critmult/polynomial.hpp"

namespace critmult {

// Psi(x, v) = f(x) + grad Phi(x)^T v = 0,  v in subdiff theta(Phi(x)).
class VariationalSystem {
 public:
  VariationalSystem(PolyMap f, PolyMap phi, CpwlFunction theta);

  std::size_t n() const { return f_.nvars(); }
  std::size_t m() const { return phi_.size(); }
  const PolyMap& f() const { return f_; }
  const PolyMap& phi() const { return phi_; }
  const CpwlFunction& theta() const { return graph_->theta(); }
  const SubdifferentialGraph& graph() const { return *graph_; }

  Vec psi(const Vec& x, const Vec& v) const;
  std::vector<double> psi(const std::vector<double>& x, const std::vector<double>& v) const;
  // grad f(x) + sum_i v_i hess Phi_i(x)
  Matrix psi_jacobian_x(const Vec& x, const Vec& v) const;
  std::vector<std::vector<double>> psi_jacobian_x(const std::vector<double>& x,
                                                  const std::vector<double>& v) const;
  Matrix phi_jacobian(const Vec& x) const;
  std::vector<std::vector<double>> phi_jacobian(const std::vector<double>& x) const;

 private:
  PolyMap f_;
  PolyMap phi_;
  PolyMatrix f_jac_;
  PolyMatrix phi_jac_;
  std::vector<PolyMatrix> phi_hess_;
  std::shared_ptr<const SubdifferentialGraph> graph_;
};

// minimize phi0(x) + theta(Phi(x)); its Lagrangian gradient is Psi with f = grad phi0.
struct CompositeProblem {
  PolyExpr phi0;
  PolyMap phi;
  CpwlFunction theta;

  VariationalSystem system() const { return VariationalSystem(gradient(phi0), phi, theta); }
};

struct PrimalDualPoint {
  Vec x;
  Vec v;
  Vec z;  // Phi(x)
  bool z_in_domain = false;
  bool v_in_subdifferential = false;
  bool psi_zero = false;

  bool is_kkt() const { return z_in_domain && v_in_subdifferential && psi_zero; }
};

PrimalDualPoint make_point(const VariationalSystem& vs, const Vec& x, const Vec& v);

struct LagrangeSet {
  HPoly hpoly;
  VPoly vertices;

  bool is_empty() const { return vertices.is_empty(); }
  bool is_singleton() const;
};

// Throws DomainError when Phi(x) lies outside dom theta.
LagrangeSet multiplier_set(const VariationalSystem& vs, const Vec& x);
// Throws MembershipError unless v is in the multiplier set; returns Phi(x).
Vec require_multiplier(const VariationalSystem& vs, const Vec& x, const Vec& v);

// Nonempty multiplier set, which implies stationarity.
bool check_stationarity(const VariationalSystem& vs, const Vec& x);

struct NondegeneracyResult {
  bool nondegenerate = false;
  std::vector<Vec> intersection_basis;
};
NondegeneracyResult nondegeneracy_check(const VariationalSystem& vs, const Vec& x);

struct RcqResult {
  bool holds = false;
  std::optional<Vec> violating;  // nonzero vector in the singular subdifferential and ker grad Phi^T
};
RcqResult rcq_check(const VariationalSystem& vs, const Vec& x);

}  // namespace critmult
