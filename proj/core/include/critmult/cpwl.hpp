#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "critmult/polyhedron.hpp"

namespace critmult {

class MembershipError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// theta(z) = max_i (<a_i, z> - alpha_i) on {z : <d_j, z> <= beta_j}, +infinity elsewhere.
struct AffinePiece {
  Vec a;
  Rational alpha;
};

struct DomainRow {
  Vec d;
  Rational beta;
};

class CpwlFunction {
 public:
  CpwlFunction() = default;
  // Throws std::invalid_argument when there are no pieces, the rows are ragged,
  // or the domain is empty.
  CpwlFunction(std::size_t m, std::vector<AffinePiece> pieces, std::vector<DomainRow> domain);

  std::size_t dim() const { return m_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  const std::vector<DomainRow>& domain_rows() const { return domain_; }
  HPoly domain() const;

  // Same function with every (a_i, alpha_i) multiplied by c > 0.
  CpwlFunction scaled(const Rational& c) const;

 private:
  std::size_t m_ = 0;
  std::vector<AffinePiece> pieces_;
  std::vector<DomainRow> domain_;
};

// K: pieces attaining the max, I: tight domain rows. Zero-based indices.
struct ActiveSets {
  std::vector<std::size_t> K;
  std::vector<std::size_t> I;
};

struct Evaluation {
  std::optional<Rational> value;  // nullopt means +infinity
  ActiveSets active;
};

Evaluation eval_and_active(const CpwlFunction& theta, const Vec& z);

struct Subdifferentials {
  VPoly basic;
  VPoly singular;
};
// Throws DomainError off dom theta.
Subdifferentials subdifferentials(const CpwlFunction& theta, const Vec& z);

// nullopt means +infinity (w leaves the tangent cone of the domain).
std::optional<Rational> directional_derivative(const CpwlFunction& theta, const Vec& z, const Vec& w);

bool in_subdifferential(const CpwlFunction& theta, const Vec& z, const Vec& v);

struct SubgradientDecomposition {
  Vec v1;
  Vec v2;
  Vec lambda;  // one entry per piece
  Vec mu;      // one entry per domain row
  std::vector<std::size_t> J1;
  std::vector<std::size_t> J2;
  ActiveSets active;
};

// Lexicographically smallest (lambda, mu); throws MembershipError when v is not a subgradient.
SubgradientDecomposition decompose_subgradient(const CpwlFunction& theta, const Vec& z, const Vec& v);
// Validates a caller-supplied representation of v.
SubgradientDecomposition make_decomposition(const CpwlFunction& theta, const Vec& z, const Vec& lambda,
                                            const Vec& mu);

struct CriticalCone {
  HPoly hrep;
  SubgradientDecomposition generating_decomposition;
};

CriticalCone critical_cone(const CpwlFunction& theta, const Vec& z, const Vec& v);
CriticalCone critical_cone(const CpwlFunction& theta, const SubgradientDecomposition& dec);

// Brute force from {w in T(z; dom) : <v,w> = d theta(z)(w)}: one polyhedron per
// maximizing piece, then the hull of the union (checked to equal the union).
HPoly critical_cone_oracle(const CpwlFunction& theta, const Vec& z, const Vec& v);

// T(z; dom theta).
HPoly domain_tangent_cone(const CpwlFunction& theta, const Vec& z);

}  // namespace critmult
