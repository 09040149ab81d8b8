#pragma once

#include <optional>
#include <vector>

#include "critmult/varsys.hpp"

namespace critmult {

enum class Criticality { Critical, Noncritical };
const char* to_string(Criticality c);

struct CriticalityWitness {
  Vec xi;
  Vec eta;
};

// One complementary face pair that was examined.
struct FacePairCertificate {
  std::vector<std::size_t> face;  // active inequality rows of the cone whose face was fixed
  bool admits_nonzero = false;
};

struct CriticalityVerdict {
  Criticality status = Criticality::Noncritical;
  std::optional<CriticalityWitness> witness;
  std::optional<std::vector<std::size_t>> face;  // face carrying the witness
  std::vector<FacePairCertificate> certificates;
  HPoly critical_cone;
};

// Face pairs (F, conjugate face) of the critical cone K: searches
//   H xi + J^T eta = 0,  J xi in F,  eta in K* with eta orthogonal to F,  xi != 0.
// Throws MembershipError unless v is a multiplier at x.
CriticalityVerdict classify_multiplier(const VariationalSystem& vs, const Vec& x, const Vec& v);

// Same decision through faces G of the regular coderivative value K*:
//   eta in G, -J xi in dom, J xi orthogonal to G.
CriticalityVerdict classify_multiplier_coderivative(const VariationalSystem& vs, const Vec& x, const Vec& v);

bool verify_critical_witness(const VariationalSystem& vs, const Vec& x, const Vec& v, const CriticalityWitness& w);

// Nonzero (xi, eta) solving the criticality system without the xi != 0 restriction.
std::optional<CriticalityWitness> nontrivial_pair(const VariationalSystem& vs, const Vec& x, const Vec& v);

struct SoscVerdict {
  bool holds = false;
  std::optional<Vec> violating_direction;
};

// <H u, u> > 0 for every nonzero u with J u in K, with H the symmetric part of grad_x Psi.
SoscVerdict sosc_check(const VariationalSystem& vs, const Vec& x, const Vec& v);

// Strict positivity of <Q y, y> on cone(rays) + span(lines) minus the origin.
SoscVerdict quadratic_positive_on_cone(const Matrix& q, const std::vector<Vec>& rays,
                                       const std::vector<Vec>& lines);

}  // namespace critmult
