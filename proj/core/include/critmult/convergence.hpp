#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "critmult/varsys.hpp"

namespace critmult {

struct Iterate {
  std::vector<double> x;
  std::vector<double> v;
};

struct Trajectory {
  std::vector<Iterate> iterates;
  std::vector<double> residuals;  // one per iterate: |Psi| plus the length of the step taken from it
  std::vector<double> distances;  // |x - x0| + dist(v, Lambda(x0))
  std::vector<double> dual_distances;
  PrimalDualPoint target;
  bool converged = false;
  std::string diagnostic;  // set when the run was truncated
};

// Josephy-Newton: at each iterate the linearized inclusion
//   Psi(xk, vk) + H_k (x - xk) + J_k^T (v - vk) = 0,  v in subdiff theta(Phi(xk) + J_k (x - xk))
// is solved by enumerating piece patterns; the step goes to the nearest solution.
Trajectory newton_kkt_run(const VariationalSystem& vs, const Vec& x_target, const Iterate& start, int max_iter = 50,
                          double tol = 1e-12);

enum class RateKind { Superlinear, Linear, Stalled };
const char* to_string(RateKind k);

struct RateClass {
  RateKind kind = RateKind::Stalled;
  double ratio = 0;         // median tail ratio
  double fitted_ratio = 0;  // exp of the least-squares slope of log distances over the tail
  bool finite_termination = false;
};

// Classifies a sequence of distances to the limit. A sequence that reaches zero is Superlinear;
// otherwise at least six entries are required.
RateClass rate_classify(const std::vector<double>& distances);
RateClass rate_classify(const Trajectory& t);

struct ConvergenceSummary {
  std::vector<Trajectory> runs;
  std::vector<std::optional<RateClass>> rates;  // nullopt when a run was too short to classify
  int superlinear = 0, linear = 0, stalled = 0, unclassified = 0;
  double median_linear_ratio = 0;
  std::uint64_t seed = 0;
};

// Runs from starts drawn uniformly in the (x, v) ball of the given radius around (x, v).
ConvergenceSummary converge_experiment(const VariationalSystem& vs, const Vec& x, const Vec& v, int starts,
                                       double ball, std::uint64_t seed, int max_iter = 50, double tol = 1e-12,
                                       unsigned threads = 0);

}  // namespace critmult
