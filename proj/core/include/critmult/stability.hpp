#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "critmult/criticality.hpp"

namespace critmult {

// Right-hand sides of Psi(x, v) = p1, v in subdiff theta(Phi(x) + p2).
struct Perturbation {
  std::vector<double> p1;
  std::vector<double> p2;
};

struct PerturbedSolution {
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> lambda;  // weights on P
  std::vector<double> mu;      // weights on Q
  std::vector<std::size_t> P;
  std::vector<std::size_t> Q;
  double residual = 0;
};

struct SolverOptions {
  double residual_tol = 1e-10;
  int max_iter = 50;
  double accept_tol = 1e-9;
  // Newton start; defaults to the seed point.
  std::optional<std::pair<std::vector<double>, std::vector<double>>> start;
};

struct PerturbedSolve {
  std::vector<PerturbedSolution> solutions;
  std::vector<std::string> diagnostics;
};

// Patterns (P, Q) are restricted to the pieces and rows active at the seed that contain the
// indices positive in every representation of the seed multiplier.
PerturbedSolve solve_perturbed(const VariationalSystem& vs, const Perturbation& p, const PrimalDualPoint& seed,
                               const SolverOptions& opts = {});

// Indices of pieces / domain rows carrying positive weight in every representation of v.
ActiveSets always_positive(const CpwlFunction& theta, const Vec& z, const Vec& v);

// ||Psi(x, v)|| + dist(Phi(x), inverse subdifferential at v); +infinity when v is not a subgradient anywhere.
double error_bound_residual(const VariationalSystem& vs, const std::vector<double>& x, const std::vector<double>& v);

enum class ProbeVerdict { Bounded, Diverging, Inconclusive };
const char* to_string(ProbeVerdict v);

struct ProbeOptions {
  std::vector<double> radii{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  int samples_per_radius = 64;
  std::uint64_t seed = 20170101;
  double locality = 0.5;  // radius of the (x, v) neighbourhood that localizes the solution map
  bool path_witness = true;
  std::vector<double> path_ts{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  SolverOptions solver;
  unsigned threads = 0;  // 0 picks hardware concurrency
};

struct PathSample {
  double t = 0;
  double ratio = 0;  // lower bound t|xi| / (|p1| + |p2|)
  bool recovered = false;
};

struct CalmnessProbeReport {
  std::vector<double> radii;
  std::vector<double> empirical_moduli;     // NaN when every sample of a radius was skipped
  std::vector<int> skipped;                 // samples with no solution in the neighbourhood
  std::vector<double> error_bound_ratios;   // max of (|x - x0| + dist(v, Lambda)) / residual
  std::vector<PathSample> path;
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
  double modulus = 0;  // estimated constant when Bounded
  std::uint64_t seed = 0;
  int samples_per_radius = 0;
};

CalmnessProbeReport calmness_probe(const VariationalSystem& vs, const Vec& x, const Vec& v,
                                   const ProbeOptions& opts = {});

// The criticality system admits only the zero pair and v is an isolated point of Lambda(x).
bool isolated_calmness_check(const VariationalSystem& vs, const Vec& x, const Vec& v);

struct RobustCalmnessResult {
  bool holds = false;
  bool sosc = false;
  bool singleton = false;
  std::optional<Vec> sosc_violation;
  std::string failed;  // empty, "SOSC", "Lambda not a singleton" or both joined by ", "
};
// For composite problems (grad_x Psi symmetric).
RobustCalmnessResult robust_isolated_calmness_check(const VariationalSystem& vs, const Vec& x, const Vec& v);

struct LipschitzLikeResult {
  bool holds = false;
  std::optional<CriticalityWitness> violating;  // nonzero (xi, eta) of the coderivative system
  std::size_t cones = 0;                         // limiting normal cone pieces examined
};
LipschitzLikeResult lipschitz_like_check(const VariationalSystem& vs, const Vec& x, const Vec& v);

struct SemiIsolatedSummary {
  bool isolated_calm = false;
  Criticality criticality = Criticality::Noncritical;
  ProbeVerdict probe = ProbeVerdict::Inconclusive;
  bool chain_holds = false;
  std::string line;
};
SemiIsolatedSummary semi_isolated_summary(const VariationalSystem& vs, const Vec& x, const Vec& v,
                                          const ProbeOptions& opts = {});

}  // namespace critmult
