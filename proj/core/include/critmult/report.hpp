#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "critmult/convergence.hpp"
#include "critmult/problem_io.hpp"
#include "critmult/stability.hpp"

namespace critmult {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr int kSchemaVersion = 1;

struct AnalyzeOptions {
  bool all_vertices = false;
};

// Exact analysis of one point. Throws DomainError when Phi(x) leaves dom theta and
// MembershipError when v is not a Lagrange multiplier at x.
nlohmann::json analyze_point(const ProblemFile& p, const NamedPoint& pt, const AnalyzeOptions& opts = {});
nlohmann::json analysis_report(const ProblemFile& p, const std::vector<std::string>& point_names,
                               const AnalyzeOptions& opts = {});
std::string render_analysis(const nlohmann::json& report);

// Verdict summary of one analyzed point, the unit of golden comparison.
nlohmann::json point_facts(const nlohmann::json& analyzed_point);

nlohmann::json probe_json(const std::string& problem, const std::string& point, const CalmnessProbeReport& r,
                          const ProbeOptions& opts);
std::string render_probe(const nlohmann::json& report);

struct ConvergeSettings {
  int starts = 20;
  double ball = 0.1;
  std::uint64_t seed = 7;
  int max_iter = 50;
  double tol = 1e-12;
};
nlohmann::json convergence_json(const std::string& problem, const std::string& point, const ConvergenceSummary& s,
                                const ConvergeSettings& settings, bool include_trajectories);
std::string render_convergence(const nlohmann::json& report);

}  // namespace critmult
