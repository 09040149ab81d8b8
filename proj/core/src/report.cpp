#include "critmult/report.hpp"

#include <cmath>
#include <sstream>

namespace critmult {

namespace {

using nlohmann::json;

json index_list(const std::vector<std::size_t>& v) { return json(v); }

json num(double d) { return std::isfinite(d) ? json(d) : json(nullptr); }

json witness_json(const CriticalityWitness& w) { return {{"xi", vec_json(w.xi)}, {"eta", vec_json(w.eta)}}; }

json implication(const char* name, bool antecedent, bool consequent) {
  return {{"name", name}, {"antecedent", antecedent}, {"consequent", consequent}, {"holds", !antecedent || consequent}};
}

std::string vec_str(const json& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + a[i].get<std::string>();
  return s + ")";
}

std::string hpoly_str(const json& h) {
  std::ostringstream os;
  bool first = true;
  auto row = [&](const json& c, const char* rel) {
    os << (first ? "" : "; ") << vec_str(c["normal"]) << ".u " << rel << ' ' << c["rhs"].get<std::string>();
    first = false;
  };
  for (const auto& c : h["eqs"]) row(c, "=");
  for (const auto& c : h["ineqs"]) row(c, "<=");
  if (first) os << "whole space";
  return os.str();
}

const char* yes(bool b) { return b ? "yes" : "no"; }

}  // namespace

json analyze_point(const ProblemFile& p, const NamedPoint& pt, const AnalyzeOptions& opts) {
  const VariationalSystem vs = p.system();
  const PrimalDualPoint pd = make_point(vs, pt.x, pt.v);
  json out;
  out["point"] = pt.name;
  out["x"] = vec_json(pt.x);
  out["v"] = vec_json(pt.v);
  out["feasibility"] = {{"z", vec_json(pd.z)},
                        {"z_in_domain", pd.z_in_domain},
                        {"v_in_subdifferential", pd.v_in_subdifferential},
                        {"psi_zero", pd.psi_zero}};
  if (!pd.z_in_domain) throw DomainError("Phi(x) lies outside dom theta at point '" + pt.name + "'");
  if (!pd.v_in_subdifferential) throw MembershipError("v is not a subgradient of theta at Phi(x) for point '" + pt.name + "'");
  if (!pd.psi_zero) throw MembershipError("Psi(x, v) != 0 at point '" + pt.name + "'");

  const LagrangeSet lam = multiplier_set(vs, pt.x);
  const HPoly lam_h = remove_redundancy(lam.hpoly);
  const int lam_dim = affine_dimension(lam_h);
  out["lambda"] = {{"label", "Lambda-nonempty (implies stationarity)"},
                   {"hrep", hpoly_json(lam_h)},
                   {"key", canonical_key(lam_h)},
                   {"vertices", vpoly_json(lam.vertices)},
                   {"dimension", lam_dim},
                   {"singleton", lam.is_singleton()}};

  const SubgradientDecomposition dec = decompose_subgradient(vs.theta(), pd.z, pt.v);
  out["decomposition"] = {{"v1", vec_json(dec.v1)}, {"v2", vec_json(dec.v2)},   {"lambda", vec_json(dec.lambda)},
                          {"mu", vec_json(dec.mu)}, {"J1", index_list(dec.J1)}, {"J2", index_list(dec.J2)},
                          {"K", index_list(dec.active.K)}, {"I", index_list(dec.active.I)}};
  out["hessian"] = json::array();
  for (const auto& row : vs.psi_jacobian_x(pt.x, pt.v)) out["hessian"].push_back(vec_json(row));

  const CriticalityVerdict cv = classify_multiplier(vs, pt.x, pt.v);
  const CriticalityVerdict cd = classify_multiplier_coderivative(vs, pt.x, pt.v);
  out["critical_cone"] = hpoly_json(cv.critical_cone);
  json cj = {{"status", to_string(cv.status)},
             {"face_pairs_examined", cv.certificates.size()},
             {"coderivative_status", to_string(cd.status)},
             {"coderivative_faces_examined", cd.certificates.size()},
             {"routes_agree", cv.status == cd.status}};
  if (cv.witness) {
    cj["witness"] = witness_json(*cv.witness);
    cj["witness_face"] = index_list(*cv.face);
  } else {
    cj["certificates"] = json::array();
    for (const auto& c : cv.certificates) cj["certificates"].push_back({{"face", index_list(c.face)}, {"nonzero", c.admits_nonzero}});
  }
  out["criticality"] = cj;
  const bool noncritical = cv.status == Criticality::Noncritical;

  const SoscVerdict sosc = sosc_check(vs, pt.x, pt.v);
  out["sosc"] = {{"holds", sosc.holds}};
  if (sosc.violating_direction) out["sosc"]["violating_direction"] = vec_json(*sosc.violating_direction);
  if (!p.composite()) out["sosc"]["note"] = "grad_x Psi need not be symmetric; SOSC is only sufficient here";

  const NondegeneracyResult nd = nondegeneracy_check(vs, pt.x);
  out["nondegeneracy"] = {{"holds", nd.nondegenerate}, {"intersection_basis", json::array()}};
  for (const auto& b : nd.intersection_basis) out["nondegeneracy"]["intersection_basis"].push_back(vec_json(b));

  const RcqResult rcq = rcq_check(vs, pt.x);
  out["rcq"] = {{"holds", rcq.holds}};
  if (rcq.violating) out["rcq"]["violating"] = vec_json(*rcq.violating);

  const bool iso = isolated_calmness_check(vs, pt.x, pt.v);
  out["isolated_calmness"] = iso;
  const RobustCalmnessResult rob = robust_isolated_calmness_check(vs, pt.x, pt.v);
  out["robust_isolated_calmness"] = {{"holds", rob.holds}, {"sosc", rob.sosc}, {"singleton", rob.singleton}};
  if (!rob.failed.empty()) out["robust_isolated_calmness"]["failed"] = rob.failed;
  const LipschitzLikeResult ll = lipschitz_like_check(vs, pt.x, pt.v);
  out["lipschitz_like"] = {{"holds", ll.holds}, {"cones_examined", ll.cones}};
  if (ll.violating) out["lipschitz_like"]["violating"] = witness_json(*ll.violating);

  json imp = json::array();
  imp.push_back(implication("SOSC => noncritical", sosc.holds, noncritical));
  imp.push_back(implication("isolated calmness => noncritical", iso, noncritical));
  imp.push_back(implication("Lambda singleton => RCQ", lam.is_singleton(), rcq.holds));
  imp.push_back(implication("nondegeneracy => Lambda singleton", nd.nondegenerate, lam.is_singleton()));
  imp.push_back(implication("Lipschitz-like => nondegeneracy and noncritical and robust isolated calmness", ll.holds,
                            nd.nondegenerate && noncritical && rob.holds));
  if (sosc.holds) {
    const bool ii = lam.is_singleton(), iii = lam.is_singleton() && noncritical, iv = iso;
    imp.push_back({{"name", "under SOSC: (ii) SOSC and singleton <=> (iii) singleton and noncritical <=> (iv) isolated calmness"},
                   {"ii", ii}, {"iii", iii}, {"iv", iv}, {"holds", ii == iii && iii == iv}});
  }
  bool all = true;
  for (const auto& i : imp) all = all && i["holds"].get<bool>();
  out["implications"] = imp;
  out["implication_chain"] = std::string("isolated calmness ") + yes(iso) + " => " + to_string(cv.status) +
                             " => calm (exact side); all implications " + (all ? "hold" : "VIOLATED");

  if (opts.all_vertices) {
    json vs_json = json::array();
    for (const auto& vert : lam.vertices.points) {
      const CriticalityVerdict vv = classify_multiplier(vs, pt.x, vert);
      json e = {{"v", vec_json(vert)}, {"status", to_string(vv.status)}};
      if (vv.witness) e["witness"] = witness_json(*vv.witness);
      vs_json.push_back(e);
    }
    out["vertices"] = vs_json;
  }
  return out;
}

json analysis_report(const ProblemFile& p, const std::vector<std::string>& names, const AnalyzeOptions& opts) {
  json r;
  r["schema_version"] = kSchemaVersion;
  r["kind"] = "analysis";
  r["metadata"] = {{"tool", "critmult"}, {"tool_version", kToolVersion}, {"arithmetic", "exact rational"},
                   {"seeds", json::array()}, {"tolerances", json::object()}};
  r["problem"] = p.name;
  r["notes"] = p.notes;
  r["points"] = json::array();
  for (const auto& n : names) r["points"].push_back(analyze_point(p, p.point(n), opts));
  return r;
}

std::string render_analysis(const json& r) {
  std::ostringstream os;
  os << "problem " << r["problem"].get<std::string>() << "  (critmult " << r["metadata"]["tool_version"].get<std::string>()
     << ", schema " << r["schema_version"].get<int>() << ")\n";
  for (const auto& n : r["notes"]) os << "note: " << n.get<std::string>() << '\n';
  for (const auto& pt : r["points"]) {
    os << "\npoint " << pt["point"].get<std::string>() << ": x = " << vec_str(pt["x"]) << ", v = " << vec_str(pt["v"]) << '\n';
    os << "  z = Phi(x) = " << vec_str(pt["feasibility"]["z"]) << "; KKT point: yes\n";
    os << "  Lambda(x) [" << pt["lambda"]["label"].get<std::string>() << "]: " << hpoly_str(pt["lambda"]["hrep"])
       << "  (dimension " << pt["lambda"]["dimension"].get<int>() << ")\n";
    os << "    vertices:";
    for (const auto& v : pt["lambda"]["vertices"]["points"]) os << ' ' << vec_str(v);
    if (!pt["lambda"]["vertices"]["rays"].empty()) {
      os << "  rays:";
      for (const auto& v : pt["lambda"]["vertices"]["rays"]) os << ' ' << vec_str(v);
    }
    if (!pt["lambda"]["vertices"]["lines"].empty()) {
      os << "  lines:";
      for (const auto& v : pt["lambda"]["vertices"]["lines"]) os << ' ' << vec_str(v);
    }
    os << '\n';
    os << "  decomposition: lambda = " << vec_str(pt["decomposition"]["lambda"]) << ", mu = "
       << vec_str(pt["decomposition"]["mu"]) << '\n';
    os << "  grad_x Psi:";
    for (const auto& row : pt["hessian"]) os << ' ' << vec_str(row);
    os << '\n';
    os << "  critical cone K: " << hpoly_str(pt["critical_cone"]) << '\n';
    const auto& c = pt["criticality"];
    os << "  multiplier: " << c["status"].get<std::string>();
    if (c.contains("witness"))
      os << "  witness xi = " << vec_str(c["witness"]["xi"]) << ", eta = " << vec_str(c["witness"]["eta"]);
    else
      os << "  (" << c["face_pairs_examined"].get<std::size_t>() << " face pairs admit only xi = 0)";
    os << "; coderivative route: " << c["coderivative_status"].get<std::string>() << '\n';
    os << "  SOSC: " << yes(pt["sosc"]["holds"].get<bool>());
    if (pt["sosc"].contains("violating_direction")) os << "  violating direction " << vec_str(pt["sosc"]["violating_direction"]);
    os << '\n';
    os << "  nondegeneracy: " << yes(pt["nondegeneracy"]["holds"].get<bool>()) << "; RCQ: " << yes(pt["rcq"]["holds"].get<bool>());
    if (pt["rcq"].contains("violating")) os << " (violating " << vec_str(pt["rcq"]["violating"]) << ")";
    os << '\n';
    os << "  isolated calmness: " << yes(pt["isolated_calmness"].get<bool>()) << "; robust isolated calmness: "
       << yes(pt["robust_isolated_calmness"]["holds"].get<bool>());
    if (pt["robust_isolated_calmness"].contains("failed"))
      os << " (fails: " << pt["robust_isolated_calmness"]["failed"].get<std::string>() << ")";
    os << "; Lipschitz-like: " << yes(pt["lipschitz_like"]["holds"].get<bool>()) << '\n';
    os << "  " << pt["implication_chain"].get<std::string>() << '\n';
    if (pt.contains("vertices")) {
      os << "  vertices of Lambda:\n";
      for (const auto& v : pt["vertices"]) os << "    " << vec_str(v["v"]) << ": " << v["status"].get<std::string>() << '\n';
    }
  }
  return os.str();
}

json point_facts(const json& pt) {
  return {{"lambda", pt["lambda"]["key"]},
          {"lambda_dimension", pt["lambda"]["dimension"]},
          {"criticality", pt["criticality"]["status"]},
          {"routes_agree", pt["criticality"]["routes_agree"]},
          {"sosc", pt["sosc"]["holds"]},
          {"nondegenerate", pt["nondegeneracy"]["holds"]},
          {"rcq", pt["rcq"]["holds"]},
          {"isolated_calmness", pt["isolated_calmness"]},
          {"robust_isolated_calmness", pt["robust_isolated_calmness"]["holds"]},
          {"lipschitz_like", pt["lipschitz_like"]["holds"]}};
}

json probe_json(const std::string& problem, const std::string& point, const CalmnessProbeReport& r, const ProbeOptions& opts) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "calmness_probe";
  j["metadata"] = {{"tool", "critmult"},
                   {"tool_version", kToolVersion},
                   {"seeds", {r.seed}},
                   {"tolerances",
                    {{"newton_residual", opts.solver.residual_tol},
                     {"newton_max_iter", opts.solver.max_iter},
                     {"accept", opts.solver.accept_tol},
                     {"locality", opts.locality},
                     {"bounded_factor", 10.0},
                     {"diverging_threshold", 1e3}}}};
  j["problem"] = problem;
  j["point"] = point;
  j["samples_per_radius"] = r.samples_per_radius;
  j["radii"] = r.radii;
  j["empirical_moduli"] = json::array();
  for (double m : r.empirical_moduli) j["empirical_moduli"].push_back(num(m));
  j["skipped"] = r.skipped;
  j["error_bound_ratios"] = json::array();
  for (double m : r.error_bound_ratios) j["error_bound_ratios"].push_back(num(m));
  j["path"] = json::array();
  for (const auto& p : r.path) j["path"].push_back({{"t", p.t}, {"ratio", num(p.ratio)}, {"recovered", p.recovered}});
  j["verdict"] = to_string(r.verdict);
  if (r.verdict == ProbeVerdict::Bounded) j["modulus"] = r.modulus;
  j["caveat"] = "sampling corroborates calmness but cannot prove it; divergence is only declared along the witness path";
  return j;
}

std::string render_probe(const json& j) {
  std::ostringstream os;
  os << "calmness probe " << j["problem"].get<std::string>() << ':' << j["point"].get<std::string>() << "  seed "
     << j["metadata"]["seeds"][0].get<std::uint64_t>() << ", " << j["samples_per_radius"].get<int>() << " samples per radius\n";
  for (std::size_t i = 0; i < j["radii"].size(); ++i) {
    os << "  r = " << j["radii"][i].get<double>() << "  max modulus ";
    if (j["empirical_moduli"][i].is_null())
      os << "n/a";
    else
      os << j["empirical_moduli"][i].get<double>();
    os << "  skipped " << j["skipped"][i].get<int>() << "  error-bound ratio ";
    if (j["error_bound_ratios"][i].is_null())
      os << "n/a";
    else
      os << j["error_bound_ratios"][i].get<double>();
    os << '\n';
  }
  for (const auto& p : j["path"]) {
    os << "  witness path t = " << p["t"].get<double>() << "  lower bound ";
    if (p["ratio"].is_null())
      os << "inf";
    else
      os << p["ratio"].get<double>();
    os << (p["recovered"].get<bool>() ? "  (recovered by solver)" : "") << '\n';
  }
  os << "verdict: " << j["verdict"].get<std::string>();
  if (j.contains("modulus")) os << " (modulus estimate " << j["modulus"].get<double>() << ")";
  os << '\n' << "caveat: " << j["caveat"].get<std::string>() << '\n';
  return os.str();
}

json convergence_json(const std::string& problem, const std::string& point, const ConvergenceSummary& s,
                      const ConvergeSettings& settings, bool include_trajectories) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "convergence";
  j["metadata"] = {{"tool", "critmult"},
                   {"tool_version", kToolVersion},
                   {"seeds", {s.seed}},
                   {"tolerances", {{"stop_residual", settings.tol}, {"max_iter", settings.max_iter}}},
                   {"thresholds",
                    {{"superlinear_tail_ratio", 1e-2},
                     {"tail_length", 5},
                     {"majority", 0.6},
                     {"noise_cutoff", "sqrt(machine epsilon) * max(1, first distance)"},
                     {"note", "engineering choices, not derived from theory"}}}};
  j["problem"] = problem;
  j["point"] = point;
  j["starts"] = settings.starts;
  j["ball"] = settings.ball;
  j["histogram"] = {{"Superlinear", s.superlinear}, {"Linear", s.linear}, {"Stalled", s.stalled},
                    {"Unclassified", s.unclassified}};
  j["median_linear_ratio"] = s.median_linear_ratio;
  j["runs"] = json::array();
  for (std::size_t i = 0; i < s.runs.size(); ++i) {
    const auto& t = s.runs[i];
    json r = {{"iterations", t.iterates.size() - 1}, {"converged", t.converged}};
    if (s.rates[i]) {
      r["rate"] = to_string(s.rates[i]->kind);
      r["tail_ratio"] = s.rates[i]->ratio;
      r["finite_termination"] = s.rates[i]->finite_termination;
    } else {
      r["rate"] = "Unclassified";
    }
    if (!t.diagnostic.empty()) r["diagnostic"] = t.diagnostic;
    r["final_distance"] = num(t.distances.back());
    if (include_trajectories) {
      r["distances"] = json::array();
      for (double d : t.distances) r["distances"].push_back(num(d));
      r["iterates"] = json::array();
      for (const auto& it : t.iterates) r["iterates"].push_back({{"x", it.x}, {"v", it.v}});
    }
    j["runs"].push_back(r);
  }
  return j;
}

std::string render_convergence(const json& j) {
  std::ostringstream os;
  const auto& h = j["histogram"];
  const int total = j["starts"].get<int>();
  os << "Josephy-Newton runs on " << j["problem"].get<std::string>() << ':' << j["point"].get<std::string>() << "  ("
     << total << " starts in the " << j["ball"].get<double>() << "-ball, seed " << j["metadata"]["seeds"][0].get<std::uint64_t>()
     << ")\n";
  for (const char* k : {"Superlinear", "Linear", "Stalled", "Unclassified"}) {
    const int c = h[k].get<int>();
    os << "  " << k << ": " << c << " (" << (total ? 100.0 * c / total : 0.0) << "%)\n";
  }
  os << "  median tail ratio of linear runs: " << j["median_linear_ratio"].get<double>() << '\n';
  os << "  thresholds (tail of 5 ratios, superlinear below 1e-2, 60% majority, distances classified down to\n"
     << "  sqrt(machine epsilon)) are engineering choices\n";
  return os.str();
}

}  // namespace critmult
