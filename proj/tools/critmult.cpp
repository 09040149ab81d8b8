#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "critmult/corpus.hpp"
#include "critmult/report.hpp"

namespace cm = critmult;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kGoldenMismatch = 1, kUsage = 2, kInfeasible = 3, kNotSubgradient = 4, kInternal = 70 };

void emit(const json& j, bool as_json, std::string (*render)(const json&)) {
  if (as_json)
    std::cout << j.dump(2) << '\n';
  else
    std::cout << render(j);
}

int cmd_analyze(const std::string& file, std::vector<std::string> points, bool all_vertices, bool as_json) {
  const cm::ProblemFile p = cm::load_problem(file);
  if (points.empty())
    for (const auto& pt : p.points) points.push_back(pt.name);
  emit(cm::analysis_report(p, points, {all_vertices}), as_json, cm::render_analysis);
  return kOk;
}

int cmd_perturb(const std::string& file, const std::string& point, const cm::ProbeOptions& opts, bool as_json) {
  const cm::ProblemFile p = cm::load_problem(file);
  const auto& pt = p.point(point);
  const cm::VariationalSystem vs = p.system();
  const auto rep = cm::calmness_probe(vs, pt.x, pt.v, opts);
  emit(cm::probe_json(p.name, pt.name, rep, opts), as_json, cm::render_probe);
  return kOk;
}

int cmd_converge(const std::string& file, std::string point, const cm::ConvergeSettings& s, bool as_json,
                 bool trajectories) {
  const cm::ProblemFile p = cm::load_problem(file);
  if (!p.composite()) throw cm::SchemaError("converge needs a composite problem (phi0)");
  if (point.empty()) {
    if (p.points.empty()) throw cm::SchemaError("problem has no points");
    point = p.points.front().name;
  }
  const auto& pt = p.point(point);
  const cm::VariationalSystem vs = p.system();
  cm::require_multiplier(vs, pt.x, pt.v);
  const auto sum = cm::converge_experiment(vs, pt.x, pt.v, s.starts, s.ball, s.seed, s.max_iter, s.tol);
  emit(cm::convergence_json(p.name, pt.name, sum, s, trajectories), as_json, cm::render_convergence);
  return kOk;
}

int cmd_corpus(bool list_only, const std::string& goldens_path, const std::string& export_dir,
               const std::string& write_goldens, bool as_json) {
  const auto corpus = cm::builtin_corpus();
  if (!export_dir.empty()) {
    std::filesystem::create_directories(export_dir);
    for (const auto& f : cm::builtin_corpus_files()) std::ofstream(std::filesystem::path(export_dir) / f.file) << f.text;
    std::ofstream(std::filesystem::path(export_dir) / "goldens.json") << cm::builtin_goldens().dump(2) << '\n';
  }
  if (list_only) {
    std::cout << corpus.size() << " instances\n";
    for (const auto& p : corpus) {
      std::cout << "  " << p.name << "  (n=" << p.n << ", m=" << p.m << ", points:";
      for (const auto& pt : p.points) std::cout << ' ' << pt.name;
      std::cout << ")\n";
      for (const auto& note : p.notes) std::cout << "    note: " << note << '\n';
    }
    return kOk;
  }
  json expected = cm::builtin_goldens();
  if (!goldens_path.empty()) {
    std::ifstream in(goldens_path);
    if (!in) throw cm::SchemaError("cannot open " + goldens_path);
    try {
      expected = json::parse(in);
    } catch (const json::parse_error& e) {
      throw cm::SchemaError(std::string("invalid golden file: ") + e.what());
    }
  }
  const json actual = cm::corpus_facts(corpus);
  if (!write_goldens.empty()) std::ofstream(write_goldens) << actual.dump(2) << '\n';
  const auto diff = cm::golden_diff(expected, actual);
  if (as_json) {
    json notes = json::object();
    for (const auto& p : corpus) notes[p.name] = p.notes;
    std::cout << json{{"schema_version", cm::kSchemaVersion},
                      {"kind", "corpus"},
                      {"metadata", {{"tool", "critmult"}, {"tool_version", cm::kToolVersion}}},
                      {"notes", notes},
                      {"facts", actual},
                      {"mismatches", diff}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "corpus: " << corpus.size() << " instances\n";
    for (const auto& p : corpus) {
      std::cout << "  " << p.name << '\n';
      for (const auto& note : p.notes) std::cout << "    note: " << note << '\n';
      for (const auto& pt : p.points) {
        const auto& f = actual[p.name][pt.name];
        std::cout << "    " << pt.name << ": " << f["criticality"].get<std::string>()
                  << ", SOSC " << (f["sosc"].get<bool>() ? "yes" : "no") << ", Lambda " << f["lambda"].get<std::string>()
                  << '\n';
      }
    }
    if (diff.empty())
      std::cout << "all golden values match\n";
    else {
      std::cout << diff.size() << " golden mismatches:\n";
      for (const auto& d : diff) std::cout << "  " << d << '\n';
    }
  }
  return diff.empty() ? kOk : kGoldenMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical and noncritical multipliers of variational systems with piecewise-linear outer functions"};
  app.set_version_flag("--version", cm::kToolVersion);
  app.require_subcommand(1);

  bool as_json = false;
  std::string file, point;

  auto* analyze = app.add_subcommand("analyze", "exact analysis of points of a problem file");
  std::vector<std::string> points;
  bool all_vertices = false;
  analyze->add_option("file", file, "problem file (JSON)")->required();
  analyze->add_option("points", points, "point names (default: all)");
  analyze->add_flag("--all-vertices", all_vertices, "classify every vertex of the multiplier set");
  analyze->add_flag("--json", as_json, "machine-readable output");

  auto* perturb = app.add_subcommand("perturb", "empirical calmness probe under canonical perturbations");
  cm::ProbeOptions probe;
  probe.path_witness = false;
  std::vector<double> radii = probe.radii;
  perturb->add_option("file", file, "problem file (JSON)")->required();
  perturb->add_option("point", point, "point name")->required();
  perturb->add_option("--radii", radii, "perturbation radii")->expected(0, -1);
  perturb->add_option("--samples", probe.samples_per_radius, "samples per radius");
  perturb->add_option("--seed", probe.seed, "random seed");
  perturb->add_option("--locality", probe.locality, "radius of the (x, v) neighbourhood");
  perturb->add_flag("--path-witness", probe.path_witness, "follow the criticality witness path");
  perturb->add_flag("--json", as_json, "machine-readable output");

  auto* converge = app.add_subcommand("converge", "Josephy-Newton runs from random starts");
  cm::ConvergeSettings conv;
  bool trajectories = false;
  converge->add_option("file", file, "problem file (JSON)")->required();
  converge->add_option("point", point, "target point (default: first)");
  converge->add_option("--starts", conv.starts, "number of runs");
  converge->add_option("--ball", conv.ball, "radius of the start ball");
  converge->add_option("--seed", conv.seed, "random seed");
  converge->add_option("--max-iter", conv.max_iter, "iteration limit");
  converge->add_option("--tol", conv.tol, "stopping residual");
  converge->add_flag("--trajectories", trajectories, "include iterates in JSON output");
  converge->add_flag("--json", as_json, "machine-readable output");

  auto* corpus = app.add_subcommand("corpus", "run the built-in corpus against its golden values");
  bool list_only = false;
  std::string goldens, export_dir, write_goldens;
  corpus->add_flag("--list", list_only, "list instances and notes");
  corpus->add_option("--goldens", goldens, "compare against this golden file instead of the built-in one");
  corpus->add_option("--export", export_dir, "write the built-in problem files to a directory");
  corpus->add_option("--write-goldens", write_goldens, "write the computed facts as a golden file");
  corpus->add_flag("--json", as_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(file, points, all_vertices, as_json);
    if (*perturb) {
      probe.radii = radii;
      return cmd_perturb(file, point, probe, as_json);
    }
    if (*converge) return cmd_converge(file, point, conv, as_json, trajectories);
    if (*corpus) return cmd_corpus(list_only, goldens, export_dir, write_goldens, as_json);
  } catch (const cm::SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const cm::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const cm::MembershipError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNotSubgradient;
  } catch (const cm::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
