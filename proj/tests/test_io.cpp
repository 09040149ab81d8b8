#include <doctest.h>

#include <set>

#include "critmult/corpus.hpp"
#include "critmult/report.hpp"
#include "helpers.hpp"

using namespace critmult;
using namespace testutil;

namespace {

const char* kOneDim = R"({
  "name": "toy", "n": 1, "m": 1,
  "phi0": [{"coeff": "1/2", "exponents": [2]}, {"coeff": "-1", "exponents": [1]}],
  "Phi": [[{"coeff": "1", "exponents": [1]}]],
  "theta": {"pieces": [{"a": ["0"], "alpha": "0"}, {"a": ["1"], "alpha": "0"}], "domain": []},
  "points": [{"name": "kkt", "x": ["0"], "v": ["1"]}]
})";

std::string with(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("problem files parse and round-trip") {
  const auto p = parse_problem_text(kOneDim);
  CHECK(p.name == "toy");
  CHECK(p.composite());
  CHECK(p.point("kkt").v == ivec({1}));
  CHECK_THROWS_AS(p.point("missing"), SchemaError);
  const auto again = parse_problem(problem_json(p));
  CHECK(problem_json(again) == problem_json(p));
  CHECK(again.system().psi(zeros(1), ivec({1})) == zeros(1));

  for (const auto& q : builtin_corpus()) {
    CAPTURE(q.name);
    CHECK(problem_json(parse_problem(problem_json(q))) == problem_json(q));
  }
}

TEST_CASE("malformed problem files are schema errors") {
  const std::string good = kOneDim;
  CHECK_THROWS_AS(parse_problem_text(with(good, "\"1/2\"", "\"1/0\"")), SchemaError);
  CHECK_THROWS_AS(parse_problem_text(with(good, "\"1/2\"", "\"half\"")), SchemaError);
  CHECK_THROWS_AS(parse_problem_text(with(good, "\"1/2\"", "0.5")), SchemaError);
  CHECK_THROWS_AS(parse_problem_text(with(good, "\"n\": 1", "\"n\": 2")), SchemaError);
  CHECK_THROWS_AS(parse_problem_text(with(good, "\"x\": [\"0\"]", "\"x\": [\"0\", \"1\"]")), SchemaError);
  CHECK_THROWS_AS(parse_problem_text(with(good, "\"phi0\"", "\"f\"")), SchemaError);
  CHECK_THROWS_AS(parse_problem_text(with(good, "\"pieces\": [{\"a\": [\"0\"], \"alpha\": \"0\"}, {\"a\": [\"1\"], \"alpha\": \"0\"}]", "\"pieces\": []")), SchemaError);
  CHECK_THROWS_AS(parse_problem_text("{ not json"), SchemaError);
  CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), SchemaError);
}

TEST_CASE("analysis reports are deterministic and carry certificates") {
  for (const auto& p : builtin_corpus()) {
    CAPTURE(p.name);
    std::vector<std::string> names;
    for (const auto& pt : p.points) names.push_back(pt.name);
    const auto a = analysis_report(p, names), b = analysis_report(p, names);
    CHECK(a == b);
    CHECK(render_analysis(a) == render_analysis(b));
  }
  const auto& three_constraints = [] {
    for (const auto& p : builtin_corpus())
      if (p.name == "three_constraints") return p;
    throw std::runtime_error("three_constraints missing");
  }();
  const auto facts = point_facts(analyze_point(three_constraints, three_constraints.point("crit")));
  CHECK(facts["criticality"] == "Critical");
  CHECK(facts["sosc"] == false);
}

TEST_CASE("corpus goldens: built-in values match and tampering is detected") {
  const auto corpus = builtin_corpus();
  CHECK(corpus.size() >= 7);
  std::set<std::string> names;
  for (const auto& p : corpus) names.insert(p.name);
  for (const char* n : {"three_constraints", "x3_active", "x3_literal", "segment", "onedim"}) CHECK(names.count(n) == 1);

  const auto goldens = builtin_goldens();
  const auto actual = corpus_facts(corpus);
  CHECK(golden_diff(goldens, actual).empty());

  auto tampered = goldens;
  tampered["three_constraints"]["crit"]["criticality"] = "Noncritical";
  const auto diff = golden_diff(tampered, actual);
  REQUIRE(diff.size() == 1);
  CHECK(diff.front().find("three_constraints") != std::string::npos);

  auto missing = goldens;
  missing.erase("onedim");
  CHECK_FALSE(golden_diff(missing, actual).empty());
}
