#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "critmult/varsys.hpp"

namespace critmult {

// Malformed or inconsistent problem data.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedPoint {
  std::string name;
  Vec x;
  Vec v;
};

struct ProblemFile {
  std::string name;
  std::size_t n = 0;
  std::size_t m = 0;
  std::optional<PolyExpr> phi0;  // composite problem when present
  std::optional<PolyMap> f;
  PolyMap phi;
  std::vector<CpwlFunction> theta;  // exactly one element
  std::vector<NamedPoint> points;
  std::vector<std::string> notes;

  bool composite() const { return phi0.has_value(); }
  const CpwlFunction& cpwl() const { return theta.front(); }
  VariationalSystem system() const;
  const NamedPoint& point(const std::string& name) const;  // throws SchemaError
};

ProblemFile parse_problem(const nlohmann::json& j);
ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem(const std::string& path);

nlohmann::json rational_json(const Rational& r);
nlohmann::json vec_json(const Vec& v);
nlohmann::json poly_json(const PolyExpr& p);
nlohmann::json hpoly_json(const HPoly& p);
nlohmann::json vpoly_json(const VPoly& p);
nlohmann::json problem_json(const ProblemFile& p);

}  // namespace critmult
