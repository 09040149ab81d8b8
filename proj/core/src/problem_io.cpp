#include "critmult/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace critmult {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw SchemaError(where + ": " + what); }

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::size_t natural(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

Rational rational(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "rationals are written as strings \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ParseError& e) {
    fail(where, e.what());
  }
}

Vec vector(const json& j, std::size_t len, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  if (j.size() != len) fail(where, "expected " + std::to_string(len) + " entries, got " + std::to_string(j.size()));
  Vec v;
  for (std::size_t i = 0; i < len; ++i) v.push_back(rational(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

PolyExpr polynomial(const json& j, std::size_t nvars, const std::string& where) {
  if (!j.is_array()) fail(where, "a polynomial is a list of {coeff, exponents} terms");
  std::vector<Monomial> terms;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string w = where + "[" + std::to_string(t) + "]";
    if (!j[t].is_object()) fail(w, "expected an object");
    Monomial mono;
    mono.coeff = rational(field(j[t], "coeff", w), w + ".coeff");
    const json& ex = field(j[t], "exponents", w);
    if (!ex.is_array() || ex.size() != nvars) fail(w + ".exponents", "expected " + std::to_string(nvars) + " exponents");
    for (std::size_t i = 0; i < nvars; ++i) {
      if (!ex[i].is_number_integer() || ex[i].get<long long>() < 0 || ex[i].get<long long>() > 64)
        fail(w + ".exponents", "exponents are integers in [0, 64]");
      mono.exponents.push_back(ex[i].get<unsigned>());
    }
    terms.push_back(std::move(mono));
  }
  return PolyExpr(nvars, std::move(terms));
}

PolyMap poly_map(const json& j, std::size_t nvars, std::size_t len, const std::string& where) {
  if (!j.is_array() || j.size() != len) fail(where, "expected a list of " + std::to_string(len) + " polynomials");
  std::vector<PolyExpr> comps;
  for (std::size_t i = 0; i < len; ++i) comps.push_back(polynomial(j[i], nvars, where + "[" + std::to_string(i) + "]"));
  return PolyMap(nvars, std::move(comps));
}

CpwlFunction cpwl(const json& j, std::size_t m) {
  if (!j.is_object()) fail("theta", "expected an object");
  const json& pieces = field(j, "pieces", "theta");
  if (!pieces.is_array() || pieces.empty()) fail("theta.pieces", "at least one affine piece is required");
  std::vector<AffinePiece> ps;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string w = "theta.pieces[" + std::to_string(i) + "]";
    ps.push_back({vector(field(pieces[i], "a", w), m, w + ".a"), rational(field(pieces[i], "alpha", w), w + ".alpha")});
  }
  std::vector<DomainRow> rows;
  if (auto it = j.find("domain"); it != j.end()) {
    if (!it->is_array()) fail("theta.domain", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string w = "theta.domain[" + std::to_string(i) + "]";
      rows.push_back({vector(field((*it)[i], "d", w), m, w + ".d"), rational(field((*it)[i], "beta", w), w + ".beta")});
    }
  }
  try {
    return CpwlFunction(m, std::move(ps), std::move(rows));
  } catch (const std::exception& e) {
    fail("theta", e.what());
  }
}

}  // namespace

VariationalSystem ProblemFile::system() const {
  if (phi0) return CompositeProblem{*phi0, phi, cpwl()}.system();
  return VariationalSystem(*f, phi, cpwl());
}

const NamedPoint& ProblemFile::point(const std::string& pname) const {
  for (const auto& p : points)
    if (p.name == pname) return p;
  throw SchemaError("no point named '" + pname + "' in " + name);
}

ProblemFile parse_problem(const json& j) {
  if (!j.is_object()) fail("problem", "expected a JSON object");
  ProblemFile p;
  const json& name = field(j, "name", "problem");
  if (!name.is_string()) fail("name", "expected a string");
  p.name = name.get<std::string>();
  p.n = natural(field(j, "n", "problem"), "n");
  p.m = natural(field(j, "m", "problem"), "m");
  if (p.n == 0 || p.m == 0) fail("problem", "n and m must be positive");
  const bool has_phi0 = j.contains("phi0"), has_f = j.contains("f");
  if (has_phi0 == has_f) fail("problem", "exactly one of 'phi0' and 'f' is required");
  if (has_phi0) p.phi0 = polynomial(j["phi0"], p.n, "phi0");
  if (has_f) p.f = poly_map(j["f"], p.n, p.n, "f");
  p.phi = poly_map(field(j, "Phi", "problem"), p.n, p.m, "Phi");
  p.theta.push_back(cpwl(field(j, "theta", "problem"), p.m));
  const json& pts = field(j, "points", "problem");
  if (!pts.is_array()) fail("points", "expected an array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string w = "points[" + std::to_string(i) + "]";
    const json& nm = field(pts[i], "name", w);
    if (!nm.is_string()) fail(w + ".name", "expected a string");
    NamedPoint np{nm.get<std::string>(), vector(field(pts[i], "x", w), p.n, w + ".x"),
                  vector(field(pts[i], "v", w), p.m, w + ".v")};
    if (!seen.insert(np.name).second) fail(w, "duplicate point name '" + np.name + "'");
    p.points.push_back(std::move(np));
  }
  if (auto it = j.find("notes"); it != j.end()) {
    if (!it->is_array()) fail("notes", "expected a list of strings");
    for (const auto& s : *it) {
      if (!s.is_string()) fail("notes", "expected a list of strings");
      p.notes.push_back(s.get<std::string>());
    }
  }
  return p;
}

ProblemFile parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(j);
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

json rational_json(const Rational& r) { return to_string(r); }

json vec_json(const Vec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json poly_json(const PolyExpr& p) {
  json a = json::array();
  for (const auto& t : p.terms()) a.push_back({{"coeff", to_string(t.coeff)}, {"exponents", t.exponents}});
  return a;
}

json hpoly_json(const HPoly& p) {
  json eqs = json::array(), ineqs = json::array();
  for (const auto& c : p.eqs) eqs.push_back({{"normal", vec_json(c.normal)}, {"rhs", to_string(c.rhs)}});
  for (const auto& c : p.ineqs) ineqs.push_back({{"normal", vec_json(c.normal)}, {"rhs", to_string(c.rhs)}});
  return {{"dim", p.dim}, {"eqs", eqs}, {"ineqs", ineqs}};
}

json vpoly_json(const VPoly& p) {
  auto list = [](const std::vector<Vec>& vs) {
    json a = json::array();
    for (const auto& v : vs) a.push_back(vec_json(v));
    return a;
  };
  return {{"dim", p.dim}, {"points", list(p.points)}, {"rays", list(p.rays)}, {"lines", list(p.lines)}};
}

json problem_json(const ProblemFile& p) {
  json j;
  j["name"] = p.name;
  j["n"] = p.n;
  j["m"] = p.m;
  if (p.phi0) j["phi0"] = poly_json(*p.phi0);
  if (p.f) {
    j["f"] = json::array();
    for (const auto& c : p.f->components()) j["f"].push_back(poly_json(c));
  }
  j["Phi"] = json::array();
  for (const auto& c : p.phi.components()) j["Phi"].push_back(poly_json(c));
  json pieces = json::array(), dom = json::array();
  for (const auto& pc : p.cpwl().pieces()) pieces.push_back({{"a", vec_json(pc.a)}, {"alpha", to_string(pc.alpha)}});
  for (const auto& r : p.cpwl().domain_rows()) dom.push_back({{"d", vec_json(r.d)}, {"beta", to_string(r.beta)}});
  j["theta"] = {{"pieces", pieces}, {"domain", dom}};
  j["points"] = json::array();
  for (const auto& pt : p.points) j["points"].push_back({{"name", pt.name}, {"x", vec_json(pt.x)}, {"v", vec_json(pt.v)}});
  if (!p.notes.empty()) j["notes"] = p.notes;
  return j;
}

}  // namespace critmult
