#include "gcert/io.hpp"

#include <fstream>
#include <sstream>

#include "gcert/builtins.hpp"
#include "gcert/errors.hpp"

namespace gcert {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError("expected an object", path);
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing field '" + key + "'", path);
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError("expected a number", path);
  return j.get<double>();
}

Vector vector_of(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError("expected an array of numbers", path);
  Vector v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    v.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return v;
}

SymmetricMatrix matrix_of(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty list of rows", path);
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    rows.push_back(vector_of(j[i], path + "[" + std::to_string(i) + "]"));
  }
  try {
    return SymmetricMatrix::from_rows(rows);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

QuadraticFunction quadratic_of(const json& j, const std::string& path, const char* mat,
                               const char* lin, const char* cst) {
  SymmetricMatrix A = matrix_of(field(j, mat, path), path + "." + mat);
  Vector a = j.contains(lin) ? vector_of(j.at(lin), path + "." + lin) : Vector(A.dim(), 0.0);
  const double c = j.contains(cst) ? number(j.at(cst), path + "." + cst) : 0.0;
  if (a.size() != A.dim()) {
    throw ValidationError(path + "." + lin + ": length " + std::to_string(a.size()) +
                          " does not match matrix dimension " + std::to_string(A.dim()));
  }
  return QuadraticFunction(std::move(A), std::move(a), c);
}

QuadraticFunction quadratic_of(const json& j, const std::string& path) {
  return quadratic_of(j, path, "A", "a", "c");
}

RhoConvexFunction rho_convex_of(const json& j, const std::string& path) {
  const json& f = field(j, "f", path);
  QuadraticFunction base = quadratic_of(field(f, "base", path + ".f"), path + ".f.base");
  std::vector<PowerTerm> terms;
  if (f.contains("power_terms")) {
    const json& list = f.at("power_terms");
    const std::string lp = path + ".f.power_terms";
    if (!list.is_array()) throw ParseError("expected an array", lp);
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string tp = lp + "[" + std::to_string(k) + "]";
      const json& t = list[k];
      PowerTerm term;
      term.coeff = number(field(t, "coeff", tp), tp + ".coeff");
      const json& aff = field(t, "affine", tp);
      term.w = vector_of(field(aff, "w", tp + ".affine"), tp + ".affine.w");
      term.offset = aff.contains("b") ? number(aff.at("b"), tp + ".affine.b") : 0.0;
      const json& e = field(t, "exponent", tp);
      if (!e.is_number_integer()) throw ParseError("expected an integer", tp + ".exponent");
      term.exponent = e.get<int>();
      terms.push_back(std::move(term));
    }
  }
  try {
    ConvexSmoothFunction fn(std::move(base), std::move(terms));
    return RhoConvexFunction(std::move(fn), matrix_of(field(j, "A", path), path + ".A"));
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ValidationError(path + ": " + msg);
  }
}

FractionalConstraint fractional_of(const json& j, const std::string& path, bool is_objective) {
  QuadraticFunction num = quadratic_of(field(j, "num", path), path + ".num");
  QuadraticFunction den = quadratic_of(field(j, "den", path), path + ".den", "B", "b", "d");
  double bound = 0.0;
  if (!is_objective) bound = number(field(j, "bound", path), path + ".bound");
  try {
    return FractionalConstraint(std::move(num), std::move(den), bound);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

template <class F, class Parse>
std::vector<F> list_of(const json& doc, const Parse& parse) {
  std::vector<F> out;
  if (!doc.contains("constraints")) return out;
  const json& list = doc.at("constraints");
  if (!list.is_array()) throw ParseError("expected an array", "constraints");
  for (std::size_t k = 0; k < list.size(); ++k) {
    out.push_back(parse(list[k], "constraints[" + std::to_string(k) + "]"));
  }
  return out;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

json quadratic_json(const QuadraticFunction& q, const char* mat = "A", const char* lin = "a",
                    const char* cst = "c") {
  return json{{mat, matrix_to_json(q.A)}, {lin, q.a}, {cst, q.c}};
}

json rho_convex_json(const RhoConvexFunction& g) {
  json terms = json::array();
  for (const auto& t : g.f.power_terms) {
    terms.push_back(json{{"coeff", t.coeff},
                         {"affine", json{{"w", t.w}, {"b", t.offset}}},
                         {"exponent", t.exponent}});
  }
  return json{{"f", json{{"base", quadratic_json(g.f.base)}, {"power_terms", terms}}},
              {"A", matrix_to_json(g.A)}};
}

json fractional_json(const FractionalConstraint& fc, bool is_objective) {
  json j{{"num", quadratic_json(fc.num)}, {"den", quadratic_json(fc.den, "B", "b", "d")}};
  if (!is_objective) j["bound"] = fc.bound;
  return j;
}

}  // namespace

json matrix_to_json(const SymmetricMatrix& M) { return M.to_rows(); }

ParsedProblem parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), "", line_of(text, e.byte));
  }
  if (!doc.is_object()) throw ParseError("top level must be an object", "");

  const json& kind_j = field(doc, "kind", "");
  if (!kind_j.is_string()) throw ParseError("expected a string", "kind");
  const std::string kind = kind_j.get<std::string>();

  const json& vars = field(doc, "variables", "");
  if (!vars.is_array() || vars.empty()) {
    throw ParseError("expected a non-empty array", "variables");
  }
  std::vector<VariableDomain> domains;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string vp = "variables[" + std::to_string(i) + "]";
    VariableDomain d;
    d.lower = number(field(vars[i], "lower", vp), vp + ".lower");
    d.upper = number(field(vars[i], "upper", vp), vp + ".upper");
    const json& dom = field(vars[i], "domain", vp);
    if (dom == "continuous") {
      d.kind = DomainKind::Continuous;
    } else if (dom == "discrete") {
      d.kind = DomainKind::Discrete;
    } else {
      throw ParseError("domain must be \"continuous\" or \"discrete\"", vp + ".domain");
    }
    domains.push_back(d);
  }
  MixedBox box(std::move(domains));

  ProblemInstance::Program program;
  if (kind == "quadratic") {
    QuadraticProgram qp;
    qp.objective = quadratic_of(field(doc, "objective", ""), "objective");
    qp.constraints = list_of<QuadraticFunction>(
        doc, [](const json& j, const std::string& p) { return quadratic_of(j, p); });
    program = std::move(qp);
  } else if (kind == "rho_convex") {
    RhoConvexProgram rp;
    rp.objective = rho_convex_of(field(doc, "objective", ""), "objective");
    rp.constraints = list_of<RhoConvexFunction>(doc, rho_convex_of);
    program = std::move(rp);
  } else if (kind == "fractional") {
    FractionalProgram fp;
    fp.objective = fractional_of(field(doc, "objective", ""), "objective", true);
    fp.constraints = list_of<FractionalConstraint>(
        doc, [](const json& j, const std::string& p) { return fractional_of(j, p, false); });
    program = std::move(fp);
  } else {
    throw ParseError("kind must be \"quadratic\", \"rho_convex\" or \"fractional\"", "kind");
  }

  ParsedProblem out{ProblemInstance(std::move(box), std::move(program)), {}, ""};
  if (doc.contains("title")) {
    if (!doc.at("title").is_string()) throw ParseError("expected a string", "title");
    out.title = doc.at("title").get<std::string>();
  }
  if (doc.contains("candidates")) {
    const json& cands = doc.at("candidates");
    if (!cands.is_array()) throw ParseError("expected an array of points", "candidates");
    for (std::size_t k = 0; k < cands.size(); ++k) {
      const std::string cp = "candidates[" + std::to_string(k) + "]";
      Vector x = vector_of(cands[k], cp);
      if (x.size() != out.instance.dim()) {
        throw ValidationError(cp + ": expected " + std::to_string(out.instance.dim()) +
                              " coordinates, got " + std::to_string(x.size()));
      }
      out.candidates.push_back(CandidatePoint{std::move(x)});
    }
  }
  return out;
}

ParsedProblem parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

ParsedProblem load_problem(const std::string& path_or_builtin) {
  if (std::ifstream(path_or_builtin).good()) return parse_problem_file(path_or_builtin);
  if (const auto b = find_builtin(path_or_builtin)) return parse_problem_text(b->text);
  throw ParseError("no such file or built-in example", path_or_builtin);
}

json problem_to_json(const ProblemInstance& p, const std::vector<CandidatePoint>& candidates,
                     const std::string& title) {
  json doc;
  if (!title.empty()) doc["title"] = title;
  json vars = json::array();
  for (const auto& d : p.box().domains()) {
    vars.push_back(json{{"lower", d.lower},
                        {"upper", d.upper},
                        {"domain", d.kind == DomainKind::Continuous ? "continuous" : "discrete"}});
  }
  doc["variables"] = vars;
  json cons = json::array();
  switch (p.kind()) {
    case ProblemKind::Quadratic:
      doc["kind"] = "quadratic";
      doc["objective"] = quadratic_json(p.quadratic().objective);
      for (const auto& c : p.quadratic().constraints) cons.push_back(quadratic_json(c));
      break;
    case ProblemKind::RhoConvex:
      doc["kind"] = "rho_convex";
      doc["objective"] = rho_convex_json(p.rho_convex().objective);
      for (const auto& c : p.rho_convex().constraints) cons.push_back(rho_convex_json(c));
      break;
    case ProblemKind::Fractional:
      doc["kind"] = "fractional";
      doc["objective"] = fractional_json(p.fractional().objective, true);
      for (const auto& c : p.fractional().constraints) cons.push_back(fractional_json(c, false));
      break;
  }
  doc["constraints"] = cons;
  if (!candidates.empty()) {
    json cands = json::array();
    for (const auto& c : candidates) cands.push_back(c.x);
    doc["candidates"] = cands;
  }
  return doc;
}

std::string serialize_problem(const ProblemInstance& p,
                              const std::vector<CandidatePoint>& candidates,
                              const std::string& title) {
  return problem_to_json(p, candidates, title).dump(2) + "\n";
}

}  // namespace gcert
