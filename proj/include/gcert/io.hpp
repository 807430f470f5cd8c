#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gcert/model.hpp"

namespace gcert {

struct ParsedProblem {
  ProblemInstance instance;
  std::vector<CandidatePoint> candidates;
  std::string title;
};

/// Parses a problem document. Throws ParseError (with line or field path) on
/// malformed input and ValidationError when the data violate a model invariant.
ParsedProblem parse_problem_text(const std::string& text);
ParsedProblem parse_problem_file(const std::string& path);
/// Resolves a path on disk first, then a built-in example name such as "e1.opt".
ParsedProblem load_problem(const std::string& path_or_builtin);

nlohmann::json problem_to_json(const ProblemInstance& p,
                               const std::vector<CandidatePoint>& candidates = {},
                               const std::string& title = "");
std::string serialize_problem(const ProblemInstance& p,
                              const std::vector<CandidatePoint>& candidates = {},
                              const std::string& title = "");

nlohmann::json matrix_to_json(const SymmetricMatrix& M);

}  // namespace gcert
