#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gcert {

struct BuiltinExample {
  std::string name;  ///< e.g. "e1.opt"
  std::string title;
  std::string text;  ///< problem document
};

const std::vector<BuiltinExample>& builtin_examples();

/// Accepts "e1", "e1.opt" or a path ending in "/e1.opt".
std::optional<BuiltinExample> find_builtin(const std::string& name);

}  // namespace gcert
