// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace stexide {

struct BuiltinMacro {
  std::string name;
  int arity = 0;
};

// Common LaTeX commands offered by completion alongside workspace symbols.
const std::vector<BuiltinMacro>& builtin_macros();

// Loads additional "name arity" lines; '#' starts a comment.
// Throws Error("MalformedMacroFile") on unparsable lines.
std::vector<BuiltinMacro> load_macro_file(const std::filesystem::path& path);

}  // namespace stexide
