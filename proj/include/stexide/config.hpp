// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace stexide {

struct ProjectConfig {
  std::filesystem::path root = ".";
  std::vector<std::string> source_globs = {"**/*.tex"};
  std::optional<std::filesystem::path> builtin_macros_file;
  std::string output_format = "text";
  std::vector<std::string> warnings;  // unknown keys etc.
};

// Reads `stexide.toml` from dir if present; defaults otherwise. Unknown
// keys produce warnings. Throws Error("MalformedConfig") with a
// line-numbered message on syntax errors.
ProjectConfig load_config(const std::filesystem::path& dir);

}  // namespace stexide
