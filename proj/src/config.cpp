// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "stexide/source_model.hpp"

namespace stexide {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void malformed(const std::filesystem::path& file,
                            std::size_t line, const std::string& what) {
  throw Error("MalformedConfig", file.string() + ":" + std::to_string(line) +
                                     ": " + what);
}

// Parses a quoted or bare scalar; quoted strings support \" and \\.
std::string parse_scalar(const std::string& raw,
                         const std::filesystem::path& file, std::size_t line) {
  std::string v = trim(raw);
  if (v.empty()) malformed(file, line, "empty value");
  if (v.front() == '"') {
    std::string out;
    bool closed = false;
    for (std::size_t i = 1; i < v.size(); ++i) {
      char c = v[i];
      if (c == '\\' && i + 1 < v.size()) {
        out.push_back(v[++i]);
        continue;
      }
      if (c == '"') {
        if (trim(v.substr(i + 1)).empty()) {
          closed = true;
          break;
        }
        malformed(file, line, "trailing content after closing quote");
      }
      out.push_back(c);
    }
    if (!closed) malformed(file, line, "unterminated string");
    return out;
  }
  return v;
}

std::vector<std::string> parse_array(const std::string& raw,
                                     const std::filesystem::path& file,
                                     std::size_t line) {
  std::string v = trim(raw);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    malformed(file, line, "expected [ ... ] array");
  }
  std::vector<std::string> out;
  std::string inner = v.substr(1, v.size() - 2);
  std::size_t start = 0;
  bool in_string = false;
  for (std::size_t i = 0; i <= inner.size(); ++i) {
    if (i < inner.size()) {
      char c = inner[i];
      if (c == '"' && (i == 0 || inner[i - 1] != '\\')) in_string = !in_string;
      if (c != ',' || in_string) continue;
    } else if (in_string) {
      malformed(file, line, "unterminated string in array");
    }
    std::string item = trim(inner.substr(start, i - start));
    if (!item.empty()) out.push_back(parse_scalar(item, file, line));
    start = i + 1;
  }
  return out;
}

}  // namespace

ProjectConfig load_config(const std::filesystem::path& dir) {
  ProjectConfig cfg;
  cfg.root = dir;
  std::filesystem::path file = dir / "stexide.toml";
  std::ifstream in(file);
  if (!in) return cfg;  // missing config means defaults

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip comments outside strings.
    std::string stripped;
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
      if (c == '#' && !in_string) break;
      stripped.push_back(c);
    }
    std::string content = trim(stripped);
    if (content.empty()) continue;
    if (content.front() == '[') {
      cfg.warnings.push_back(file.string() + ":" + std::to_string(lineno) +
                             ": ignoring section header " + content);
      continue;
    }
    std::size_t eq = content.find('=');
    if (eq == std::string::npos) {
      malformed(file, lineno, "expected key = value");
    }
    std::string key = trim(content.substr(0, eq));
    std::string value = content.substr(eq + 1);
    if (key.empty()) malformed(file, lineno, "empty key");
    if (key == "root") {
      cfg.root = dir / parse_scalar(value, file, lineno);
    } else if (key == "source_globs" || key == "sourceGlobs") {
      cfg.source_globs = parse_array(value, file, lineno);
    } else if (key == "builtin_macros_file" || key == "builtinMacrosFile") {
      cfg.builtin_macros_file = dir / parse_scalar(value, file, lineno);
    } else if (key == "output_format" || key == "outputFormat") {
      std::string fmt = parse_scalar(value, file, lineno);
      if (fmt != "text" && fmt != "json") {
        malformed(file, lineno, "output format must be 'text' or 'json'");
      }
      cfg.output_format = fmt;
    } else {
      cfg.warnings.push_back(file.string() + ":" + std::to_string(lineno) +
                             ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace stexide
