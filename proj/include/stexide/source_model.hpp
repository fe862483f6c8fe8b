// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stexide {

// Domain error with a stable code (UnknownModule, RangeOutOfBounds, ...).
// Thrown for API contract violations; problems inside user documents are
// reported as diagnostics instead.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// 1-based line, 0-based column counted in Unicode scalar values.
struct SourcePosition {
  uint32_t line = 1;
  uint32_t column = 0;
  auto operator<=>(const SourcePosition&) const = default;
};

// Half-open [start, end).
struct SourceRange {
  SourcePosition start;
  SourcePosition end;

  auto operator<=>(const SourceRange&) const = default;

  bool empty() const { return start == end; }
  bool contains(SourcePosition p) const { return start <= p && p < end; }
  bool contains(const SourceRange& other) const {
    return start <= other.start && other.end <= end;
  }
  // Closed-interval overlap: touching endpoints count.
  bool touches(const SourceRange& other) const {
    return start <= other.end && other.start <= end;
  }
};

std::string to_string(SourcePosition p);
std::string to_string(const SourceRange& r);

// Normalized workspace-relative path: forward slashes, no "." or ".."
// segments. Equality is byte equality of the normalized value.
class DocumentUri {
 public:
  DocumentUri() = default;
  explicit DocumentUri(std::string_view path) : value_(normalize(path)) {}

  static std::string normalize(std::string_view path);

  const std::string& value() const { return value_; }
  bool empty() const { return value_.empty(); }

  // Path up to (excluding) the last '/', or "" for root-level files.
  std::string directory() const;
  // File name without directory and without a trailing ".tex"/".stex".
  std::string stem() const;

  auto operator<=>(const DocumentUri&) const = default;

 private:
  std::string value_;
};

// `document#moduleId`; parse/render round-trips.
struct ModuleUri {
  DocumentUri document;
  std::string module_id;

  std::string render() const { return document.value() + "#" + module_id; }
  static std::optional<ModuleUri> parse(std::string_view rendered);

  auto operator<=>(const ModuleUri&) const = default;
};

struct TextEdit {
  DocumentUri target;
  SourceRange range;
  std::string replacement;
};

struct Document {
  std::string text;
  uint64_t version = 0;
};

// --- position/offset mapping -------------------------------------------
//
// Text is UTF-8 (ingestion replaces invalid bytes with U+FFFD). Columns
// count Unicode scalar values, so these helpers walk code points.

// Byte offset of `pos`; throws Error("RangeOutOfBounds") when pos does not
// address a position inside or at the end of `text`.
std::size_t position_to_offset(std::string_view text, SourcePosition pos);
SourcePosition offset_to_position(std::string_view text, std::size_t offset);
// Position reached by scanning `piece` starting at `from`.
SourcePosition advance_position(SourcePosition from, std::string_view piece);
SourcePosition end_position(std::string_view text);
bool range_valid_in(std::string_view text, const SourceRange& range);
// Substring addressed by a range.
std::string slice(std::string_view text, const SourceRange& range);
// Pure splice: text with `range` replaced by `replacement`.
std::string splice(std::string_view text, const SourceRange& range,
                   std::string_view replacement);

// Replaces invalid UTF-8 byte sequences with U+FFFD. `replaced` (optional)
// is set when a replacement happened.
std::string sanitize_utf8(std::string_view in, bool* replaced = nullptr);

// Relative path from `from_dir` (a normalized directory, possibly "") to
// `to` (a normalized file path), using ".." segments where needed.
std::string relative_path(std::string_view from_dir, std::string_view to);

// Glob match supporting `**` (crosses '/'), `*`, and `?`.
bool glob_match(std::string_view pattern, std::string_view path);

// --- workspace -----------------------------------------------------------

class Workspace {
 public:
  Workspace() = default;

  // Loads every file under `root` matching any glob (default "**/*.tex").
  // Unreadable files and invalid UTF-8 produce per-file warnings; the scan
  // continues. Throws Error("RootNotFound") when root is missing.
  static Workspace scan(const std::filesystem::path& root,
                        const std::vector<std::string>& globs,
                        std::vector<std::string>* warnings = nullptr);

  const std::filesystem::path& root() const { return root_; }
  const std::map<DocumentUri, Document>& documents() const {
    return documents_;
  }
  const Document* find(const DocumentUri& uri) const;
  Document* find(const DocumentUri& uri);
  bool contains(const DocumentUri& uri) const {
    return documents_.count(uri) != 0;
  }

  void add_document(const DocumentUri& uri, std::string text);

  // Splices `edit` into its target document, bumps the version, and returns
  // the updated text. Throws RangeOutOfBounds / UnknownDocument.
  const std::string& apply_text_edit(const TextEdit& edit);

 private:
  std::filesystem::path root_;
  std::map<DocumentUri, Document> documents_;
};

}  // namespace stexide
