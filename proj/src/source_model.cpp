// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/source_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace stexide {

namespace {

bool is_utf8_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// Length of the valid UTF-8 sequence starting at in[i], or 0 if invalid.
std::size_t utf8_sequence_length(std::string_view in, std::size_t i) {
  unsigned char c = static_cast<unsigned char>(in[i]);
  std::size_t len;
  if (c < 0x80) {
    return 1;
  } else if ((c & 0xE0) == 0xC0) {
    len = 2;
    if (c < 0xC2) return 0;  // overlong
  } else if ((c & 0xF0) == 0xE0) {
    len = 3;
  } else if ((c & 0xF8) == 0xF0) {
    len = 4;
    if (c > 0xF4) return 0;
  } else {
    return 0;
  }
  if (i + len > in.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    if (!is_utf8_continuation(static_cast<unsigned char>(in[i + k]))) return 0;
  }
  // Reject surrogates and out-of-range for 3/4 byte forms.
  if (len == 3) {
    unsigned char c1 = static_cast<unsigned char>(in[i + 1]);
    if (c == 0xE0 && c1 < 0xA0) return 0;
    if (c == 0xED && c1 > 0x9F) return 0;
  }
  if (len == 4) {
    unsigned char c1 = static_cast<unsigned char>(in[i + 1]);
    if (c == 0xF0 && c1 < 0x90) return 0;
    if (c == 0xF4 && c1 > 0x8F) return 0;
  }
  return len;
}

}  // namespace

std::string to_string(SourcePosition p) {
  return std::to_string(p.line) + ":" + std::to_string(p.column);
}

std::string to_string(const SourceRange& r) {
  return to_string(r.start) + "-" + to_string(r.end);
}

std::string DocumentUri::normalize(std::string_view path) {
  std::string work(path);
  std::replace(work.begin(), work.end(), '\\', '/');
  std::vector<std::string> segments;
  std::size_t i = 0;
  while (i <= work.size()) {
    std::size_t j = work.find('/', i);
    if (j == std::string::npos) j = work.size();
    std::string seg = work.substr(i, j - i);
    if (seg == "..") {
      if (!segments.empty() && segments.back() != "..") {
        segments.pop_back();
      } else {
        segments.push_back("..");
      }
    } else if (!seg.empty() && seg != ".") {
      segments.push_back(seg);
    }
    i = j + 1;
  }
  std::string out;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (k) out += '/';
    out += segments[k];
  }
  return out;
}

std::string DocumentUri::directory() const {
  std::size_t slash = value_.rfind('/');
  return slash == std::string::npos ? std::string() : value_.substr(0, slash);
}

std::string DocumentUri::stem() const {
  std::size_t slash = value_.rfind('/');
  std::string name =
      slash == std::string::npos ? value_ : value_.substr(slash + 1);
  for (std::string_view ext : {".tex", ".stex"}) {
    if (name.size() > ext.size() &&
        name.compare(name.size() - ext.size(), ext.size(), ext) == 0) {
      return name.substr(0, name.size() - ext.size());
    }
  }
  std::size_t dot = name.rfind('.');
  return dot == std::string::npos || dot == 0 ? name : name.substr(0, dot);
}

std::optional<ModuleUri> ModuleUri::parse(std::string_view rendered) {
  std::size_t hash = rendered.rfind('#');
  if (hash == std::string_view::npos || hash == 0 ||
      hash + 1 >= rendered.size()) {
    return std::nullopt;
  }
  ModuleUri uri;
  uri.document = DocumentUri(rendered.substr(0, hash));
  uri.module_id = std::string(rendered.substr(hash + 1));
  return uri;
}

std::size_t position_to_offset(std::string_view text, SourcePosition pos) {
  if (pos.line < 1) throw Error("RangeOutOfBounds", "line must be >= 1");
  uint32_t line = 1;
  std::size_t i = 0;
  while (line < pos.line) {
    std::size_t nl = text.find('\n', i);
    if (nl == std::string_view::npos) {
      throw Error("RangeOutOfBounds",
                  "line " + std::to_string(pos.line) + " past end of text");
    }
    i = nl + 1;
    ++line;
  }
  uint32_t col = 0;
  while (col < pos.column) {
    if (i >= text.size() || text[i] == '\n') {
      throw Error("RangeOutOfBounds",
                  "column " + std::to_string(pos.column) + " past end of line " +
                      std::to_string(pos.line));
    }
    std::size_t len = utf8_sequence_length(text, i);
    i += len == 0 ? 1 : len;
    ++col;
  }
  return i;
}

SourcePosition offset_to_position(std::string_view text, std::size_t offset) {
  if (offset > text.size()) {
    throw Error("RangeOutOfBounds", "offset past end of text");
  }
  SourcePosition pos;
  std::size_t i = 0;
  while (i < offset) {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 0;
      ++i;
      continue;
    }
    std::size_t len = utf8_sequence_length(text, i);
    i += len == 0 ? 1 : len;
    ++pos.column;
  }
  return pos;
}

SourcePosition advance_position(SourcePosition from, std::string_view piece) {
  std::size_t i = 0;
  while (i < piece.size()) {
    if (piece[i] == '\n') {
      ++from.line;
      from.column = 0;
      ++i;
      continue;
    }
    std::size_t len = utf8_sequence_length(piece, i);
    i += len == 0 ? 1 : len;
    ++from.column;
  }
  return from;
}

SourcePosition end_position(std::string_view text) {
  return advance_position(SourcePosition{}, text);
}

bool range_valid_in(std::string_view text, const SourceRange& range) {
  if (range.end < range.start) return false;
  try {
    std::size_t a = position_to_offset(text, range.start);
    std::size_t b = position_to_offset(text, range.end);
    return a <= b;
  } catch (const Error&) {
    return false;
  }
}

std::string slice(std::string_view text, const SourceRange& range) {
  std::size_t a = position_to_offset(text, range.start);
  std::size_t b = position_to_offset(text, range.end);
  return std::string(text.substr(a, b - a));
}

std::string splice(std::string_view text, const SourceRange& range,
                   std::string_view replacement) {
  std::size_t a = position_to_offset(text, range.start);
  std::size_t b = position_to_offset(text, range.end);
  if (b < a) throw Error("RangeOutOfBounds", "inverted range");
  std::string out;
  out.reserve(text.size() - (b - a) + replacement.size());
  out.append(text.substr(0, a));
  out.append(replacement);
  out.append(text.substr(b));
  return out;
}

std::string sanitize_utf8(std::string_view in, bool* replaced) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";  // U+FFFD
  std::string out;
  out.reserve(in.size());
  bool any = false;
  std::size_t i = 0;
  while (i < in.size()) {
    std::size_t len = utf8_sequence_length(in, i);
    if (len == 0) {
      out += kReplacement;
      any = true;
      ++i;
    } else {
      out.append(in.substr(i, len));
      i += len;
    }
  }
  if (replaced) *replaced = any;
  return out;
}

std::string relative_path(std::string_view from_dir, std::string_view to) {
  std::vector<std::string> from_segs, to_segs;
  auto split = [](std::string_view s, std::vector<std::string>& out) {
    std::size_t i = 0;
    while (i <= s.size() && !s.empty()) {
      std::size_t j = s.find('/', i);
      if (j == std::string_view::npos) j = s.size();
      if (j > i) out.emplace_back(s.substr(i, j - i));
      i = j + 1;
      if (i > s.size()) break;
    }
  };
  split(from_dir, from_segs);
  split(to, to_segs);
  std::size_t common = 0;
  while (common < from_segs.size() && common + 1 < to_segs.size() &&
         from_segs[common] == to_segs[common]) {
    ++common;
  }
  std::string out;
  for (std::size_t k = common; k < from_segs.size(); ++k) out += "../";
  for (std::size_t k = common; k < to_segs.size(); ++k) {
    out += to_segs[k];
    if (k + 1 < to_segs.size()) out += '/';
  }
  return out;
}

namespace {

bool glob_match_at(std::string_view pat, std::size_t pi, std::string_view path,
                   std::size_t si) {
  while (pi < pat.size()) {
    char pc = pat[pi];
    if (pc == '*') {
      if (pi + 1 < pat.size() && pat[pi + 1] == '*') {
        std::size_t next = pi + 2;
        bool has_slash = next < pat.size() && pat[next] == '/';
        // "**/" may match zero directories.
        if (glob_match_at(pat, has_slash ? next + 1 : next, path, si)) {
          return true;
        }
        // Otherwise "**" consumes any run of characters, '/' included.
        for (std::size_t k = si + 1; k <= path.size(); ++k) {
          if (glob_match_at(pat, next, path, k)) return true;
        }
        return false;
      }
      for (std::size_t k = si; k <= path.size(); ++k) {
        if (glob_match_at(pat, pi + 1, path, k)) return true;
        if (k < path.size() && path[k] == '/') break;  // '*' stays in segment
      }
      return false;
    }
    if (si >= path.size()) return false;
    if (pc == '?') {
      if (path[si] == '/') return false;
    } else if (pc != path[si]) {
      return false;
    }
    ++pi;
    ++si;
  }
  return si == path.size();
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
  return glob_match_at(pattern, 0, path, 0);
}

const Document* Workspace::find(const DocumentUri& uri) const {
  auto it = documents_.find(uri);
  return it == documents_.end() ? nullptr : &it->second;
}

Document* Workspace::find(const DocumentUri& uri) {
  auto it = documents_.find(uri);
  return it == documents_.end() ? nullptr : &it->second;
}

void Workspace::add_document(const DocumentUri& uri, std::string text) {
  documents_[uri] = Document{std::move(text), 0};
}

const std::string& Workspace::apply_text_edit(const TextEdit& edit) {
  Document* doc = find(edit.target);
  if (!doc) {
    throw Error("UnknownDocument",
                "no document " + edit.target.value() + " in workspace");
  }
  if (!range_valid_in(doc->text, edit.range)) {
    throw Error("RangeOutOfBounds", "edit range " + to_string(edit.range) +
                                        " invalid in " + edit.target.value());
  }
  doc->text = splice(doc->text, edit.range, edit.replacement);
  ++doc->version;
  return doc->text;
}

Workspace Workspace::scan(const std::filesystem::path& root,
                          const std::vector<std::string>& globs,
                          std::vector<std::string>* warnings) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(root, ec) || !fs::is_directory(root, ec)) {
    throw Error("RootNotFound", "workspace root " + root.string() +
                                    " does not exist or is not a directory");
  }
  Workspace ws;
  ws.root_ = root;
  std::vector<std::string> patterns =
      globs.empty() ? std::vector<std::string>{"**/*.tex"} : globs;

  std::vector<std::string> rels;
  fs::recursive_directory_iterator it(
      root, fs::directory_options::skip_permission_denied, ec);
  for (auto end = fs::recursive_directory_iterator(); it != end;
       it.increment(ec)) {
    if (ec) break;
    const fs::directory_entry& entry = *it;
    std::string name = entry.path().filename().string();
    if (entry.is_directory(ec)) {
      if (!name.empty() && name[0] == '.') it.disable_recursion_pending();
      continue;
    }
    if (!entry.is_regular_file(ec)) continue;
    std::string rel =
        DocumentUri::normalize(fs::relative(entry.path(), root, ec).string());
    bool matched = false;
    for (const std::string& p : patterns) {
      if (glob_match(p, rel)) {
        matched = true;
        break;
      }
    }
    if (matched) rels.push_back(std::move(rel));
  }
  std::sort(rels.begin(), rels.end());

  for (const std::string& rel : rels) {
    std::ifstream in(root / fs::path(rel), std::ios::binary);
    if (!in) {
      if (warnings) warnings->push_back("unreadable file: " + rel);
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    bool replaced = false;
    std::string text = sanitize_utf8(buf.str(), &replaced);
    if (replaced && warnings) {
      warnings->push_back("invalid UTF-8 replaced with U+FFFD in " + rel);
    }
    ws.documents_[DocumentUri(rel)] = Document{std::move(text), 0};
  }
  return ws;
}

}  // namespace stexide
