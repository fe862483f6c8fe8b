// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/incremental.hpp"

#include <algorithm>
#include <cctype>

#include "stexide/parser.hpp"

namespace stexide {

std::string to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::Module:
      return "module";
    case StructureKind::Import:
      return "import";
    case StructureKind::Symdef:
      return "symdef";
    case StructureKind::Use:
      return "use";
    case StructureKind::Definition:
      return "definition";
    case StructureKind::Section:
      return "section";
  }
  return "unknown";
}

RangeTree build_range_tree(const SpotterResult& result, const DocumentUri& doc,
                           std::uint64_t version) {
  struct Item {
    StructureRef ref;
    SourceRange range;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < result.modules.size(); ++i) {
    items.push_back({{StructureKind::Module, i}, result.modules[i].range});
  }
  for (std::size_t i = 0; i < result.imports.size(); ++i) {
    items.push_back({{StructureKind::Import, i}, result.imports[i].range});
  }
  for (std::size_t i = 0; i < result.symdefs.size(); ++i) {
    items.push_back({{StructureKind::Symdef, i}, result.symdefs[i].range});
  }
  for (std::size_t i = 0; i < result.uses.size(); ++i) {
    items.push_back({{StructureKind::Use, i}, result.uses[i].range});
  }
  for (std::size_t i = 0; i < result.definitions.size(); ++i) {
    items.push_back(
        {{StructureKind::Definition, i}, result.definitions[i].range});
  }
  for (std::size_t i = 0; i < result.sections.size(); ++i) {
    items.push_back({{StructureKind::Section, i}, result.sections[i].range});
  }
  // Containers first: by start ascending, then end descending, then a
  // deterministic tiebreak so equal ranges nest in a stable order.
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.range.start != b.range.start) return a.range.start < b.range.start;
    if (a.range.end != b.range.end) return b.range.end < a.range.end;
    if (a.ref.kind != b.ref.kind)
      return static_cast<int>(a.ref.kind) < static_cast<int>(b.ref.kind);
    return a.ref.index < b.ref.index;
  });

  RangeTree tree;
  tree.document = doc;
  tree.version = version;
  std::vector<RangeTreeNode*> stack;
  for (const Item& item : items) {
    while (!stack.empty() && !stack.back()->range.contains(item.range)) {
      stack.pop_back();
    }
    RangeTreeNode node{item.ref, item.range, {}};
    std::vector<RangeTreeNode>* siblings =
        stack.empty() ? &tree.roots : &stack.back()->children;
    siblings->push_back(std::move(node));
    stack.push_back(&siblings->back());
  }
  return tree;
}

namespace {

void collect_refs_at(const std::vector<RangeTreeNode>& nodes,
                     SourcePosition pos, std::vector<StructureRef>& out) {
  for (const auto& n : nodes) {
    if (n.range.contains(pos) ||
        (n.range.empty() && n.range.start == pos)) {
      out.push_back(n.ref);
      collect_refs_at(n.children, pos, out);
    }
  }
}

}  // namespace

std::vector<StructureRef> refs_at(const RangeTree& tree, SourcePosition pos) {
  std::vector<StructureRef> out;
  collect_refs_at(tree.roots, pos, out);
  return out;
}

namespace {

bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Extends a range over trailing blank space and comments up to and
// including the next visible character; an insertion anywhere in that gap
// could attach a bracket or brace group to the preceding command.
SourceRange with_attach_zone(const SourceRange& r, std::string_view text) {
  std::size_t k = position_to_offset(text, r.end);
  while (k < text.size()) {
    char c = text[k];
    if (is_space_char(c)) {
      ++k;
      continue;
    }
    if (c == '%') {
      while (k < text.size() && text[k] != '\n') ++k;
      continue;
    }
    break;
  }
  if (k < text.size()) {
    ++k;
    while (k < text.size() &&
           (static_cast<unsigned char>(text[k]) & 0xC0) == 0x80) {
      ++k;
    }
  }
  return {r.start, offset_to_position(text, k)};
}

// Spans of every `\begin`/`\end` header in the raw token stream, whether or
// not it currently forms a recognized environment, plus verbatim tokens.
// Editing inside these can flip latent structures into real ones.
void scan_token_importants(std::string_view text,
                           std::vector<SourceRange>& out) {
  std::vector<Token> toks = tokenize(text);
  auto skip_blank = [&](std::size_t j) {
    while (j < toks.size() && (toks[j].kind == TokenKind::Whitespace ||
                               toks[j].kind == TokenKind::Comment)) {
      ++j;
    }
    return j;
  };
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.kind == TokenKind::Text && t.lexeme.rfind("\\verb", 0) == 0) {
      out.push_back(t.range);
      continue;
    }
    if (t.kind != TokenKind::Command ||
        (t.name != "begin" && t.name != "end")) {
      continue;
    }
    SourcePosition span_end = t.range.end;
    std::size_t j = skip_blank(i + 1);
    if (j < toks.size() && toks[j].kind == TokenKind::BeginGroup) {
      int depth = 1;
      std::size_t k = j + 1;
      while (k < toks.size() && depth > 0) {
        if (toks[k].kind == TokenKind::BeginGroup) ++depth;
        if (toks[k].kind == TokenKind::EndGroup) --depth;
        ++k;
      }
      span_end = toks[k - 1].range.end;
      if (t.name == "begin") {
        // Chase trailing option blocks the way the parser would.
        std::size_t m = skip_blank(k);
        while (m < toks.size() && toks[m].kind == TokenKind::OptOpen) {
          int gdepth = 0;
          std::size_t n = m + 1;
          bool closed = false;
          while (n < toks.size()) {
            const Token& tn = toks[n];
            if (tn.kind == TokenKind::BeginGroup) ++gdepth;
            if (tn.kind == TokenKind::EndGroup) {
              if (gdepth == 0) break;
              --gdepth;
            }
            if (tn.kind == TokenKind::Command &&
                (tn.name == "begin" || tn.name == "end")) {
              break;
            }
            if (tn.kind == TokenKind::OptClose && gdepth == 0) {
              closed = true;
              break;
            }
            ++n;
          }
          span_end = n < toks.size() ? toks[n].range.end
                                     : toks.back().range.end;
          if (!closed) break;
          m = skip_blank(n + 1);
        }
      }
    }
    SourceRange span{t.range.start, span_end};
    if (t.name == "begin") {
      out.push_back(with_attach_zone(span, text));
    } else {
      out.push_back(span);
    }
  }
}

}  // namespace

std::vector<SourceRange> collect_important_ranges(const SpotterResult& result,
                                                  std::string_view text) {
  std::vector<SourceRange> out;
  for (const auto& m : result.modules) {
    if (m.synthetic) continue;
    out.push_back(with_attach_zone(m.begin_range, text));
    out.push_back(m.end_range);
  }
  for (const auto& imp : result.imports) {
    out.push_back(with_attach_zone(imp.range, text));
  }
  for (const auto& s : result.symdefs) {
    out.push_back(with_attach_zone(s.range, text));
  }
  for (const auto& u : result.uses) {
    out.push_back(u.range);
  }
  for (const auto& d : result.definitions) {
    out.push_back(with_attach_zone(d.header_range, text));
    out.push_back(d.end_range);
  }
  for (const auto& s : result.sections) {
    out.push_back(with_attach_zone(s.range, text));
  }
  scan_token_importants(text, out);
  return out;
}

AnalysisAction classify_edit(const RangeTree& tree, std::uint64_t doc_version,
                             std::string_view doc_text, const TextEdit& edit,
                             const std::vector<SourceRange>& important) {
  if (tree.version != doc_version) {
    throw Error("StaleVersion",
                "range tree version " + std::to_string(tree.version) +
                    " does not match document version " +
                    std::to_string(doc_version));
  }
  if (!range_valid_in(doc_text, edit.range)) {
    throw Error("RangeOutOfBounds", "edit range " + to_string(edit.range) +
                                        " is not valid in the document");
  }
  auto has_structural_char = [](std::string_view s) {
    return s.find_first_of("\\%{}[]\n") != std::string_view::npos;
  };
  std::string deleted(slice(doc_text, edit.range));
  if (has_structural_char(deleted) || has_structural_char(edit.replacement)) {
    return {AnalysisAction::Kind::FullReanalysis,
            "edit adds or removes structural characters"};
  }
  // An edit starting just after a command name could extend that name.
  std::size_t off = position_to_offset(doc_text, edit.range.start);
  std::size_t k = off;
  while (k > 0 && std::isalpha(static_cast<unsigned char>(doc_text[k - 1]))) {
    --k;
  }
  if (k > 0 && doc_text[k - 1] == '\\') {
    return {AnalysisAction::Kind::FullReanalysis,
            "edit adjoins a command name"};
  }
  // One-column guard band around the edit prevents token merges at the
  // boundaries of important spans.
  SourceRange guarded = edit.range;
  if (guarded.start.column > 0) --guarded.start.column;
  ++guarded.end.column;
  for (const auto& r : important) {
    if (guarded.touches(r)) {
      return {AnalysisAction::Kind::FullReanalysis,
              "edit touches a structure-bearing span"};
    }
  }
  return {AnalysisAction::Kind::ShiftOnly, "edit confined to plain text"};
}

SourcePosition translate_position(SourcePosition pos, const SourceRange& edited,
                                  SourcePosition new_end) {
  if (pos <= edited.start) return pos;
  if (pos < edited.end) return new_end;  // inside the replaced span
  if (pos.line == edited.end.line) {
    return {new_end.line, new_end.column + (pos.column - edited.end.column)};
  }
  std::int64_t delta = static_cast<std::int64_t>(new_end.line) -
                       static_cast<std::int64_t>(edited.end.line);
  return {static_cast<std::uint32_t>(static_cast<std::int64_t>(pos.line) +
                                     delta),
          pos.column};
}

SourceRange translate_range(const SourceRange& range, const SourceRange& edited,
                            SourcePosition new_end) {
  return {translate_position(range.start, edited, new_end),
          translate_position(range.end, edited, new_end)};
}

namespace {

void shift_node(RangeTreeNode& node, const SourceRange& edited,
                SourcePosition new_end) {
  node.range = translate_range(node.range, edited, new_end);
  for (auto& c : node.children) shift_node(c, edited, new_end);
}

}  // namespace

void shift_ranges(RangeTree& tree, const TextEdit& edit) {
  SourcePosition new_end = advance_position(edit.range.start, edit.replacement);
  for (auto& r : tree.roots) shift_node(r, edit.range, new_end);
  ++tree.version;
}

void shift_result(SpotterResult& result, const TextEdit& edit,
                  std::string_view new_text) {
  SourcePosition new_end = advance_position(edit.range.start, edit.replacement);
  auto tr = [&](SourceRange& r) { r = translate_range(r, edit.range, new_end); };
  for (auto& m : result.modules) {
    tr(m.begin_range);
    tr(m.end_range);
    tr(m.body_range);
    tr(m.range);
    tr(m.id_range);
  }
  for (auto& imp : result.imports) {
    tr(imp.range);
    tr(imp.arg_range);
    if (imp.path_range) tr(*imp.path_range);
  }
  for (auto& s : result.symdefs) {
    tr(s.range);
    tr(s.name_range);
  }
  for (auto& u : result.uses) tr(u.range);
  for (auto& d : result.definitions) {
    bool touched = d.text_range.touches(edit.range);
    tr(d.text_range);
    tr(d.range);
    tr(d.header_range);
    tr(d.end_range);
    if (touched) d.text = flatten_snippet(new_text, d.text_range);
  }
  for (auto& s : result.sections) tr(s.range);
  for (auto& diag : result.diagnostics) tr(diag.range);
}

}  // namespace stexide
