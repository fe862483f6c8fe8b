// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stexide/source_model.hpp"

namespace stexide {

// --- tokens ---------------------------------------------------------------

enum class TokenKind {
  Command,
  BeginGroup,
  EndGroup,
  OptOpen,
  OptClose,
  MathShift,
  Comment,
  Text,
  Whitespace,
};

struct Token {
  TokenKind kind = TokenKind::Text;
  std::string lexeme;  // exact source bytes
  std::string name;    // Command only: name without the backslash
  SourceRange range;
};

// Lossless: concatenating the lexemes reproduces `text` byte-for-byte.
std::vector<Token> tokenize(std::string_view text);

// Letters with an optional trailing '*', or a single non-letter character.
bool is_valid_command_name(std::string_view name);

// --- tree -----------------------------------------------------------------

enum class NodeKind { Root, Environment, Command, Group, Math, Text, Comment };

struct OptionEntry {
  std::string key;  // empty for bare values like [2]
  std::string value;
  SourceRange key_range;    // empty range when key is empty
  SourceRange value_range;  // spans exactly the stored value text
};

// One `[...]` block attached to a command or environment.
struct OptBlock {
  SourceRange range;  // including the brackets
  std::string raw;    // interior text, verbatim
  std::vector<OptionEntry> entries;
};

struct Node {
  NodeKind kind = NodeKind::Text;
  std::string name;  // command or environment name
  std::vector<OptBlock> opt_blocks;
  std::vector<Node> arguments;  // Group nodes, one per `{...}` argument
  std::vector<Node> children;   // content of Root/Environment/Group/Math
  SourceRange range;            // full span
  SourceRange name_range;       // Command: name token; Environment: begin name
  SourceRange begin_range;      // Environment: `\begin{name}[...]` span
  SourceRange end_range;        // Environment: `\end{name}` span
  SourceRange interior;         // Environment/Group/Math: content span
  std::string text;             // Text/Comment content

  // All option entries across blocks, in source order.
  std::vector<OptionEntry> options() const;
  const OptionEntry* find_option(std::string_view key) const;
};

struct ParseDiagnostic {
  enum class Severity { Warning, Error };
  Severity severity = Severity::Error;
  SourceRange range;
  std::string message;
  std::string code;  // stable identifier, e.g. "unclosed-group"
};

struct DocumentTree {
  Node root;
  std::vector<ParseDiagnostic> diagnostics;
  std::string text;  // the source this tree was parsed from
};

DocumentTree parse(std::string_view text);

// Bare numeric option of a `\symdef` command node, else 0. Throws
// Error("MalformedSymdef") when the first mandatory argument is missing.
int arity_of_symdef(const Node& node);

// Plain text with commands stripped to their names, comments dropped,
// option blocks kept bracketed verbatim, whitespace collapsed, trimmed.
std::string flatten(const Node& node);

// flatten() of the sub-document addressed by `range` (parsed in isolation).
std::string flatten_snippet(std::string_view doc_text,
                            const SourceRange& range);

}  // namespace stexide
