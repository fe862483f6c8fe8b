// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/parser.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <tuple>

namespace stexide {

namespace {

bool is_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

bool is_valid_command_name(std::string_view name) {
  if (name.empty()) return false;
  if (name.size() == 1 && !is_letter(name[0])) return true;  // \\, \%, ...
  std::size_t letters = name.size();
  if (name.back() == '*') --letters;
  if (letters == 0) return false;
  for (std::size_t k = 0; k < letters; ++k) {
    if (!is_letter(name[k])) return false;
  }
  return true;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  SourcePosition pos;
  std::size_t i = 0;

  auto push = [&](TokenKind kind, std::size_t begin, std::size_t end,
                  std::string name = std::string()) {
    Token t;
    t.kind = kind;
    t.lexeme = std::string(text.substr(begin, end - begin));
    t.name = std::move(name);
    t.range.start = pos;
    pos = advance_position(pos, t.lexeme);
    t.range.end = pos;
    out.push_back(std::move(t));
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '\\') {
      if (i + 1 >= text.size()) {
        push(TokenKind::Text, i, i + 1);  // lone backslash at end of input
        ++i;
        continue;
      }
      char n = text[i + 1];
      if (is_letter(n)) {
        std::size_t j = i + 1;
        while (j < text.size() && is_letter(text[j])) ++j;
        std::string name(text.substr(i + 1, j - (i + 1)));
        if (j < text.size() && text[j] == '*') {
          name += '*';
          ++j;
        }
        if ((name == "verb" || name == "verb*") && j < text.size() &&
            text[j] != '\n') {
          // \verb<d>...<d> is one opaque Text token.
          char d = text[j];
          std::size_t k = j + 1;
          while (k < text.size() && text[k] != d && text[k] != '\n') ++k;
          if (k < text.size() && text[k] == d) ++k;
          push(TokenKind::Text, i, k);
          i = k;
          continue;
        }
        push(TokenKind::Command, i, j, std::move(name));
        i = j;
        continue;
      }
      push(TokenKind::Command, i, i + 2, std::string(1, n));
      i += 2;
      continue;
    }
    if (c == '{') {
      push(TokenKind::BeginGroup, i, i + 1);
      ++i;
      continue;
    }
    if (c == '}') {
      push(TokenKind::EndGroup, i, i + 1);
      ++i;
      continue;
    }
    if (c == '[') {
      push(TokenKind::OptOpen, i, i + 1);
      ++i;
      continue;
    }
    if (c == ']') {
      push(TokenKind::OptClose, i, i + 1);
      ++i;
      continue;
    }
    if (c == '$') {
      push(TokenKind::MathShift, i, i + 1);
      ++i;
      continue;
    }
    if (c == '%') {
      std::size_t j = i;
      while (j < text.size() && text[j] != '\n') ++j;
      push(TokenKind::Comment, i, j);
      i = j;
      continue;
    }
    if (is_space_char(c)) {
      std::size_t j = i;
      while (j < text.size() && is_space_char(text[j])) ++j;
      push(TokenKind::Whitespace, i, j);
      i = j;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && text[j] != '\\' && text[j] != '{' &&
           text[j] != '}' && text[j] != '[' && text[j] != ']' &&
           text[j] != '$' && text[j] != '%' && !is_space_char(text[j])) {
      ++j;
    }
    push(TokenKind::Text, i, j);
    i = j;
  }
  return out;
}

std::vector<OptionEntry> Node::options() const {
  std::vector<OptionEntry> all;
  for (const OptBlock& b : opt_blocks) {
    all.insert(all.end(), b.entries.begin(), b.entries.end());
  }
  return all;
}

const OptionEntry* Node::find_option(std::string_view key) const {
  for (const OptBlock& b : opt_blocks) {
    for (const OptionEntry& e : b.entries) {
      if (e.key == key) return &e;
    }
  }
  return nullptr;
}

namespace {

struct Signature {
  int max_opts;
  int max_args;
};

Signature signature_for(const std::string& name) {
  static const std::map<std::string, Signature> kTable = {
      {"symdef", {1, 2}},       {"importmodule", {1, 1}},
      {"section", {1, 1}},      {"subsection", {1, 1}},
      {"subsubsection", {1, 1}}, {"usepackage", {1, 1}},
      {"documentclass", {1, 1}}, {"label", {0, 1}},
      {"ref", {0, 1}},          {"eqref", {0, 1}},
      {"cite", {1, 1}},         {"input", {0, 1}},
      {"include", {0, 1}},      {"url", {0, 1}},
      {"item", {1, 0}},
  };
  if (name.size() == 1 && !is_letter(name[0])) return {0, 0};
  std::string key = name;
  if (!key.empty() && key.back() == '*') key.pop_back();
  auto it = kTable.find(key);
  if (it != kTable.end()) return it->second;
  constexpr int kGreedy = std::numeric_limits<int>::max() / 2;
  return {kGreedy, kGreedy};
}

std::string trim_copy(std::string_view s, std::size_t* lead = nullptr) {
  std::size_t a = 0, b = s.size();
  while (a < b && is_space_char(s[a])) ++a;
  while (b > a && is_space_char(s[b - 1])) --b;
  if (lead) *lead = a;
  return std::string(s.substr(a, b - a));
}

// Parses `key=value, key=value, bare` with braces/brackets protecting
// separators; positions are derived from `base` (start of the raw text).
std::vector<OptionEntry> parse_option_entries(std::string_view raw,
                                              SourcePosition base) {
  std::vector<OptionEntry> entries;
  auto pos_at = [&](std::size_t off) {
    return advance_position(base, raw.substr(0, off));
  };
  std::size_t start = 0;
  int braces = 0, brackets = 0;
  for (std::size_t k = 0; k <= raw.size(); ++k) {
    bool at_end = k == raw.size();
    char c = at_end ? ',' : raw[k];
    if (!at_end) {
      if (c == '{') {
        ++braces;
        continue;
      }
      if (c == '}') {
        if (braces > 0) --braces;
        continue;
      }
      if (c == '[') {
        ++brackets;
        continue;
      }
      if (c == ']') {
        if (brackets > 0) --brackets;
        continue;
      }
      if (c != ',' || braces > 0 || brackets > 0) continue;
    }
    std::string_view piece = raw.substr(start, k - start);
    std::size_t lead = 0;
    std::string trimmed = trim_copy(piece, &lead);
    if (!trimmed.empty()) {
      // First top-level '=' inside the piece splits key from value.
      std::size_t eq = std::string_view::npos;
      int pb = 0, pk = 0;
      for (std::size_t m = 0; m < piece.size(); ++m) {
        char pc = piece[m];
        if (pc == '{') ++pb;
        else if (pc == '}' && pb > 0) --pb;
        else if (pc == '[') ++pk;
        else if (pc == ']' && pk > 0) --pk;
        else if (pc == '=' && pb == 0 && pk == 0) {
          eq = m;
          break;
        }
      }
      OptionEntry e;
      if (eq == std::string_view::npos) {
        e.value = trimmed;
        std::size_t voff = start + lead;
        e.value_range = {pos_at(voff), pos_at(voff + e.value.size())};
        e.key_range = {e.value_range.start, e.value_range.start};
      } else {
        std::size_t klead = 0;
        e.key = trim_copy(piece.substr(0, eq), &klead);
        std::size_t koff = start + klead;
        e.key_range = {pos_at(koff), pos_at(koff + e.key.size())};
        std::size_t vlead = 0;
        e.value = trim_copy(piece.substr(eq + 1), &vlead);
        std::size_t voff = start + eq + 1 + vlead;
        // Strip one brace pair wrapping the entire value.
        if (e.value.size() >= 2 && e.value.front() == '{' &&
            e.value.back() == '}') {
          int depth = 0;
          bool wraps = true;
          for (std::size_t m = 0; m < e.value.size(); ++m) {
            if (e.value[m] == '{') ++depth;
            else if (e.value[m] == '}') {
              --depth;
              if (depth == 0 && m + 1 != e.value.size()) {
                wraps = false;
                break;
              }
            }
          }
          if (wraps) {
            e.value = e.value.substr(1, e.value.size() - 2);
            ++voff;
          }
        }
        e.value_range = {pos_at(voff), pos_at(voff + e.value.size())};
      }
      entries.push_back(std::move(e));
    }
    start = k + 1;
  }
  return entries;
}

struct EnvNameProbe {
  std::string name;
  SourceRange name_range;
  SourcePosition span_end;  // just past the closing brace
  std::size_t next_index;   // token index after the name group
};

class TreeParser {
 public:
  TreeParser(std::vector<Token> toks, std::string_view text)
      : toks_(std::move(toks)), text_(text) {}

  DocumentTree run() {
    DocumentTree result;
    result.text = std::string(text_);
    Scope root;
    root.node.kind = NodeKind::Root;
    stack_.push_back(std::move(root));

    while (i_ < toks_.size()) {
      const Token& t = toks_[i_];
      switch (t.kind) {
        case TokenKind::Whitespace:
          if (t.lexeme.find('\n') != std::string::npos) {
            close_math_tops(t.range.start);
          }
          append_text_node(t);
          ++i_;
          break;
        case TokenKind::Text:
          append_text_node(t);
          ++i_;
          break;
        case TokenKind::Comment: {
          Node c;
          c.kind = NodeKind::Comment;
          c.text = t.lexeme;
          c.range = t.range;
          top().node.children.push_back(std::move(c));
          ++i_;
          break;
        }
        case TokenKind::OptOpen:
        case TokenKind::OptClose:
          append_text_node(t);  // plain '[' / ']' in content
          ++i_;
          break;
        case TokenKind::BeginGroup: {
          Scope s;
          s.node.kind = NodeKind::Group;
          s.node.range.start = t.range.start;
          s.node.interior.start = t.range.end;
          s.open_range = t.range;
          stack_.push_back(std::move(s));
          ++i_;
          break;
        }
        case TokenKind::EndGroup:
          handle_end_group(t);
          break;
        case TokenKind::MathShift:
          handle_math_shift(t);
          break;
        case TokenKind::Command:
          if (t.name == "begin") {
            handle_begin(t);
          } else if (t.name == "end") {
            handle_end(t);
          } else {
            Node cmd;
            cmd.kind = NodeKind::Command;
            cmd.name = t.name;
            cmd.range = t.range;
            cmd.name_range = t.range;
            Signature sig = signature_for(t.name);
            ++i_;
            resume_command(std::move(cmd), sig.max_opts, sig.max_args);
          }
          break;
      }
    }

    SourcePosition eof = toks_.empty() ? SourcePosition{}
                                       : toks_.back().range.end;
    while (stack_.size() > 1) force_close_top(eof);
    stack_.back().node.range = {SourcePosition{}, eof};
    stack_.back().node.interior = stack_.back().node.range;
    result.root = std::move(stack_.back().node);
    result.diagnostics = std::move(diags_);
    return result;
  }

 private:
  struct Scope {
    Node node;
    SourceRange open_range;
    bool is_argument = false;
    Node pending;  // suspended command owning this argument group
    int opts_left = 0;
    int args_left = 0;
  };

  Scope& top() { return stack_.back(); }

  void diag(const char* code, ParseDiagnostic::Severity sev, SourceRange range,
            std::string message) {
    diags_.push_back({sev, range, std::move(message), code});
  }

  void append_text_node(const Token& t) {
    Node n;
    n.kind = NodeKind::Text;
    n.text = t.lexeme;
    n.range = t.range;
    top().node.children.push_back(std::move(n));
  }

  void close_math_tops(SourcePosition at) {
    while (stack_.size() > 1 && top().node.kind == NodeKind::Math) {
      diag("unterminated-math", ParseDiagnostic::Severity::Error,
           top().open_range, "math started here is not closed by '$'");
      Scope s = std::move(stack_.back());
      stack_.pop_back();
      s.node.range.end = at;
      s.node.interior.end = at;
      top().node.children.push_back(std::move(s.node));
    }
  }

  void handle_math_shift(const Token& t) {
    if (top().node.kind == NodeKind::Math) {
      Scope s = std::move(stack_.back());
      stack_.pop_back();
      s.node.interior.end = t.range.start;
      s.node.range.end = t.range.end;
      top().node.children.push_back(std::move(s.node));
    } else {
      Scope s;
      s.node.kind = NodeKind::Math;
      s.node.range.start = t.range.start;
      s.node.interior.start = t.range.end;
      s.open_range = t.range;
      stack_.push_back(std::move(s));
    }
    ++i_;
  }

  void handle_end_group(const Token& t) {
    close_math_tops(t.range.start);
    if (top().node.kind == NodeKind::Group) {
      Scope s = std::move(stack_.back());
      stack_.pop_back();
      s.node.interior.end = t.range.start;
      s.node.range.end = t.range.end;
      ++i_;
      if (s.is_argument) {
        SourcePosition end = s.node.range.end;
        s.pending.arguments.push_back(std::move(s.node));
        s.pending.range.end = end;
        resume_command(std::move(s.pending), s.opts_left, s.args_left);
      } else {
        top().node.children.push_back(std::move(s.node));
      }
      return;
    }
    diag("stray-close-brace", ParseDiagnostic::Severity::Error, t.range,
         "'}' without a matching '{'");
    append_text_node(t);
    ++i_;
  }

  // Attaches option/group blocks following a command, possibly suspending
  // into an argument scope. Interleaving whitespace/comments are skipped.
  void resume_command(Node cmd, int opts_left, int args_left) {
    for (;;) {
      std::size_t save = i_;
      while (i_ < toks_.size() && (toks_[i_].kind == TokenKind::Whitespace ||
                                   toks_[i_].kind == TokenKind::Comment)) {
        ++i_;
      }
      if (i_ < toks_.size() && toks_[i_].kind == TokenKind::OptOpen &&
          opts_left > 0) {
        OptBlock b = scan_opt_block();
        cmd.range.end = b.range.end;
        cmd.opt_blocks.push_back(std::move(b));
        --opts_left;
        continue;
      }
      if (i_ < toks_.size() && toks_[i_].kind == TokenKind::BeginGroup &&
          args_left > 0) {
        Scope s;
        s.node.kind = NodeKind::Group;
        s.node.range.start = toks_[i_].range.start;
        s.node.interior.start = toks_[i_].range.end;
        s.open_range = toks_[i_].range;
        s.is_argument = true;
        s.pending = std::move(cmd);
        s.opts_left = opts_left;
        s.args_left = args_left - 1;
        ++i_;
        stack_.push_back(std::move(s));
        return;
      }
      i_ = save;
      top().node.children.push_back(std::move(cmd));
      return;
    }
  }

  // Consumes `[ ... ]` starting at the current OptOpen token. Stops early
  // (with a diagnostic) at EOF, at an unbalanced '}', or at \begin/\end.
  OptBlock scan_opt_block() {
    const Token& open = toks_[i_];
    std::size_t j = i_ + 1;
    int depth = 0;
    bool closed = false;
    for (; j < toks_.size(); ++j) {
      const Token& t = toks_[j];
      if (t.kind == TokenKind::BeginGroup) {
        ++depth;
      } else if (t.kind == TokenKind::EndGroup) {
        if (depth == 0) break;  // unbalanced: stop before it
        --depth;
      } else if (t.kind == TokenKind::OptClose && depth == 0) {
        closed = true;
        break;
      } else if (t.kind == TokenKind::Command &&
                 (t.name == "begin" || t.name == "end")) {
        break;
      }
    }
    OptBlock b;
    b.range.start = open.range.start;
    std::string raw;
    for (std::size_t k = i_ + 1; k < j; ++k) raw += toks_[k].lexeme;
    b.raw = std::move(raw);
    if (closed) {
      b.range.end = toks_[j].range.end;
      i_ = j + 1;
    } else {
      SourcePosition stop =
          j < toks_.size() ? toks_[j].range.start : toks_.back().range.end;
      diag("unclosed-option", ParseDiagnostic::Severity::Error, open.range,
           "'[' without a matching ']'");
      b.range.end = stop;
      i_ = j;
    }
    b.entries = parse_option_entries(b.raw, open.range.end);
    return b;
  }

  // Reads `{name}` after \begin or \end without consuming on failure.
  std::optional<EnvNameProbe> probe_env_name(std::size_t at) const {
    std::size_t k = at;
    while (k < toks_.size() && (toks_[k].kind == TokenKind::Whitespace ||
                                toks_[k].kind == TokenKind::Comment)) {
      ++k;
    }
    if (k >= toks_.size() || toks_[k].kind != TokenKind::BeginGroup) {
      return std::nullopt;
    }
    std::size_t open = k;
    int depth = 0;
    for (std::size_t j = open + 1; j < toks_.size(); ++j) {
      if (toks_[j].kind == TokenKind::BeginGroup) {
        ++depth;
      } else if (toks_[j].kind == TokenKind::EndGroup) {
        if (depth == 0) {
          EnvNameProbe p;
          std::string raw;
          for (std::size_t m = open + 1; m < j; ++m) raw += toks_[m].lexeme;
          p.name = trim_copy(raw);
          p.name_range = {toks_[open].range.end, toks_[j].range.start};
          p.span_end = toks_[j].range.end;
          p.next_index = j + 1;
          return p;
        }
        --depth;
      }
    }
    return std::nullopt;
  }

  void handle_begin(const Token& t) {
    auto nm = probe_env_name(i_ + 1);
    if (!nm) {
      diag("malformed-begin", ParseDiagnostic::Severity::Error, t.range,
           "\\begin is not followed by '{name}'");
      Node cmd;
      cmd.kind = NodeKind::Command;
      cmd.name = "begin";
      cmd.range = t.range;
      cmd.name_range = t.range;
      top().node.children.push_back(std::move(cmd));
      ++i_;
      return;
    }
    Node env;
    env.kind = NodeKind::Environment;
    env.name = nm->name;
    env.name_range = nm->name_range;
    env.range.start = t.range.start;
    i_ = nm->next_index;
    SourcePosition header_end = nm->span_end;
    int opts = 2;
    for (;;) {
      std::size_t save = i_;
      while (i_ < toks_.size() && (toks_[i_].kind == TokenKind::Whitespace ||
                                   toks_[i_].kind == TokenKind::Comment)) {
        ++i_;
      }
      if (i_ < toks_.size() && toks_[i_].kind == TokenKind::OptOpen &&
          opts > 0) {
        OptBlock b = scan_opt_block();
        header_end = b.range.end;
        env.opt_blocks.push_back(std::move(b));
        --opts;
        continue;
      }
      i_ = save;
      break;
    }
    env.begin_range = {t.range.start, header_end};
    env.interior.start = header_end;
    bool verbatim = env.name == "verbatim" || env.name == "lstlisting";
    Scope s;
    s.open_range = env.begin_range;
    s.node = std::move(env);
    stack_.push_back(std::move(s));
    if (verbatim) consume_verbatim(stack_.back().node.name);
  }

  void consume_verbatim(const std::string& env_name) {
    std::size_t begin = i_;
    std::size_t found = toks_.size();
    for (std::size_t j = i_; j < toks_.size(); ++j) {
      if (toks_[j].kind == TokenKind::Command && toks_[j].name == "end") {
        auto probe = probe_env_name(j + 1);
        if (probe && probe->name == env_name) {
          found = j;
          break;
        }
      }
    }
    if (found == begin) return;  // immediate \end
    Node raw;
    raw.kind = NodeKind::Text;
    for (std::size_t k = begin; k < found; ++k) raw.text += toks_[k].lexeme;
    raw.range.start = toks_[begin].range.start;
    raw.range.end = found < toks_.size() ? toks_[found].range.start
                                         : toks_.back().range.end;
    if (begin < toks_.size()) top().node.children.push_back(std::move(raw));
    i_ = found;
  }

  void handle_end(const Token& t) {
    auto nm = probe_env_name(i_ + 1);
    if (!nm) {
      diag("malformed-end", ParseDiagnostic::Severity::Error, t.range,
           "\\end is not followed by '{name}'");
      Node cmd;
      cmd.kind = NodeKind::Command;
      cmd.name = "end";
      cmd.range = t.range;
      cmd.name_range = t.range;
      top().node.children.push_back(std::move(cmd));
      ++i_;
      return;
    }
    std::size_t match = 0;
    bool matched = false;
    for (std::size_t k = stack_.size(); k-- > 1;) {
      if (stack_[k].node.kind == NodeKind::Environment &&
          stack_[k].node.name == nm->name) {
        match = k;
        matched = true;
        break;
      }
    }
    if (!matched) {
      SourceRange span{t.range.start, nm->span_end};
      diag("stray-end", ParseDiagnostic::Severity::Error, span,
           "\\end{" + nm->name + "} without a matching \\begin");
      Node n;
      n.kind = NodeKind::Text;
      std::string raw;
      for (std::size_t k = i_; k < nm->next_index; ++k) raw += toks_[k].lexeme;
      n.text = std::move(raw);
      n.range = span;
      top().node.children.push_back(std::move(n));
      i_ = nm->next_index;
      return;
    }
    i_ = nm->next_index;
    while (stack_.size() - 1 > match) force_close_top(t.range.start);
    Scope s = std::move(stack_.back());
    stack_.pop_back();
    s.node.end_range = {t.range.start, nm->span_end};
    s.node.range.end = nm->span_end;
    s.node.interior.end = t.range.start;
    top().node.children.push_back(std::move(s.node));
  }

  void force_close_top(SourcePosition at) {
    Scope s = std::move(stack_.back());
    stack_.pop_back();
    s.node.range.end = at;
    s.node.interior.end = at;
    switch (s.node.kind) {
      case NodeKind::Math:
        diag("unterminated-math", ParseDiagnostic::Severity::Error,
             s.open_range, "math started here is not closed by '$'");
        top().node.children.push_back(std::move(s.node));
        break;
      case NodeKind::Group:
        diag("unclosed-group", ParseDiagnostic::Severity::Error, s.open_range,
             "'{' without a matching '}'");
        if (s.is_argument) {
          s.pending.arguments.push_back(std::move(s.node));
          s.pending.range.end = at;
          resume_command(std::move(s.pending), s.opts_left, s.args_left);
        } else {
          top().node.children.push_back(std::move(s.node));
        }
        break;
      case NodeKind::Environment:
        diag("unclosed-environment", ParseDiagnostic::Severity::Error,
             s.open_range,
             "environment '" + s.node.name + "' is never closed");
        s.node.end_range = {at, at};
        top().node.children.push_back(std::move(s.node));
        break;
      default:
        top().node.children.push_back(std::move(s.node));
        break;
    }
  }

  std::vector<Token> toks_;
  std::string_view text_;
  std::vector<Scope> stack_;
  std::vector<ParseDiagnostic> diags_;
  std::size_t i_ = 0;
};

}  // namespace

DocumentTree parse(std::string_view text) {
  return TreeParser(tokenize(text), text).run();
}

int arity_of_symdef(const Node& node) {
  if (node.kind != NodeKind::Command || node.name != "symdef") {
    throw Error("MalformedSymdef", "node is not a \\symdef command");
  }
  if (node.arguments.empty()) {
    throw Error("MalformedSymdef",
                "\\symdef is missing its mandatory name argument");
  }
  for (const OptBlock& b : node.opt_blocks) {
    for (const OptionEntry& e : b.entries) {
      if (!e.key.empty() || e.value.empty()) continue;
      bool digits = std::all_of(e.value.begin(), e.value.end(), [](char c) {
        return c >= '0' && c <= '9';
      });
      if (digits) return std::stoi(e.value);
    }
  }
  return 0;
}

namespace {

void flatten_into(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Text:
      out += n.text;
      return;
    case NodeKind::Comment:
      return;
    case NodeKind::Command: {
      out += ' ';
      out += n.name;
      out += ' ';
      std::size_t oi = 0, ai = 0;
      while (oi < n.opt_blocks.size() || ai < n.arguments.size()) {
        bool take_opt =
            oi < n.opt_blocks.size() &&
            (ai >= n.arguments.size() ||
             n.opt_blocks[oi].range.start < n.arguments[ai].range.start);
        if (take_opt) {
          out += " [";
          out += n.opt_blocks[oi].raw;
          out += "] ";
          ++oi;
        } else {
          out += ' ';
          for (const Node& c : n.arguments[ai].children) flatten_into(c, out);
          out += ' ';
          ++ai;
        }
      }
      return;
    }
    default:
      for (const Node& c : n.children) flatten_into(c, out);
      return;
  }
}

}  // namespace

std::string flatten(const Node& node) {
  std::string raw;
  flatten_into(node, raw);
  std::string out;
  out.reserve(raw.size());
  bool in_ws = false;
  for (char c : raw) {
    if (is_space_char(c)) {
      in_ws = true;
      continue;
    }
    if (in_ws && !out.empty()) out += ' ';
    in_ws = false;
    out += c;
  }
  return out;
}

std::string flatten_snippet(std::string_view doc_text,
                            const SourceRange& range) {
  std::string sub = slice(doc_text, range);
  DocumentTree tree = parse(sub);
  return flatten(tree.root);
}

}  // namespace stexide
