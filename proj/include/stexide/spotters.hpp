// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stexide/parser.hpp"
#include "stexide/source_model.hpp"

namespace stexide {

struct ModuleDecl {
  ModuleUri uri;
  std::string id;
  SourceRange begin_range;  // `\begin{module}[...]` span
  SourceRange end_range;    // `\end{module}` span
  SourceRange body_range;   // between the two
  SourceRange range;        // whole environment span
  SourceRange id_range;     // span of the id= option value (empty if synthetic)
  bool synthetic = false;   // file-level module adopted by orphan structures
  std::optional<ModuleUri> enclosing;  // lexical nesting only, no import edge
};

struct ImportDecl {
  ModuleUri importer;
  std::optional<std::string> target_path;  // from the optional argument
  std::string target_name;                 // mandatory argument
  SourceRange range;                       // whole command span
  std::optional<ModuleUri> resolved;
  SourceRange arg_range;                    // exact span of target_name
  std::optional<SourceRange> path_range;    // exact span of target_path
};

struct SymdefDecl {
  ModuleUri defining_module;
  std::string name;  // macro name without backslash
  int arity = 0;
  std::string presentation;  // raw body text, verbatim
  SourceRange range;         // whole command span
  SourceRange name_range;    // exact span of the name argument text
};

struct SymbolUse {
  std::optional<ModuleUri> in_module;
  std::string name;
  SourceRange range;  // the command token span
  std::optional<ModuleUri> resolved_definer;
  bool in_universe = false;  // name matches some symdef (set by resolution)
};

struct DefinitionBlock {
  ModuleUri in_module;
  std::optional<std::string> id;
  std::optional<std::string> title;
  std::vector<std::string> for_symbols;
  SourceRange text_range;  // interior of the environment
  std::string text;        // flattened content, commands stripped to names
  SourceRange range;       // whole environment span
  SourceRange header_range;
  SourceRange end_range;
  std::string kind;  // "definition", "assumption", "theorem"
};

struct SectionMark {
  DocumentUri document;
  enum class Level { Section, Subsection, Subsubsection };
  Level level = Level::Section;
  std::string title;
  SourceRange range;  // whole command span
};

std::string to_string(SectionMark::Level level);

struct SpotterResult {
  std::vector<ModuleDecl> modules;
  std::vector<ImportDecl> imports;
  std::vector<SymdefDecl> symdefs;
  std::vector<SymbolUse> uses;
  std::vector<DefinitionBlock> definitions;
  std::vector<SectionMark> sections;
  std::vector<ParseDiagnostic> diagnostics;  // spotting-time warnings/errors
};

// A spotter appends structures it recognizes to the result.
using SpotterFn =
    std::function<void(const DocumentTree&, const DocumentUri&, SpotterResult&)>;

class SpotterRegistry {
 public:
  // Registry with the built-in module/import/symdef/definition/section/use
  // spotters pre-registered.
  static SpotterRegistry builtins();

  // Throws Error("DuplicateSpotterName") when the name is taken.
  void register_spotter(std::string name, SpotterFn fn);
  bool has(std::string_view name) const;
  const std::vector<std::pair<std::string, SpotterFn>>& spotters() const {
    return spotters_;
  }

 private:
  std::vector<std::pair<std::string, SpotterFn>> spotters_;
};

// Runs every registered spotter; a throwing spotter is reported via a
// "spotter-failure" diagnostic and skipped, the others still run.
SpotterResult run_spotters(const DocumentTree& tree, const DocumentUri& doc,
                           const SpotterRegistry& registry);

// The ModuleUri a structure at the given module nesting would attach to,
// and the synthetic module id for a document (stem, de-duplicated against
// real module ids).
std::string synthetic_module_id(const DocumentTree& tree,
                                const DocumentUri& doc);

// Whether a name is usable as a symbol (control-word letters, optionally a
// trailing star).
bool is_valid_symbol_name(std::string_view name);

class TheoryIndex;

struct WorkspaceDiagnostic {
  DocumentUri document;
  ParseDiagnostic diagnostic;
};

// Sets ImportDecl::resolved per the resolution rules: an explicit relative
// path names the target document directly; otherwise the importing document
// and then the whole workspace are searched for a unique module id.
// Failures become unresolved-import / ambiguous-import diagnostics.
// When `only` is given, just that subset of documents is re-resolved (the
// module universe still comes from all results).
void resolve_imports(std::map<DocumentUri, SpotterResult>& results,
                     std::vector<WorkspaceDiagnostic>* diagnostics,
                     const std::set<DocumentUri>* only = nullptr);

// Marks uses whose name is defined anywhere (in_universe) and resolves each
// to the unique reachable defining module; emits unresolved-use /
// ambiguous-use diagnostics otherwise. When `only` is given, just that
// subset of documents is re-resolved.
void resolve_symbol_uses(std::map<DocumentUri, SpotterResult>& results,
                         const TheoryIndex& theory,
                         std::vector<WorkspaceDiagnostic>* diagnostics,
                         const std::set<DocumentUri>* only = nullptr);

}  // namespace stexide
