// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stexide/builtin_macros.hpp"
#include "stexide/engine.hpp"
#include "stexide/source_model.hpp"
#include "stexide/spotters.hpp"

namespace stexide {

struct CompletionItem {
  std::string name;
  int arity = 0;
  // Unset for built-in LaTeX macros.
  std::optional<ModuleUri> defining_module;
  std::string explanation;
  bool requires_import = false;
  std::string insert_text;  // \name plus arity-many {} placeholders
};

struct ServiceDiagnostic {
  enum class Severity { Info, Warning, Error };
  Severity severity = Severity::Warning;
  std::string code;
  DocumentUri document;
  SourceRange range;
  std::string message;
  // Each inner vector is one atomic suggested fix.
  std::vector<std::vector<TextEdit>> fixes;
};

struct SearchHit {
  SymdefDecl symbol;
  double score = 0.0;
  struct Evidence {
    DefinitionBlock block;
    std::vector<std::string> matched_terms;
  };
  std::vector<Evidence> evidence;
};

struct RenamePlan {
  // Per document, non-overlapping, sorted descending by position.
  std::map<DocumentUri, std::vector<TextEdit>> edits;
  std::size_t touched_count = 0;
};

struct OutlineNode {
  std::string kind;  // "section" | "module" | "import" | "symdef" | "definition"
  std::string label;
  SourceRange range;
  std::optional<ModuleUri> target;  // resolved import target
  std::vector<OutlineNode> children;
};

// Context-aware completion: inside a module, built-ins plus every symbol
// already in scope at pos (own symdefs and imports textually before pos);
// outside modules, built-ins only. `extra_macros` extends the built-in
// macro list (e.g. from a project macro file).
std::vector<CompletionItem> complete_at(
    const Engine& engine, const DocumentUri& doc, SourcePosition pos,
    std::string_view typed_prefix,
    const std::vector<BuiltinMacro>* extra_macros = nullptr);

// Workspace-wide symbol retrieval: reachable symbols first, then the rest
// flagged requires_import. Context may be omitted (plain listing).
std::vector<CompletionItem> retrieve_all(
    const Engine& engine,
    const std::optional<std::pair<DocumentUri, SourcePosition>>& context,
    std::string_view typed_prefix);
std::vector<CompletionItem> retrieve_all(const Engine& engine,
                                         const DocumentUri& doc,
                                         SourcePosition pos,
                                         std::string_view typed_prefix);

// Edit inserting `\importmodule[<relpath>]{<id>}` after the module's header
// and existing imports. Throws AlreadyReachable / UnknownModule.
TextEdit insert_import_for(const Engine& engine, const ModuleUri& context,
                           const ModuleUri& definer);

// Renames (defining_module, old_name) everywhere it occurs.
// Throws UnknownSymbol / InvalidName / NameCollision.
RenamePlan rename_symbol(const Engine& engine, const ModuleUri& defining_module,
                         std::string_view old_name, std::string_view new_name);

// Renames a module id and every import argument resolving to it.
// Throws UnknownModule / SyntheticModule / IdCollision.
RenamePlan rename_module(const Engine& engine, const ModuleUri& m,
                         std::string_view new_id);

// unused-import / redundant-import / replaceable-import / missing-import
// diagnostics for one module; every attached fix has been verified by
// simulated application. Throws UnknownModule.
std::vector<ServiceDiagnostic> minimize_imports(const Engine& engine,
                                                const ModuleUri& m);

// Moves whole structures out of m into a new module in new_doc, computing
// the minimal import set for the new module and a back-import when needed.
// Throws UnknownModule / RangeNotAStructure / IdCollision.
RenamePlan split_module(const Engine& engine, const ModuleUri& m,
                        const std::vector<SourceRange>& move_ranges,
                        std::string_view new_id, const DocumentUri& new_doc);

// Whole-word case-insensitive search over definition blocks; matched blocks
// promote their for-symbols (3), symbols used inside (2) and module-mates
// (1). Throws EmptyQuery.
std::vector<SearchHit> concept_search(const Engine& engine,
                                      const std::vector<std::string>& query);

// Nested document outline: sections, modules, imports, symdefs, definitions.
std::vector<OutlineNode> outline(const Engine& engine, const DocumentUri& doc);

// Graphviz DOT digraph of the theory graph; deterministic output.
std::string export_theory_graph(const Engine& engine);

// OMDoc-skeleton XML for one module; byte-stable for golden tests.
std::string export_omdoc_skeleton(const Engine& engine, const ModuleUri& m);

}  // namespace stexide
