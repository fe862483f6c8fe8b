// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stexide/incremental.hpp"
#include "stexide/indexes.hpp"
#include "stexide/parser.hpp"
#include "stexide/source_model.hpp"
#include "stexide/spotters.hpp"

namespace stexide {

// Owns the workspace text, per-document analysis state and the three
// workspace indexes, and keeps them consistent across edits.
class Engine {
 public:
  Engine(Workspace ws, SpotterRegistry registry);
  explicit Engine(Workspace ws);
  static Engine open(const std::filesystem::path& root,
                     const std::vector<std::string>& globs = {},
                     std::vector<std::string>* warnings = nullptr);

  // Parses, spots, resolves and indexes every document from scratch.
  void analyze_all();
  bool analyzed() const { return analyzed_; }

  const Workspace& workspace() const { return ws_; }
  const SpotterRegistry& registry() const { return registry_; }
  const std::map<DocumentUri, SpotterResult>& results() const {
    return results_;
  }
  // Throws Error("UnknownDocument") for documents not in the workspace.
  const SpotterResult& result(const DocumentUri& doc) const;
  const RangeTree& range_tree(const DocumentUri& doc) const;
  const std::vector<ParseDiagnostic>& parse_diagnostics(
      const DocumentUri& doc) const;
  // Import/use resolution diagnostics, sorted by document then position.
  std::vector<WorkspaceDiagnostic> resolution_diagnostics() const;

  const TheoryIndex& theory() const { return indexes_.theory; }
  const SymdefIndex& symdefs() const { return indexes_.symdefs; }
  const RefIndex& refs() const { return indexes_.refs; }

  // Classifies the edit, applies it to the text and updates analysis state
  // either by range shifting or by re-analysis with delta propagation.
  AnalysisAction apply_edit(const TextEdit& edit);
  // Applies a batch of plan edits (creating missing documents as empty
  // files first) and re-analyzes the workspace.
  void apply_edits(const std::vector<TextEdit>& edits);
  void add_document(const DocumentUri& uri, std::string text);

  const ModuleDecl* find_module(const ModuleUri& uri) const;
  // Innermost module whose body contains pos; falls back to the document's
  // synthetic module when one exists.
  std::optional<ModuleUri> enclosing_module(const DocumentUri& doc,
                                            SourcePosition pos) const;
  std::vector<ModuleUri> all_modules() const;

  // Deterministic line-oriented dump of all spotted structures and index
  // contents; equal dumps mean equal analysis state.
  std::string fingerprint() const;

 private:
  void reanalyze_document(const DocumentUri& doc);
  void refresh_doc_records(const DocumentUri& doc);
  void require_analyzed() const;

  Workspace ws_;
  SpotterRegistry registry_;
  std::map<DocumentUri, SpotterResult> results_;
  std::map<DocumentUri, RangeTree> trees_;
  std::map<DocumentUri, std::vector<ParseDiagnostic>> parse_diags_;
  std::map<DocumentUri, std::vector<WorkspaceDiagnostic>> import_diags_;
  std::map<DocumentUri, std::vector<WorkspaceDiagnostic>> use_diags_;
  Indexes indexes_;
  bool analyzed_ = false;
};

}  // namespace stexide
