// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "stexide/source_model.hpp"
#include "stexide/spotters.hpp"

namespace stexide {

// Import graph over module URIs. Cycles are tolerated; reachability is
// reflexive-transitive and memoized until the graph changes.
class TheoryIndex {
 public:
  void add_module(const ModuleUri& m);
  // Adds both endpoints if missing.
  void add_edge(const ModuleUri& from, const ModuleUri& to);
  void clear();

  bool has(const ModuleUri& m) const;
  const std::set<ModuleUri>& nodes() const { return nodes_; }
  std::size_t edge_count() const;
  // Direct imports / importers, sorted. Throws Error("UnknownModule").
  std::vector<ModuleUri> imports_of(const ModuleUri& m) const;
  std::vector<ModuleUri> importers_of(const ModuleUri& m) const;
  // Reflexive-transitive reachability. Throws Error("UnknownModule").
  bool reachable(const ModuleUri& from, const ModuleUri& to) const;
  const std::set<ModuleUri>& reachable_set(const ModuleUri& from) const;

  std::set<std::pair<ModuleUri, ModuleUri>> edge_set() const;

 private:
  std::set<ModuleUri> nodes_;
  std::map<ModuleUri, std::set<ModuleUri>> out_;
  std::map<ModuleUri, std::set<ModuleUri>> in_;
  mutable std::map<ModuleUri, std::set<ModuleUri>> memo_;
};

// Prefix-searchable map of symbol names to their defining declarations.
class SymdefIndex {
 public:
  SymdefIndex();
  SymdefIndex(const SymdefIndex& other);
  SymdefIndex& operator=(const SymdefIndex& other);
  SymdefIndex(SymdefIndex&&) noexcept = default;
  SymdefIndex& operator=(SymdefIndex&&) noexcept = default;

  void insert(const SymdefDecl& decl);
  void remove_document(const DocumentUri& doc);
  void clear();

  // All (name, defining module) pairs whose name starts with prefix,
  // sorted and de-duplicated. Empty prefix lists everything.
  std::vector<std::pair<std::string, ModuleUri>> prefix_query(
      std::string_view prefix) const;
  // Declarations for an exact name, sorted by (module, range).
  std::vector<SymdefDecl> lookup(std::string_view name) const;
  // name -> set of defining modules, for the whole index.
  std::map<std::string, std::set<ModuleUri>> definer_map() const;
  std::size_t size() const { return size_; }

 private:
  struct TrieNode {
    std::map<char, std::unique_ptr<TrieNode>> children;
    std::vector<SymdefDecl> decls;  // declarations whose name ends here
  };
  static std::unique_ptr<TrieNode> clone(const TrieNode& n);
  std::unique_ptr<TrieNode> root_;
  std::size_t size_ = 0;
};

// One resolved symbol occurrence.
struct RefOccurrence {
  ModuleUri occurrence_module;
  ModuleUri defining_module;
  std::string name;
  DocumentUri document;
  SourceRange range;
};

bool operator<(const RefOccurrence& a, const RefOccurrence& b);
bool operator==(const RefOccurrence& a, const RefOccurrence& b);

class RefIndex {
 public:
  void insert(RefOccurrence occ);
  void remove_document(const DocumentUri& doc);
  void clear();

  // Occurrences of a symbol defined in `definer`, in document order.
  std::vector<RefOccurrence> occurrences(const ModuleUri& definer,
                                         std::string_view name) const;
  std::vector<RefOccurrence> in_document(const DocumentUri& doc) const;
  const std::vector<RefOccurrence>& all() const { return items_; }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<RefOccurrence> items_;  // kept sorted
};

struct Indexes {
  TheoryIndex theory;
  SymdefIndex symdefs;
  RefIndex refs;
};

// Rebuilds the theory graph nodes and resolved-import edges from results.
TheoryIndex build_theory_index(
    const std::map<DocumentUri, SpotterResult>& results);

// Replaces every record for `doc` across all three indexes with the
// records derived from `result` (modules, resolved imports, symdefs,
// resolved uses). Edges from other documents stay untouched.
void replace_doc_records(Indexes& indexes, const DocumentUri& doc,
                         const std::map<DocumentUri, SpotterResult>& results);

// Builds all three indexes from fully resolved results.
Indexes build_indexes(const std::map<DocumentUri, SpotterResult>& results);

}  // namespace stexide
