// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/indexes.hpp"

#include <algorithm>
#include <functional>

namespace stexide {

void TheoryIndex::add_module(const ModuleUri& m) {
  if (nodes_.insert(m).second) memo_.clear();
}

void TheoryIndex::add_edge(const ModuleUri& from, const ModuleUri& to) {
  nodes_.insert(from);
  nodes_.insert(to);
  bool changed = out_[from].insert(to).second;
  in_[to].insert(from);
  if (changed) memo_.clear();
}

void TheoryIndex::clear() {
  nodes_.clear();
  out_.clear();
  in_.clear();
  memo_.clear();
}

bool TheoryIndex::has(const ModuleUri& m) const { return nodes_.count(m) > 0; }

std::size_t TheoryIndex::edge_count() const {
  std::size_t n = 0;
  for (const auto& [from, tos] : out_) n += tos.size();
  return n;
}

std::vector<ModuleUri> TheoryIndex::imports_of(const ModuleUri& m) const {
  if (!has(m)) throw Error("UnknownModule", "unknown module " + m.render());
  auto it = out_.find(m);
  if (it == out_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::vector<ModuleUri> TheoryIndex::importers_of(const ModuleUri& m) const {
  if (!has(m)) throw Error("UnknownModule", "unknown module " + m.render());
  auto it = in_.find(m);
  if (it == in_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

const std::set<ModuleUri>& TheoryIndex::reachable_set(
    const ModuleUri& from) const {
  if (!has(from)) {
    throw Error("UnknownModule", "unknown module " + from.render());
  }
  auto memo = memo_.find(from);
  if (memo != memo_.end()) return memo->second;
  // Iterative DFS; cycles are fine because visited nodes are skipped.
  std::set<ModuleUri> seen;
  std::vector<ModuleUri> stack{from};
  while (!stack.empty()) {
    ModuleUri cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    auto it = out_.find(cur);
    if (it == out_.end()) continue;
    for (const auto& next : it->second) {
      if (seen.count(next) == 0) stack.push_back(next);
    }
  }
  return memo_.emplace(from, std::move(seen)).first->second;
}

bool TheoryIndex::reachable(const ModuleUri& from, const ModuleUri& to) const {
  if (!has(to)) throw Error("UnknownModule", "unknown module " + to.render());
  return reachable_set(from).count(to) > 0;
}

std::set<std::pair<ModuleUri, ModuleUri>> TheoryIndex::edge_set() const {
  std::set<std::pair<ModuleUri, ModuleUri>> edges;
  for (const auto& [from, tos] : out_) {
    for (const auto& to : tos) edges.emplace(from, to);
  }
  return edges;
}

SymdefIndex::SymdefIndex() : root_(std::make_unique<TrieNode>()) {}

std::unique_ptr<SymdefIndex::TrieNode> SymdefIndex::clone(const TrieNode& n) {
  auto copy = std::make_unique<TrieNode>();
  copy->decls = n.decls;
  for (const auto& [c, child] : n.children) {
    copy->children.emplace(c, clone(*child));
  }
  return copy;
}

SymdefIndex::SymdefIndex(const SymdefIndex& other)
    : root_(clone(*other.root_)), size_(other.size_) {}

SymdefIndex& SymdefIndex::operator=(const SymdefIndex& other) {
  if (this != &other) {
    root_ = clone(*other.root_);
    size_ = other.size_;
  }
  return *this;
}

void SymdefIndex::insert(const SymdefDecl& decl) {
  TrieNode* node = root_.get();
  for (char c : decl.name) {
    auto& child = node->children[c];
    if (!child) child = std::make_unique<TrieNode>();
    node = child.get();
  }
  node->decls.push_back(decl);
  ++size_;
}

void SymdefIndex::remove_document(const DocumentUri& doc) {
  // Depth-first prune of declarations from this document.
  std::function<bool(TrieNode&)> prune = [&](TrieNode& node) -> bool {
    auto& d = node.decls;
    std::size_t before = d.size();
    d.erase(std::remove_if(d.begin(), d.end(),
                           [&](const SymdefDecl& s) {
                             return s.defining_module.document == doc;
                           }),
            d.end());
    size_ -= before - d.size();
    for (auto it = node.children.begin(); it != node.children.end();) {
      if (prune(*it->second)) {
        it = node.children.erase(it);
      } else {
        ++it;
      }
    }
    return node.decls.empty() && node.children.empty();
  };
  prune(*root_);
}

void SymdefIndex::clear() {
  root_ = std::make_unique<TrieNode>();
  size_ = 0;
}

std::vector<std::pair<std::string, ModuleUri>> SymdefIndex::prefix_query(
    std::string_view prefix) const {
  const TrieNode* node = root_.get();
  for (char c : prefix) {
    auto it = node->children.find(c);
    if (it == node->children.end()) return {};
    node = it->second.get();
  }
  std::vector<std::pair<std::string, ModuleUri>> out;
  std::string name(prefix);
  std::function<void(const TrieNode&)> collect = [&](const TrieNode& n) {
    for (const auto& decl : n.decls) {
      out.emplace_back(name, decl.defining_module);
    }
    for (const auto& [c, child] : n.children) {
      name.push_back(c);
      collect(*child);
      name.pop_back();
    }
  };
  collect(*node);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SymdefDecl> SymdefIndex::lookup(std::string_view name) const {
  const TrieNode* node = root_.get();
  for (char c : name) {
    auto it = node->children.find(c);
    if (it == node->children.end()) return {};
    node = it->second.get();
  }
  std::vector<SymdefDecl> out = node->decls;
  std::sort(out.begin(), out.end(), [](const SymdefDecl& a, const SymdefDecl& b) {
    if (a.defining_module != b.defining_module)
      return a.defining_module < b.defining_module;
    if (a.range.start != b.range.start) return a.range.start < b.range.start;
    return a.range.end < b.range.end;
  });
  return out;
}

std::map<std::string, std::set<ModuleUri>> SymdefIndex::definer_map() const {
  std::map<std::string, std::set<ModuleUri>> out;
  for (const auto& [name, uri] : prefix_query("")) {
    out[name].insert(uri);
  }
  return out;
}

bool operator<(const RefOccurrence& a, const RefOccurrence& b) {
  if (a.document != b.document) return a.document < b.document;
  if (a.range.start != b.range.start) return a.range.start < b.range.start;
  if (a.range.end != b.range.end) return a.range.end < b.range.end;
  if (a.name != b.name) return a.name < b.name;
  if (a.defining_module != b.defining_module)
    return a.defining_module < b.defining_module;
  return a.occurrence_module < b.occurrence_module;
}

bool operator==(const RefOccurrence& a, const RefOccurrence& b) {
  return a.document == b.document && a.range.start == b.range.start &&
         a.range.end == b.range.end && a.name == b.name &&
         a.defining_module == b.defining_module &&
         a.occurrence_module == b.occurrence_module;
}

void RefIndex::insert(RefOccurrence occ) {
  auto it = std::lower_bound(items_.begin(), items_.end(), occ);
  items_.insert(it, std::move(occ));
}

void RefIndex::remove_document(const DocumentUri& doc) {
  items_.erase(std::remove_if(items_.begin(), items_.end(),
                              [&](const RefOccurrence& o) {
                                return o.document == doc;
                              }),
               items_.end());
}

void RefIndex::clear() { items_.clear(); }

std::vector<RefOccurrence> RefIndex::occurrences(const ModuleUri& definer,
                                                 std::string_view name) const {
  std::vector<RefOccurrence> out;
  for (const auto& o : items_) {
    if (o.defining_module == definer && o.name == name) out.push_back(o);
  }
  return out;
}

std::vector<RefOccurrence> RefIndex::in_document(const DocumentUri& doc) const {
  std::vector<RefOccurrence> out;
  for (const auto& o : items_) {
    if (o.document == doc) out.push_back(o);
  }
  return out;
}

namespace {

void add_doc_records(Indexes& indexes, const DocumentUri& doc,
                     const SpotterResult& result) {
  for (const auto& m : result.modules) indexes.theory.add_module(m.uri);
  for (const auto& imp : result.imports) {
    if (imp.resolved) indexes.theory.add_edge(imp.importer, *imp.resolved);
  }
  for (const auto& s : result.symdefs) indexes.symdefs.insert(s);
  for (const auto& u : result.uses) {
    if (u.resolved_definer && u.in_module) {
      indexes.refs.insert(
          {*u.in_module, *u.resolved_definer, u.name, doc, u.range});
    }
  }
}

}  // namespace

TheoryIndex build_theory_index(
    const std::map<DocumentUri, SpotterResult>& results) {
  TheoryIndex theory;
  for (const auto& [doc, result] : results) {
    for (const auto& m : result.modules) theory.add_module(m.uri);
    for (const auto& imp : result.imports) {
      if (imp.resolved) theory.add_edge(imp.importer, *imp.resolved);
    }
  }
  return theory;
}

void replace_doc_records(Indexes& indexes, const DocumentUri& doc,
                         const std::map<DocumentUri, SpotterResult>& results) {
  // The theory graph cannot be patched per-document without risking
  // dangling edges, so it is rebuilt from all results (cheap: URIs only).
  indexes.theory = build_theory_index(results);
  indexes.symdefs.remove_document(doc);
  indexes.refs.remove_document(doc);
  auto it = results.find(doc);
  if (it == results.end()) return;
  for (const auto& s : it->second.symdefs) indexes.symdefs.insert(s);
  for (const auto& u : it->second.uses) {
    if (u.resolved_definer && u.in_module) {
      indexes.refs.insert(
          {*u.in_module, *u.resolved_definer, u.name, doc, u.range});
    }
  }
}

Indexes build_indexes(const std::map<DocumentUri, SpotterResult>& results) {
  Indexes indexes;
  for (const auto& [doc, result] : results) {
    add_doc_records(indexes, doc, result);
  }
  return indexes;
}

}  // namespace stexide
