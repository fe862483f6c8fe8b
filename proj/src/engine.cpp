// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/engine.hpp"

#include <algorithm>
#include <sstream>

namespace stexide {

namespace {

std::string escape_line(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\\':
        out += "\\\\";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

void group_diags(std::vector<WorkspaceDiagnostic> diags,
                 std::map<DocumentUri, std::vector<WorkspaceDiagnostic>>& out,
                 const std::set<DocumentUri>* scope) {
  if (scope == nullptr) {
    out.clear();
  } else {
    for (const auto& doc : *scope) out[doc].clear();
  }
  for (auto& d : diags) {
    out[d.document].push_back(std::move(d));
  }
}

}  // namespace

Engine::Engine(Workspace ws, SpotterRegistry registry)
    : ws_(std::move(ws)), registry_(std::move(registry)) {}

Engine::Engine(Workspace ws)
    : Engine(std::move(ws), SpotterRegistry::builtins()) {}

Engine Engine::open(const std::filesystem::path& root,
                    const std::vector<std::string>& globs,
                    std::vector<std::string>* warnings) {
  return Engine(Workspace::scan(root, globs, warnings));
}

void Engine::require_analyzed() const {
  if (!analyzed_) {
    throw Error("UnanalyzedDocument", "call analyze_all() before querying");
  }
}

void Engine::analyze_all() {
  results_.clear();
  trees_.clear();
  parse_diags_.clear();
  import_diags_.clear();
  use_diags_.clear();
  for (const auto& [uri, doc] : ws_.documents()) {
    DocumentTree tree = parse(doc.text);
    parse_diags_[uri] = tree.diagnostics;
    results_[uri] = run_spotters(tree, uri, registry_);
    trees_[uri] = build_range_tree(results_[uri], uri, doc.version);
  }
  std::vector<WorkspaceDiagnostic> idiags;
  resolve_imports(results_, &idiags);
  group_diags(std::move(idiags), import_diags_, nullptr);
  indexes_.theory = build_theory_index(results_);
  std::vector<WorkspaceDiagnostic> udiags;
  resolve_symbol_uses(results_, indexes_.theory, &udiags);
  group_diags(std::move(udiags), use_diags_, nullptr);
  indexes_.symdefs.clear();
  indexes_.refs.clear();
  for (const auto& [uri, result] : results_) {
    for (const auto& s : result.symdefs) indexes_.symdefs.insert(s);
    for (const auto& u : result.uses) {
      if (u.resolved_definer && u.in_module) {
        indexes_.refs.insert(
            {*u.in_module, *u.resolved_definer, u.name, uri, u.range});
      }
    }
  }
  analyzed_ = true;
}

const SpotterResult& Engine::result(const DocumentUri& doc) const {
  require_analyzed();
  auto it = results_.find(doc);
  if (it == results_.end()) {
    throw Error("UnknownDocument", "no document " + doc.value());
  }
  return it->second;
}

const RangeTree& Engine::range_tree(const DocumentUri& doc) const {
  require_analyzed();
  auto it = trees_.find(doc);
  if (it == trees_.end()) {
    throw Error("UnknownDocument", "no document " + doc.value());
  }
  return it->second;
}

const std::vector<ParseDiagnostic>& Engine::parse_diagnostics(
    const DocumentUri& doc) const {
  require_analyzed();
  auto it = parse_diags_.find(doc);
  if (it == parse_diags_.end()) {
    throw Error("UnknownDocument", "no document " + doc.value());
  }
  return it->second;
}

std::vector<WorkspaceDiagnostic> Engine::resolution_diagnostics() const {
  require_analyzed();
  std::vector<WorkspaceDiagnostic> out;
  for (const auto& [doc, diags] : import_diags_) {
    out.insert(out.end(), diags.begin(), diags.end());
  }
  for (const auto& [doc, diags] : use_diags_) {
    out.insert(out.end(), diags.begin(), diags.end());
  }
  std::sort(out.begin(), out.end(),
            [](const WorkspaceDiagnostic& a, const WorkspaceDiagnostic& b) {
              if (a.document != b.document) return a.document < b.document;
              if (a.diagnostic.range.start != b.diagnostic.range.start)
                return a.diagnostic.range.start < b.diagnostic.range.start;
              return a.diagnostic.code < b.diagnostic.code;
            });
  return out;
}

AnalysisAction Engine::apply_edit(const TextEdit& edit) {
  require_analyzed();
  const Document* doc = ws_.find(edit.target);
  if (doc == nullptr) {
    throw Error("UnknownDocument", "no document " + edit.target.value());
  }
  const DocumentUri& uri = edit.target;
  std::vector<SourceRange> important =
      collect_important_ranges(results_[uri], doc->text);
  AnalysisAction action =
      classify_edit(trees_[uri], doc->version, doc->text, edit, important);
  ws_.apply_text_edit(edit);
  const std::string& new_text = ws_.find(uri)->text;
  if (action.kind == AnalysisAction::Kind::ShiftOnly) {
    shift_result(results_[uri], edit, new_text);
    shift_ranges(trees_[uri], edit);
    replace_doc_records(indexes_, uri, results_);
    SourcePosition new_end =
        advance_position(edit.range.start, edit.replacement);
    for (auto& d : parse_diags_[uri]) {
      d.range = translate_range(d.range, edit.range, new_end);
    }
    for (auto& d : import_diags_[uri]) {
      d.diagnostic.range =
          translate_range(d.diagnostic.range, edit.range, new_end);
    }
    for (auto& d : use_diags_[uri]) {
      d.diagnostic.range =
          translate_range(d.diagnostic.range, edit.range, new_end);
    }
  } else {
    reanalyze_document(uri);
  }
  return action;
}

void Engine::reanalyze_document(const DocumentUri& uri) {
  const Document* doc = ws_.find(uri);
  SpotterResult old_result = std::move(results_[uri]);
  DocumentTree tree = parse(doc->text);
  parse_diags_[uri] = tree.diagnostics;
  results_[uri] = run_spotters(tree, uri, registry_);
  trees_[uri] = build_range_tree(results_[uri], uri, doc->version);
  const SpotterResult& new_result = results_[uri];

  std::set<ModuleUri> old_modules;
  std::set<ModuleUri> new_modules;
  for (const auto& m : old_result.modules) old_modules.insert(m.uri);
  for (const auto& m : new_result.modules) new_modules.insert(m.uri);
  bool module_set_changed = old_modules != new_modules;

  std::vector<WorkspaceDiagnostic> idiags;
  if (module_set_changed) {
    resolve_imports(results_, &idiags);
    group_diags(std::move(idiags), import_diags_, nullptr);
  } else {
    std::set<DocumentUri> scope{uri};
    resolve_imports(results_, &idiags, &scope);
    group_diags(std::move(idiags), import_diags_, &scope);
  }

  auto old_edges = indexes_.theory.edge_set();
  indexes_.theory = build_theory_index(results_);
  bool edges_changed = old_edges != indexes_.theory.edge_set();

  std::set<std::string> changed_names;
  {
    std::set<std::pair<std::string, ModuleUri>> old_pairs;
    std::set<std::pair<std::string, ModuleUri>> new_pairs;
    for (const auto& s : old_result.symdefs) {
      old_pairs.emplace(s.name, s.defining_module);
    }
    for (const auto& s : new_result.symdefs) {
      new_pairs.emplace(s.name, s.defining_module);
    }
    for (const auto& p : old_pairs) {
      if (new_pairs.count(p) == 0) changed_names.insert(p.first);
    }
    for (const auto& p : new_pairs) {
      if (old_pairs.count(p) == 0) changed_names.insert(p.first);
    }
  }

  std::set<DocumentUri> use_scope{uri};
  bool all_uses = edges_changed || module_set_changed;
  if (!all_uses && !changed_names.empty()) {
    for (const auto& [d, r] : results_) {
      for (const auto& u : r.uses) {
        if (changed_names.count(u.name) > 0) {
          use_scope.insert(d);
          break;
        }
      }
    }
  }
  std::vector<WorkspaceDiagnostic> udiags;
  if (all_uses) {
    resolve_symbol_uses(results_, indexes_.theory, &udiags);
    group_diags(std::move(udiags), use_diags_, nullptr);
    indexes_.symdefs.clear();
    indexes_.refs.clear();
    for (const auto& [d, r] : results_) {
      for (const auto& s : r.symdefs) indexes_.symdefs.insert(s);
      for (const auto& u : r.uses) {
        if (u.resolved_definer && u.in_module) {
          indexes_.refs.insert(
              {*u.in_module, *u.resolved_definer, u.name, d, u.range});
        }
      }
    }
  } else {
    resolve_symbol_uses(results_, indexes_.theory, &udiags, &use_scope);
    group_diags(std::move(udiags), use_diags_, &use_scope);
    for (const auto& d : use_scope) refresh_doc_records(d);
  }
}

void Engine::refresh_doc_records(const DocumentUri& doc) {
  indexes_.symdefs.remove_document(doc);
  indexes_.refs.remove_document(doc);
  auto it = results_.find(doc);
  if (it == results_.end()) return;
  for (const auto& s : it->second.symdefs) indexes_.symdefs.insert(s);
  for (const auto& u : it->second.uses) {
    if (u.resolved_definer && u.in_module) {
      indexes_.refs.insert(
          {*u.in_module, *u.resolved_definer, u.name, doc, u.range});
    }
  }
}

void Engine::add_document(const DocumentUri& uri, std::string text) {
  ws_.add_document(uri, std::move(text));
  if (analyzed_) {
    results_[uri] = {};
    parse_diags_[uri] = {};
    reanalyze_document(uri);
  }
}

void Engine::apply_edits(const std::vector<TextEdit>& edits) {
  for (const auto& e : edits) {
    if (ws_.find(e.target) == nullptr) {
      ws_.add_document(e.target, "");
    }
  }
  for (const auto& e : edits) {
    ws_.apply_text_edit(e);
  }
  analyze_all();
}

const ModuleDecl* Engine::find_module(const ModuleUri& uri) const {
  require_analyzed();
  auto it = results_.find(uri.document);
  if (it == results_.end()) return nullptr;
  for (const auto& m : it->second.modules) {
    if (m.uri == uri) return &m;
  }
  return nullptr;
}

std::optional<ModuleUri> Engine::enclosing_module(const DocumentUri& doc,
                                                  SourcePosition pos) const {
  require_analyzed();
  auto it = results_.find(doc);
  if (it == results_.end()) return std::nullopt;
  const ModuleDecl* best = nullptr;
  const ModuleDecl* synthetic = nullptr;
  for (const auto& m : it->second.modules) {
    if (m.synthetic) {
      synthetic = &m;
      continue;
    }
    bool inside = m.body_range.contains(pos) || pos == m.body_range.end;
    if (!inside) continue;
    if (best == nullptr || best->body_range.start < m.body_range.start) {
      best = &m;
    }
  }
  if (best != nullptr) return best->uri;
  if (synthetic != nullptr) return synthetic->uri;
  return std::nullopt;
}

std::vector<ModuleUri> Engine::all_modules() const {
  require_analyzed();
  std::vector<ModuleUri> out;
  for (const auto& [doc, result] : results_) {
    for (const auto& m : result.modules) out.push_back(m.uri);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string Engine::fingerprint() const {
  require_analyzed();
  std::ostringstream os;
  auto put_range = [&](const SourceRange& r) { os << to_string(r); };
  for (const auto& [uri, result] : results_) {
    os << "doc " << uri.value() << "\n";
    for (const auto& m : result.modules) {
      os << "  module " << m.uri.render() << (m.synthetic ? " synthetic" : "")
         << " range=";
      put_range(m.range);
      os << " begin=";
      put_range(m.begin_range);
      os << " end=";
      put_range(m.end_range);
      os << " body=";
      put_range(m.body_range);
      os << " idr=";
      put_range(m.id_range);
      os << " enclosing=" << (m.enclosing ? m.enclosing->render() : "-")
         << "\n";
    }
    for (const auto& imp : result.imports) {
      os << "  import " << imp.importer.render() << " name=" << imp.target_name
         << " path=" << (imp.target_path ? *imp.target_path : "-")
         << " range=";
      put_range(imp.range);
      os << " arg=";
      put_range(imp.arg_range);
      os << " resolved=" << (imp.resolved ? imp.resolved->render() : "-")
         << "\n";
    }
    for (const auto& s : result.symdefs) {
      os << "  symdef " << s.defining_module.render() << " " << s.name << "/"
         << s.arity << " range=";
      put_range(s.range);
      os << " name_range=";
      put_range(s.name_range);
      os << " pres=" << escape_line(s.presentation) << "\n";
    }
    for (const auto& u : result.uses) {
      os << "  use " << (u.in_module ? u.in_module->render() : "-") << " "
         << u.name << " range=";
      put_range(u.range);
      os << " resolved="
         << (u.resolved_definer ? u.resolved_definer->render() : "-")
         << " universe=" << (u.in_universe ? 1 : 0) << "\n";
    }
    for (const auto& d : result.definitions) {
      os << "  def " << d.in_module.render() << " kind=" << d.kind
         << " id=" << (d.id ? *d.id : "-")
         << " title=" << (d.title ? escape_line(*d.title) : "-") << " for=";
      for (std::size_t i = 0; i < d.for_symbols.size(); ++i) {
        if (i > 0) os << ",";
        os << d.for_symbols[i];
      }
      os << " range=";
      put_range(d.range);
      os << " header=";
      put_range(d.header_range);
      os << " endr=";
      put_range(d.end_range);
      os << " body=";
      put_range(d.text_range);
      os << " text=" << escape_line(d.text) << "\n";
    }
    for (const auto& s : result.sections) {
      os << "  section " << to_string(s.level) << " "
         << escape_line(s.title) << " range=";
      put_range(s.range);
      os << "\n";
    }
  }
  os << "theory nodes:";
  for (const auto& n : indexes_.theory.nodes()) os << " " << n.render();
  os << "\n";
  os << "theory edges:";
  for (const auto& [from, to] : indexes_.theory.edge_set()) {
    os << " " << from.render() << ">" << to.render();
  }
  os << "\n";
  os << "symdefs:";
  for (const auto& [name, uri] : indexes_.symdefs.prefix_query("")) {
    os << " " << name << "@" << uri.render();
  }
  os << "\n";
  os << "refs:\n";
  for (const auto& o : indexes_.refs.all()) {
    os << "  " << o.document.value() << " " << to_string(o.range) << " "
       << o.name << " in=" << o.occurrence_module.render()
       << " def=" << o.defining_module.render() << "\n";
  }
  return os.str();
}

}  // namespace stexide
