// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/services.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "stexide/builtin_macros.hpp"

namespace stexide {

namespace {

std::string make_insert_text(const std::string& name, int arity) {
  std::string out = "\\" + name;
  for (int i = 0; i < arity; ++i) out += "{}";
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

std::string strip_tex_suffix(std::string path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".tex") {
    path.resize(path.size() - 4);
  } else if (path.size() >= 5 && path.substr(path.size() - 5) == ".stex") {
    path.resize(path.size() - 5);
  }
  return path;
}

// First definition block of the definer that lists the symbol in for=.
std::string explanation_for(const Engine& engine, const std::string& name,
                            const ModuleUri& definer) {
  for (const auto& [doc, result] : engine.results()) {
    if (doc != definer.document) continue;
    for (const auto& block : result.definitions) {
      if (block.in_module != definer) continue;
      if (std::find(block.for_symbols.begin(), block.for_symbols.end(),
                    name) != block.for_symbols.end()) {
        return block.text;
      }
    }
  }
  return "";
}

CompletionItem item_for_symbol(const Engine& engine, const std::string& name,
                               const ModuleUri& definer, bool requires_import) {
  int arity = 0;
  for (const auto& decl : engine.symdefs().lookup(name)) {
    if (decl.defining_module == definer) {
      arity = decl.arity;
      break;
    }
  }
  CompletionItem item;
  item.name = name;
  item.arity = arity;
  item.defining_module = definer;
  item.explanation = explanation_for(engine, name, definer);
  item.requires_import = requires_import;
  item.insert_text = make_insert_text(name, arity);
  return item;
}

void sort_items(std::vector<CompletionItem>& items) {
  std::sort(items.begin(), items.end(),
            [](const CompletionItem& a, const CompletionItem& b) {
              if (a.requires_import != b.requires_import)
                return !a.requires_import;
              if (a.name != b.name) return a.name < b.name;
              std::string am = a.defining_module ? a.defining_module->render()
                                                 : std::string();
              std::string bm = b.defining_module ? b.defining_module->render()
                                                 : std::string();
              return am < bm;
            });
}

// The module's own symdef names that precede pos, and the set of modules
// made visible by imports that precede pos.
bool symbol_in_scope_at(const Engine& engine, const ModuleUri& m,
                        SourcePosition pos, const std::string& name,
                        const ModuleUri& definer) {
  const SpotterResult& result = engine.result(m.document);
  if (definer == m) {
    for (const auto& s : result.symdefs) {
      if (s.defining_module == m && s.name == name && s.range.end <= pos) {
        return true;
      }
    }
    return false;
  }
  if (!engine.theory().has(definer) || !engine.theory().has(m) ||
      !engine.theory().reachable(m, definer)) {
    return false;
  }
  for (const auto& imp : result.imports) {
    if (imp.importer != m || !imp.resolved) continue;
    if (imp.range.end <= pos &&
        engine.theory().reachable(*imp.resolved, definer)) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<CompletionItem> complete_at(
    const Engine& engine, const DocumentUri& doc, SourcePosition pos,
    std::string_view typed_prefix,
    const std::vector<BuiltinMacro>* extra_macros) {
  const Document* document = engine.workspace().find(doc);
  if (document == nullptr) {
    throw Error("UnknownDocument", "no document " + doc.value());
  }
  position_to_offset(document->text, pos);  // validates pos
  engine.result(doc);                       // validates analysis state

  std::vector<CompletionItem> items;
  auto add_macro = [&](const BuiltinMacro& macro) {
    if (!starts_with(macro.name, typed_prefix)) return;
    CompletionItem item;
    item.name = macro.name;
    item.arity = macro.arity;
    item.requires_import = false;
    item.insert_text = make_insert_text(macro.name, macro.arity);
    items.push_back(std::move(item));
  };
  for (const auto& macro : builtin_macros()) add_macro(macro);
  if (extra_macros != nullptr) {
    for (const auto& macro : *extra_macros) add_macro(macro);
  }
  std::optional<ModuleUri> module = engine.enclosing_module(doc, pos);
  if (module) {
    for (const auto& [name, definer] :
         engine.symdefs().prefix_query(typed_prefix)) {
      if (symbol_in_scope_at(engine, *module, pos, name, definer)) {
        items.push_back(item_for_symbol(engine, name, definer, false));
      }
    }
  }
  sort_items(items);
  return items;
}

std::vector<CompletionItem> retrieve_all(
    const Engine& engine,
    const std::optional<std::pair<DocumentUri, SourcePosition>>& context,
    std::string_view typed_prefix) {
  if (!engine.analyzed()) {
    throw Error("UnanalyzedDocument", "workspace not analyzed");
  }
  std::optional<ModuleUri> module;
  if (context) {
    module = engine.enclosing_module(context->first, context->second);
  }
  std::vector<CompletionItem> items;
  for (const auto& [name, definer] :
       engine.symdefs().prefix_query(typed_prefix)) {
    bool requires_import = false;
    if (context) {
      requires_import =
          !(module && engine.theory().has(*module) &&
            engine.theory().has(definer) &&
            engine.theory().reachable(*module, definer));
    }
    items.push_back(item_for_symbol(engine, name, definer, requires_import));
  }
  sort_items(items);
  return items;
}

std::vector<CompletionItem> retrieve_all(const Engine& engine,
                                         const DocumentUri& doc,
                                         SourcePosition pos,
                                         std::string_view typed_prefix) {
  return retrieve_all(engine, std::make_pair(doc, pos), typed_prefix);
}

namespace {

// Insertion edit for one extra line after `after_line`.
TextEdit make_line_insert(const DocumentUri& doc, const std::string& text,
                          std::uint32_t after_line, std::string line_content) {
  SourcePosition end = end_position(text);
  if (end.line > after_line) {
    SourcePosition at{after_line + 1, 0};
    return {doc, {at, at}, line_content + "\n"};
  }
  return {doc, {end, end}, "\n" + line_content + "\n"};
}

std::string import_line_for(const ModuleUri& context, const ModuleUri& definer,
                            bool with_indent) {
  std::string line = with_indent ? "  " : "";
  if (definer.document == context.document) {
    line += "\\importmodule{" + definer.module_id + "}";
  } else {
    std::string rel = strip_tex_suffix(relative_path(
        context.document.directory(), definer.document.value()));
    line += "\\importmodule[" + rel + "]{" + definer.module_id + "}";
  }
  return line;
}

std::uint32_t import_insert_line(const Engine& engine, const ModuleDecl& decl) {
  std::uint32_t line = decl.begin_range.end.line;
  const SpotterResult& result = engine.result(decl.uri.document);
  for (const auto& imp : result.imports) {
    if (imp.importer == decl.uri && imp.range.end.line > line &&
        imp.range.start >= decl.body_range.start &&
        imp.range.end <= decl.body_range.end) {
      line = imp.range.end.line;
    }
  }
  return line;
}

}  // namespace

TextEdit insert_import_for(const Engine& engine, const ModuleUri& context,
                           const ModuleUri& definer) {
  const ModuleDecl* ctx = engine.find_module(context);
  if (ctx == nullptr) {
    throw Error("UnknownModule", "unknown module " + context.render());
  }
  const ModuleDecl* def = engine.find_module(definer);
  if (def == nullptr) {
    throw Error("UnknownModule", "unknown module " + definer.render());
  }
  if (engine.theory().reachable(context, definer)) {
    throw Error("AlreadyReachable", definer.render() +
                                        " is already reachable from " +
                                        context.render());
  }
  const std::string& text = engine.workspace().find(context.document)->text;
  return make_line_insert(context.document, text,
                          import_insert_line(engine, *ctx),
                          import_line_for(context, definer, true));
}

namespace {

Engine simulate(const Engine& engine,
                const std::map<DocumentUri, std::vector<TextEdit>>& edits) {
  Workspace ws = engine.workspace();
  for (const auto& [doc, es] : edits) {
    if (!ws.contains(doc)) ws.add_document(doc, "");
  }
  for (const auto& [doc, es] : edits) {
    for (const auto& e : es) ws.apply_text_edit(e);
  }
  Engine sim(std::move(ws), engine.registry());
  sim.analyze_all();
  return sim;
}

std::multiset<std::string> resolved_use_keys(const Engine& engine) {
  std::multiset<std::string> keys;
  for (const auto& [doc, result] : engine.results()) {
    for (const auto& u : result.uses) {
      if (u.resolved_definer && u.in_module) {
        keys.insert(doc.value() + "|" + u.in_module->render() + "|" + u.name +
                    "|" + u.resolved_definer->render());
      }
    }
  }
  return keys;
}

bool is_subset(const std::multiset<std::string>& a,
               const std::multiset<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void sort_plan(RenamePlan& plan) {
  for (auto& [doc, edits] : plan.edits) {
    std::sort(edits.begin(), edits.end(),
              [](const TextEdit& a, const TextEdit& b) {
                if (a.range.start != b.range.start)
                  return b.range.start < a.range.start;
                return b.range.end < a.range.end;
              });
  }
}

}  // namespace

RenamePlan rename_symbol(const Engine& engine, const ModuleUri& defining_module,
                         std::string_view old_name, std::string_view new_name) {
  std::string old_n(old_name);
  std::string new_n(new_name);
  std::vector<SymdefDecl> decls;
  for (const auto& d : engine.symdefs().lookup(old_n)) {
    if (d.defining_module == defining_module) decls.push_back(d);
  }
  if (decls.empty()) {
    throw Error("UnknownSymbol", "no symbol '" + old_n + "' defined in " +
                                     defining_module.render());
  }
  if (!is_valid_symbol_name(new_n)) {
    throw Error("InvalidName", "'" + new_n + "' is not a valid macro name");
  }
  std::vector<RefOccurrence> occurrences =
      engine.refs().occurrences(defining_module, old_n);

  RenamePlan plan;
  plan.touched_count = decls.size() + occurrences.size();
  if (old_n == new_n) return plan;  // identity rename has no edits

  // Collision check in every module an edit lands in.
  std::set<ModuleUri> edit_modules{defining_module};
  for (const auto& occ : occurrences) edit_modules.insert(occ.occurrence_module);
  std::vector<std::string> collisions;
  std::vector<SymdefDecl> new_name_decls = engine.symdefs().lookup(new_n);
  for (const auto& m : edit_modules) {
    for (const auto& d : new_name_decls) {
      bool clash = d.defining_module == defining_module ||
                   (engine.theory().has(m) &&
                    engine.theory().has(d.defining_module) &&
                    engine.theory().reachable(m, d.defining_module));
      if (clash) {
        collisions.push_back(m.render());
        break;
      }
    }
  }
  if (!collisions.empty()) {
    std::string list;
    for (const auto& c : collisions) {
      if (!list.empty()) list += ", ";
      list += c;
    }
    throw Error("NameCollision",
                "renaming to '" + new_n + "' would collide in: " + list);
  }

  for (const auto& d : decls) {
    plan.edits[d.defining_module.document].push_back(
        {d.defining_module.document, d.name_range, new_n});
  }
  for (const auto& occ : occurrences) {
    plan.edits[occ.document].push_back({occ.document, occ.range, "\\" + new_n});
  }
  sort_plan(plan);
  return plan;
}

RenamePlan rename_module(const Engine& engine, const ModuleUri& m,
                         std::string_view new_id) {
  const ModuleDecl* decl = engine.find_module(m);
  if (decl == nullptr) {
    throw Error("UnknownModule", "unknown module " + m.render());
  }
  if (decl->synthetic) {
    throw Error("SyntheticModule",
                "module " + m.render() + " has no explicit declaration");
  }
  std::string id(new_id);
  if (id.empty() || id.find_first_of("[]{}=,\\%# \t\n") != std::string::npos) {
    throw Error("InvalidName", "'" + id + "' is not a valid module id");
  }
  // A module with the new id in the same document shadows everything.
  for (const auto& other : engine.result(m.document).modules) {
    if (other.id == id && other.uri != m) {
      throw Error("IdCollision", "document " + m.document.value() +
                                     " already declares module '" + id + "'");
    }
  }
  bool other_module_named_new = false;
  for (const auto& uri : engine.all_modules()) {
    if (uri.module_id == id && uri != m) other_module_named_new = true;
  }

  RenamePlan plan;
  plan.edits[m.document].push_back({m.document, decl->id_range, id});
  for (const auto& [doc, result] : engine.results()) {
    for (const auto& imp : result.imports) {
      if (imp.resolved && *imp.resolved == m) {
        if (!imp.target_path) {
          // Pathless import: the new id must still resolve to m afterwards.
          bool importer_doc_clash = false;
          for (const auto& other : engine.result(doc).modules) {
            if (other.id == id && other.uri != m) importer_doc_clash = true;
          }
          if (importer_doc_clash || (other_module_named_new && doc != m.document)) {
            throw Error("IdCollision",
                        "pathless import in " + doc.value() +
                            " would no longer resolve to " + m.render() +
                            " after renaming to '" + id + "'");
          }
        }
        plan.edits[doc].push_back({doc, imp.arg_range, id});
      } else if (!imp.target_path && imp.target_name == id && imp.resolved &&
                 imp.resolved->document != doc) {
        // A cross-document pathless import of some other module named id
        // would become ambiguous once m also carries that id.
        throw Error("IdCollision", "renaming to '" + id +
                                       "' would make the import in " +
                                       doc.value() + " ambiguous");
      }
    }
  }
  plan.touched_count = 0;
  for (const auto& [doc, edits] : plan.edits) plan.touched_count += edits.size();
  sort_plan(plan);
  return plan;
}

namespace {

// Expands a deletion range to whole lines when the rest of those lines is
// blank, including the trailing newline.
SourceRange expand_to_whole_lines(const std::string& text,
                                  const SourceRange& range) {
  std::size_t start = position_to_offset(text, range.start);
  std::size_t end = position_to_offset(text, range.end);
  std::size_t line_start = start;
  while (line_start > 0 && text[line_start - 1] != '\n') --line_start;
  bool lead_blank = true;
  for (std::size_t i = line_start; i < start; ++i) {
    if (text[i] != ' ' && text[i] != '\t') lead_blank = false;
  }
  std::size_t line_end = end;
  while (line_end < text.size() &&
         (text[line_end] == ' ' || text[line_end] == '\t')) {
    ++line_end;
  }
  bool trail_blank = line_end == text.size() || text[line_end] == '\n';
  if (!lead_blank || !trail_blank) return range;
  if (line_end < text.size()) ++line_end;  // include the newline
  return {offset_to_position(text, line_start),
          offset_to_position(text, line_end)};
}

// Multiset adjacency of resolved imports (duplicates kept).
std::map<ModuleUri, std::vector<ModuleUri>> import_adjacency(
    const Engine& engine) {
  std::map<ModuleUri, std::vector<ModuleUri>> adj;
  for (const auto& [doc, result] : engine.results()) {
    for (const auto& imp : result.imports) {
      if (imp.resolved) adj[imp.importer].push_back(*imp.resolved);
    }
  }
  return adj;
}

std::set<ModuleUri> reach_from(
    const std::map<ModuleUri, std::vector<ModuleUri>>& adj,
    const ModuleUri& from) {
  std::set<ModuleUri> seen;
  std::vector<ModuleUri> stack{from};
  while (!stack.empty()) {
    ModuleUri cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    auto it = adj.find(cur);
    if (it == adj.end()) continue;
    for (const auto& next : it->second) stack.push_back(next);
  }
  return seen;
}

}  // namespace

std::vector<ServiceDiagnostic> minimize_imports(const Engine& engine,
                                                const ModuleUri& m) {
  const ModuleDecl* decl = engine.find_module(m);
  if (decl == nullptr) {
    throw Error("UnknownModule", "unknown module " + m.render());
  }
  const SpotterResult& result = engine.result(m.document);
  const std::string& text = engine.workspace().find(m.document)->text;

  std::set<ModuleUri> needed;
  for (const auto& u : result.uses) {
    if (u.in_module && *u.in_module == m && u.resolved_definer &&
        *u.resolved_definer != m) {
      needed.insert(*u.resolved_definer);
    }
  }
  auto adjacency = import_adjacency(engine);
  std::multiset<std::string> before_keys = resolved_use_keys(engine);

  auto verified = [&](const std::vector<TextEdit>& fix) {
    std::map<DocumentUri, std::vector<TextEdit>> grouped;
    for (const auto& e : fix) grouped[e.target].push_back(e);
    for (auto& [doc, es] : grouped) {
      std::sort(es.begin(), es.end(), [](const TextEdit& a, const TextEdit& b) {
        return b.range.start < a.range.start;
      });
    }
    Engine sim = simulate(engine, grouped);
    return is_subset(before_keys, resolved_use_keys(sim));
  };

  std::vector<ServiceDiagnostic> out;
  for (const auto& imp : result.imports) {
    if (imp.importer != m || !imp.resolved) continue;
    // Reachability from m with this one import instance removed.
    auto adj = adjacency;
    auto& outgoing = adj[m];
    auto hit = std::find(outgoing.begin(), outgoing.end(), *imp.resolved);
    if (hit != outgoing.end()) outgoing.erase(hit);
    std::set<ModuleUri> without = reach_from(adj, m);

    ServiceDiagnostic diag;
    diag.severity = ServiceDiagnostic::Severity::Warning;
    diag.document = m.document;
    diag.range = imp.range;
    std::vector<TextEdit> fix{
        {m.document, expand_to_whole_lines(text, imp.range), ""}};
    if (without.count(*imp.resolved) > 0) {
      diag.code = "redundant-import";
      diag.message = "import of '" + imp.target_name +
                     "' is redundant: already reachable through other imports";
    } else {
      bool all_needed_survive = true;
      for (const auto& d : needed) {
        if (without.count(d) == 0) all_needed_survive = false;
      }
      if (!all_needed_survive) continue;  // import carries live symbols
      diag.code = "unused-import";
      diag.message =
          "import of '" + imp.target_name + "' is unused: no symbol in " +
          m.render() + " resolves through it";
    }
    if (verified(fix)) diag.fixes.push_back(std::move(fix));
    out.push_back(std::move(diag));
  }

  // Unresolved uses with a unique definer: replace a subsumed import or
  // insert the missing one.
  std::map<std::string, std::set<ModuleUri>> definers =
      engine.symdefs().definer_map();
  std::set<std::string> handled;
  for (const auto& u : result.uses) {
    if (!u.in_module || *u.in_module != m) continue;
    if (!u.in_universe || u.resolved_definer) continue;
    if (!handled.insert(u.name).second) continue;
    auto it = definers.find(u.name);
    if (it == definers.end() || it->second.size() != 1) continue;
    const ModuleUri& target = *it->second.begin();
    if (!engine.theory().has(target)) continue;

    ServiceDiagnostic diag;
    diag.severity = ServiceDiagnostic::Severity::Warning;
    diag.document = m.document;

    const ImportDecl* subsumed = nullptr;
    for (const auto& imp : result.imports) {
      if (imp.importer == m && imp.resolved &&
          engine.theory().reachable(target, *imp.resolved)) {
        subsumed = &imp;
        break;
      }
    }
    if (subsumed != nullptr) {
      diag.code = "replaceable-import";
      diag.range = subsumed->range;
      diag.message = "import of '" + subsumed->target_name +
                     "' can be replaced by importing '" +
                     target.module_id + "', which also provides \\" + u.name;
      std::vector<TextEdit> fix{{m.document, subsumed->range,
                                 import_line_for(m, target, false)}};
      if (verified(fix)) diag.fixes.push_back(std::move(fix));
    } else {
      diag.code = "missing-import";
      diag.range = u.range;
      diag.message = "\\" + u.name + " needs an import of '" +
                     target.module_id + "'";
      std::vector<TextEdit> fix{insert_import_for(engine, m, target)};
      if (verified(fix)) diag.fixes.push_back(std::move(fix));
    }
    out.push_back(std::move(diag));
  }
  std::sort(out.begin(), out.end(),
            [](const ServiceDiagnostic& a, const ServiceDiagnostic& b) {
              if (a.range.start != b.range.start)
                return a.range.start < b.range.start;
              return a.code < b.code;
            });
  return out;
}

RenamePlan split_module(const Engine& engine, const ModuleUri& m,
                        const std::vector<SourceRange>& move_ranges,
                        std::string_view new_id, const DocumentUri& new_doc) {
  const ModuleDecl* decl = engine.find_module(m);
  if (decl == nullptr) {
    throw Error("UnknownModule", "unknown module " + m.render());
  }
  if (move_ranges.empty()) {
    throw Error("RangeNotAStructure", "no structure ranges selected");
  }
  std::string id(new_id);
  for (const auto& uri : engine.all_modules()) {
    if (uri.module_id == id) {
      throw Error("IdCollision", "module id '" + id + "' is already in use");
    }
  }
  const SpotterResult& result = engine.result(m.document);
  const std::string& text = engine.workspace().find(m.document)->text;

  // Each range must exactly match a spotted symdef or definition in m.
  std::vector<SourceRange> moves = move_ranges;
  std::sort(moves.begin(), moves.end(), [](const SourceRange& a,
                                           const SourceRange& b) {
    return a.start < b.start;
  });
  std::set<std::string> moved_names;
  for (const auto& r : moves) {
    bool matched = false;
    for (const auto& s : result.symdefs) {
      if (s.defining_module == m && s.range.start == r.start &&
          s.range.end == r.end) {
        matched = true;
        moved_names.insert(s.name);
      }
    }
    for (const auto& d : result.definitions) {
      if (d.in_module == m && d.range.start == r.start && d.range.end == r.end) {
        matched = true;
      }
    }
    if (!matched) {
      throw Error("RangeNotAStructure",
                  "range " + to_string(r) + " is not a whole structure in " +
                      m.render());
    }
  }

  // Definers needed by uses inside the moved content.
  auto inside_moves = [&](const SourceRange& r) {
    for (const auto& mv : moves) {
      if (mv.contains(r)) return true;
    }
    return false;
  };
  std::set<ModuleUri> needed;
  for (const auto& u : result.uses) {
    if (!u.in_module || *u.in_module != m) continue;
    if (!u.resolved_definer || !inside_moves(u.range)) continue;
    if (*u.resolved_definer == m && moved_names.count(u.name) > 0) {
      continue;  // symbol moves along with its uses
    }
    needed.insert(*u.resolved_definer);
  }
  // Minimal antichain: drop definers reachable from another needed one;
  // within a reachability cycle the smallest URI wins.
  std::vector<ModuleUri> imports_for_new;
  for (const auto& d : needed) {
    bool dominated = false;
    for (const auto& other : needed) {
      if (other == d) continue;
      if (engine.theory().reachable(other, d)) {
        bool mutual = engine.theory().reachable(d, other);
        if (!mutual || other < d) dominated = true;
      }
    }
    if (!dominated) imports_for_new.push_back(d);
  }
  std::sort(imports_for_new.begin(), imports_for_new.end());

  // New document content.
  ModuleUri new_module{new_doc, id};
  std::ostringstream content;
  content << "\\begin{module}[id=" << id << "]\n";
  for (const auto& d : imports_for_new) {
    content << import_line_for(new_module, d, true) << "\n";
  }
  for (const auto& r : moves) {
    content << "  " << slice(text, r) << "\n";
  }
  content << "\\end{module}\n";

  RenamePlan plan;
  plan.edits[new_doc].push_back(
      {new_doc, {{1, 0}, {1, 0}}, content.str()});
  for (const auto& r : moves) {
    plan.edits[m.document].push_back(
        {m.document, expand_to_whole_lines(text, r), ""});
  }
  // Back-import when the rest of m still uses moved symbols.
  bool rest_needs_moved = false;
  for (const auto& u : result.uses) {
    if (!u.in_module || *u.in_module != m || inside_moves(u.range)) continue;
    if (u.resolved_definer && *u.resolved_definer == m &&
        moved_names.count(u.name) > 0) {
      rest_needs_moved = true;
    }
  }
  if (rest_needs_moved) {
    plan.edits[m.document].push_back(
        make_line_insert(m.document, text, import_insert_line(engine, *decl),
                         import_line_for(m, new_module, true)));
  }
  plan.touched_count = 0;
  for (const auto& [doc, edits] : plan.edits) plan.touched_count += edits.size();
  sort_plan(plan);
  return plan;
}

namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool word_boundary(char c) {
  return !std::isalnum(static_cast<unsigned char>(c));
}

bool contains_word(const std::string& haystack_lower,
                   const std::string& term_lower) {
  if (term_lower.empty()) return false;
  std::size_t pos = 0;
  while ((pos = haystack_lower.find(term_lower, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || word_boundary(haystack_lower[pos - 1]);
    std::size_t end = pos + term_lower.size();
    bool right_ok = end >= haystack_lower.size() ||
                    word_boundary(haystack_lower[end]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

}  // namespace

std::vector<SearchHit> concept_search(const Engine& engine,
                                      const std::vector<std::string>& query) {
  std::vector<std::string> terms;
  for (const auto& t : query) {
    std::string lower = to_lower(t);
    // Trim whitespace.
    std::size_t b = lower.find_first_not_of(" \t\r\n");
    std::size_t e = lower.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    terms.push_back(lower.substr(b, e - b + 1));
  }
  if (terms.empty()) {
    throw Error("EmptyQuery", "concept search needs at least one term");
  }

  using Key = std::pair<ModuleUri, std::string>;
  std::map<Key, double> scores;
  std::map<Key, std::vector<SearchHit::Evidence>> evidence;

  auto add_score = [&](const ModuleUri& definer, const std::string& name,
                       double points) {
    scores[{definer, name}] += points;
  };
  // Declared (module, name) pairs for quick existence checks.
  std::map<std::string, std::set<ModuleUri>> definers =
      engine.symdefs().definer_map();

  for (const auto& [doc, result] : engine.results()) {
    for (const auto& block : result.definitions) {
      std::string text_lower = to_lower(block.text);
      std::string title_lower = block.title ? to_lower(*block.title) : "";
      std::vector<std::string> matched;
      for (const auto& t : terms) {
        if (contains_word(text_lower, t) || contains_word(title_lower, t)) {
          matched.push_back(t);
        }
      }
      if (matched.empty()) continue;
      double factor = static_cast<double>(matched.size());
      std::set<Key> touched;

      for (const auto& fs : block.for_symbols) {
        auto it = definers.find(fs);
        if (it == definers.end()) continue;
        // Prefer definers visible from the block's module.
        std::vector<ModuleUri> candidates;
        for (const auto& d : it->second) {
          if (engine.theory().has(block.in_module) &&
              engine.theory().has(d) &&
              engine.theory().reachable(block.in_module, d)) {
            candidates.push_back(d);
          }
        }
        if (candidates.empty()) {
          candidates.assign(it->second.begin(), it->second.end());
        }
        for (const auto& d : candidates) {
          add_score(d, fs, 3.0 * factor);
          touched.insert({d, fs});
        }
      }
      for (const auto& u : result.uses) {
        if (!u.resolved_definer || !block.range.contains(u.range)) continue;
        add_score(*u.resolved_definer, u.name, 2.0 * factor);
        touched.insert({*u.resolved_definer, u.name});
      }
      for (const auto& [d, r] : engine.results()) {
        for (const auto& s : r.symdefs) {
          if (s.defining_module == block.in_module) {
            add_score(s.defining_module, s.name, 1.0 * factor);
            touched.insert({s.defining_module, s.name});
          }
        }
      }
      for (const auto& key : touched) {
        evidence[key].push_back({block, matched});
      }
    }
  }

  std::vector<SearchHit> hits;
  for (const auto& [key, score] : scores) {
    const auto& [module, name] = key;
    SearchHit hit;
    bool found = false;
    for (const auto& d : engine.symdefs().lookup(name)) {
      if (d.defining_module == module) {
        hit.symbol = d;
        found = true;
        break;
      }
    }
    if (!found) continue;
    hit.score = score;
    hit.evidence = evidence[key];
    hits.push_back(std::move(hit));
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.symbol.name != b.symbol.name) return a.symbol.name < b.symbol.name;
    return a.symbol.defining_module < b.symbol.defining_module;
  });
  return hits;
}

namespace {

struct OutlineItem {
  OutlineNode node;
  SourceRange range;
  int section_level = -1;  // -1 for non-sections
};

// Sections own the siblings that follow them until a section of the same or
// a coarser level begins.
std::vector<OutlineNode> adopt_into_sections(std::vector<OutlineItem> list) {
  std::vector<OutlineNode> out;
  std::vector<std::vector<OutlineNode>*> targets{&out};
  std::vector<int> levels;
  for (auto& it : list) {
    int level = it.section_level;
    while (!levels.empty() && level >= 0 && levels.back() >= level) {
      levels.pop_back();
      targets.pop_back();
    }
    targets.back()->push_back(std::move(it.node));
    if (level >= 0) {
      levels.push_back(level);
      targets.push_back(&targets.back()->back().children);
    }
  }
  return out;
}

std::vector<OutlineNode> fold_sections(std::vector<OutlineItem> items) {
  // Forest by containment: parent = nearest enclosing earlier item.
  std::vector<std::vector<std::size_t>> children(items.size());
  std::vector<std::size_t> root_ids;
  std::vector<std::size_t> stack_ids;
  for (std::size_t i = 0; i < items.size(); ++i) {
    while (!stack_ids.empty() &&
           !items[stack_ids.back()].range.contains(items[i].range)) {
      stack_ids.pop_back();
    }
    if (stack_ids.empty()) {
      root_ids.push_back(i);
    } else {
      children[stack_ids.back()].push_back(i);
    }
    stack_ids.push_back(i);
  }
  std::function<std::vector<OutlineNode>(const std::vector<std::size_t>&)>
      emit = [&](const std::vector<std::size_t>& ids) {
        std::vector<OutlineItem> list;
        for (std::size_t i : ids) {
          OutlineItem item;
          item.node = std::move(items[i].node);
          item.node.children = emit(children[i]);
          item.range = items[i].range;
          item.section_level = items[i].section_level;
          list.push_back(std::move(item));
        }
        return adopt_into_sections(std::move(list));
      };
  return emit(root_ids);
}

}  // namespace

std::vector<OutlineNode> outline(const Engine& engine, const DocumentUri& doc) {
  const SpotterResult& result = engine.result(doc);
  std::vector<OutlineItem> items;
  for (const auto& m : result.modules) {
    OutlineItem it;
    it.node.kind = "module";
    it.node.label = m.id;
    it.node.range = m.range;
    it.range = m.range;
    items.push_back(std::move(it));
  }
  for (const auto& imp : result.imports) {
    OutlineItem it;
    it.node.kind = "import";
    it.node.label = imp.target_name;
    it.node.range = imp.range;
    it.node.target = imp.resolved;
    it.range = imp.range;
    items.push_back(std::move(it));
  }
  for (const auto& s : result.symdefs) {
    OutlineItem it;
    it.node.kind = "symdef";
    it.node.label = s.name;
    it.node.range = s.range;
    it.range = s.range;
    items.push_back(std::move(it));
  }
  for (const auto& d : result.definitions) {
    OutlineItem it;
    it.node.kind = "definition";
    it.node.label = d.id ? *d.id : (d.title ? *d.title : d.kind);
    it.node.range = d.range;
    it.range = d.range;
    items.push_back(std::move(it));
  }
  for (const auto& s : result.sections) {
    OutlineItem it;
    it.node.kind = "section";
    it.node.label = s.title;
    it.node.range = s.range;
    it.range = s.range;
    it.section_level = static_cast<int>(s.level);
    items.push_back(std::move(it));
  }
  std::sort(items.begin(), items.end(),
            [](const OutlineItem& a, const OutlineItem& b) {
              if (a.range.start != b.range.start)
                return a.range.start < b.range.start;
              if (a.range.end != b.range.end) return b.range.end < a.range.end;
              return a.node.kind < b.node.kind;
            });
  return fold_sections(std::move(items));
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string export_theory_graph(const Engine& engine) {
  // Display name: module id, disambiguated with the document when shared.
  std::map<std::string, int> id_counts;
  for (const auto& uri : engine.all_modules()) ++id_counts[uri.module_id];
  auto display = [&](const ModuleUri& uri) {
    if (id_counts[uri.module_id] > 1) {
      return uri.module_id + "@" + uri.document.value();
    }
    return uri.module_id;
  };

  std::ostringstream os;
  os << "digraph theories {\n";
  std::vector<ModuleUri> nodes = engine.all_modules();
  std::sort(nodes.begin(), nodes.end(),
            [&](const ModuleUri& a, const ModuleUri& b) {
              std::string da = display(a);
              std::string db = display(b);
              if (da != db) return da < db;
              return a < b;
            });
  for (const auto& n : nodes) {
    os << "  \"" << dot_escape(display(n)) << "\" [label=\""
       << dot_escape(n.module_id) << "\", tooltip=\""
       << dot_escape(n.document.value()) << "\"];\n";
  }
  // Placeholder nodes for unresolved imports.
  std::set<std::string> placeholders;
  std::set<std::pair<std::string, std::string>> dashed_edges;
  for (const auto& [doc, result] : engine.results()) {
    for (const auto& imp : result.imports) {
      if (imp.resolved) continue;
      placeholders.insert(imp.target_name);
      dashed_edges.insert({display(imp.importer), "?" + imp.target_name});
    }
  }
  for (const auto& p : placeholders) {
    os << "  \"?" << dot_escape(p) << "\" [label=\"" << dot_escape(p)
       << "?\", style=dashed];\n";
  }
  std::set<std::pair<std::string, std::string>> solid_edges;
  for (const auto& [from, to] : engine.theory().edge_set()) {
    solid_edges.insert({display(from), display(to)});
  }
  for (const auto& [from, to] : solid_edges) {
    os << "  \"" << dot_escape(from) << "\" -> \"" << dot_escape(to)
       << "\";\n";
  }
  for (const auto& [from, to] : dashed_edges) {
    os << "  \"" << dot_escape(from) << "\" -> \"" << dot_escape(to)
       << "\" [style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

std::string export_omdoc_skeleton(const Engine& engine, const ModuleUri& m) {
  const ModuleDecl* decl = engine.find_module(m);
  if (decl == nullptr) {
    throw Error("UnknownModule", "unknown module " + m.render());
  }
  const SpotterResult& result = engine.result(m.document);
  std::ostringstream os;
  os << "<theory xml:id=\"" << xml_escape(m.module_id) << "\">\n";
  for (const auto& imp : result.imports) {
    if (imp.importer != m) continue;
    std::string from;
    if (imp.target_path) {
      from = strip_tex_suffix(*imp.target_path) + ".omdoc#" + imp.target_name;
    } else if (imp.resolved && imp.resolved->document != m.document) {
      from = strip_tex_suffix(relative_path(m.document.directory(),
                                            imp.resolved->document.value())) +
             ".omdoc#" + imp.target_name;
    } else {
      from = "#" + imp.target_name;
    }
    os << "  <imports from=\"" << xml_escape(from) << "\"/>\n";
  }
  for (const auto& s : result.symdefs) {
    if (s.defining_module != m) continue;
    os << "  <symbol xml:id=\"" << xml_escape(s.name) << "\"/>\n";
    os << "  <notation for=\"" << xml_escape(s.name) << "\">\n";
    os << "    <prototype><OMS cd=\"" << xml_escape(m.module_id)
       << "\" name=\"" << xml_escape(s.name) << "\"/></prototype>\n";
    os << "    <rendering>" << xml_escape(s.presentation) << "</rendering>\n";
    os << "  </notation>\n";
  }
  for (const auto& d : result.definitions) {
    if (d.in_module != m) continue;
    os << "  <definition";
    if (d.id) os << " xml:id=\"" << xml_escape(*d.id) << "\"";
    if (!d.for_symbols.empty()) {
      os << " for=\"";
      for (std::size_t i = 0; i < d.for_symbols.size(); ++i) {
        if (i > 0) os << " ";
        os << xml_escape(d.for_symbols[i]);
      }
      os << "\"";
    }
    os << ">\n";
    if (d.title) {
      os << "    <meta property=\"dc:title\">" << xml_escape(*d.title)
         << "</meta>\n";
    }
    os << "    " << xml_escape(d.text) << "\n";
    os << "  </definition>\n";
  }
  os << "</theory>\n";
  return os.str();
}

}  // namespace stexide
