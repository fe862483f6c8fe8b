// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/spotters.hpp"

#include <algorithm>
#include <cctype>

#include "stexide/indexes.hpp"

namespace stexide {

namespace {

const std::set<std::string>& definition_env_names() {
  static const std::set<std::string> kNames = {"definition", "assumption",
                                               "theorem"};
  return kNames;
}

bool is_letters_name(std::string_view name) {
  if (name.empty()) return false;
  std::size_t letters = name.size();
  if (name.back() == '*') --letters;
  if (letters == 0) return false;
  for (std::size_t i = 0; i < letters; ++i) {
    unsigned char c = static_cast<unsigned char>(name[i]);
    if (!std::isalpha(c)) return false;
  }
  return name.find('*') == std::string_view::npos || name.back() == '*';
}

std::string trim_copy(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Exact span of trim(raw) when raw occupies `full` in the source.
SourceRange trimmed_subrange(std::string_view raw, const SourceRange& full) {
  std::size_t b = 0;
  std::size_t e = raw.size();
  while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
  SourcePosition start = advance_position(full.start, raw.substr(0, b));
  SourcePosition end = advance_position(start, raw.substr(b, e - b));
  return {start, end};
}

std::optional<std::string> module_id_of(const Node& env) {
  if (env.kind != NodeKind::Environment || env.name != "module")
    return std::nullopt;
  const OptionEntry* id = env.find_option("id");
  if (id == nullptr) return std::nullopt;
  std::string value = trim_copy(id->value);
  if (value.empty()) return std::nullopt;
  return value;
}

bool is_definition_env(const Node& n) {
  return n.kind == NodeKind::Environment &&
         definition_env_names().count(n.name) > 0;
}

struct DocShape {
  std::vector<std::string> real_ids;  // document order
  bool has_orphans = false;
  std::string synthetic_id;
};

void scan_shape(const Node& n, int module_depth, DocShape& shape) {
  bool enters_module = false;
  if (n.kind == NodeKind::Environment && n.name == "module") {
    if (auto id = module_id_of(n)) {
      shape.real_ids.push_back(*id);
      enters_module = true;
    }
  }
  if (module_depth == 0) {
    if (n.kind == NodeKind::Command &&
        (n.name == "symdef" || n.name == "importmodule")) {
      shape.has_orphans = true;
    }
    if (is_definition_env(n)) shape.has_orphans = true;
  }
  int next_depth = module_depth + (enters_module ? 1 : 0);
  for (const auto& a : n.arguments) scan_shape(a, next_depth, shape);
  for (const auto& c : n.children) scan_shape(c, next_depth, shape);
}

DocShape compute_doc_shape(const DocumentTree& tree, const DocumentUri& doc) {
  DocShape shape;
  scan_shape(tree.root, 0, shape);
  std::string id = doc.stem();
  if (id.empty()) id = "file";
  while (std::find(shape.real_ids.begin(), shape.real_ids.end(), id) !=
         shape.real_ids.end()) {
    id += ".file";
  }
  shape.synthetic_id = id;
  return shape;
}

// Walks the tree handing each node the module it lexically belongs to
// (nullopt when outside every module with an id).
using WalkFn = std::function<void(const Node&, const std::optional<ModuleUri>&)>;

void walk_modules(const Node& n, const DocumentUri& doc,
                  std::optional<ModuleUri> current, const WalkFn& fn) {
  fn(n, current);
  std::optional<ModuleUri> next = current;
  if (auto id = module_id_of(n)) next = ModuleUri{doc, *id};
  for (const auto& a : n.arguments) walk_modules(a, doc, next, fn);
  for (const auto& c : n.children) walk_modules(c, doc, next, fn);
}

std::optional<ModuleUri> attach_module(const std::optional<ModuleUri>& current,
                                       const DocumentUri& doc,
                                       const DocShape& shape) {
  if (current) return current;
  if (shape.has_orphans) return ModuleUri{doc, shape.synthetic_id};
  return std::nullopt;
}

void spot_modules(const DocumentTree& tree, const DocumentUri& doc,
                  SpotterResult& out) {
  DocShape shape = compute_doc_shape(tree, doc);
  std::set<std::string> seen;
  walk_modules(tree.root, doc, std::nullopt,
               [&](const Node& n, const std::optional<ModuleUri>& current) {
                 if (n.kind != NodeKind::Environment || n.name != "module")
                   return;
                 auto id = module_id_of(n);
                 if (!id) {
                   out.diagnostics.push_back(
                       {ParseDiagnostic::Severity::Warning, n.begin_range,
                        "module environment without an id= option",
                        "module-missing-id"});
                   return;
                 }
                 if (!seen.insert(*id).second) {
                   out.diagnostics.push_back(
                       {ParseDiagnostic::Severity::Warning, n.begin_range,
                        "duplicate module id '" + *id + "' in document",
                        "duplicate-module-id"});
                 }
                 ModuleDecl decl;
                 decl.uri = ModuleUri{doc, *id};
                 decl.id = *id;
                 decl.begin_range = n.begin_range;
                 decl.end_range = n.end_range;
                 decl.body_range = n.interior;
                 decl.range = n.range;
                 if (const OptionEntry* entry = n.find_option("id")) {
                   decl.id_range = entry->value_range;
                 }
                 decl.synthetic = false;
                 decl.enclosing = current;
                 out.modules.push_back(std::move(decl));
               });
  if (shape.has_orphans) {
    ModuleDecl synth;
    synth.uri = ModuleUri{doc, shape.synthetic_id};
    synth.id = shape.synthetic_id;
    SourcePosition begin{1, 0};
    SourcePosition end = end_position(tree.text);
    synth.begin_range = {begin, begin};
    synth.end_range = {end, end};
    synth.body_range = {begin, end};
    synth.range = {begin, end};
    synth.synthetic = true;
    synth.enclosing = std::nullopt;
    out.modules.push_back(std::move(synth));
  }
}

void spot_imports(const DocumentTree& tree, const DocumentUri& doc,
                  SpotterResult& out) {
  DocShape shape = compute_doc_shape(tree, doc);
  walk_modules(
      tree.root, doc, std::nullopt,
      [&](const Node& n, const std::optional<ModuleUri>& current) {
        if (n.kind != NodeKind::Command || n.name != "importmodule") return;
        if (n.arguments.empty()) {
          out.diagnostics.push_back(
              {ParseDiagnostic::Severity::Error, n.range,
               "\\importmodule without a target module argument",
               "malformed-import"});
          return;
        }
        const Node& arg = n.arguments.front();
        std::string raw(slice(tree.text, arg.interior));
        std::string name = trim_copy(raw);
        if (name.empty()) {
          out.diagnostics.push_back(
              {ParseDiagnostic::Severity::Error, n.range,
               "\\importmodule with an empty target module argument",
               "malformed-import"});
          return;
        }
        ImportDecl decl;
        auto importer = attach_module(current, doc, shape);
        decl.importer = importer ? *importer
                                 : ModuleUri{doc, shape.synthetic_id};
        decl.target_name = name;
        decl.range = n.range;
        decl.arg_range = trimmed_subrange(raw, arg.interior);
        if (!n.opt_blocks.empty()) {
          const OptBlock& block = n.opt_blocks.front();
          std::string path = trim_copy(block.raw);
          if (!path.empty()) {
            decl.target_path = path;
            SourcePosition inner = advance_position(block.range.start, "[");
            decl.path_range =
                trimmed_subrange(block.raw, {inner, advance_position(
                                                        inner, block.raw)});
          }
        }
        out.imports.push_back(std::move(decl));
      });
}

void spot_symdefs(const DocumentTree& tree, const DocumentUri& doc,
                  SpotterResult& out) {
  DocShape shape = compute_doc_shape(tree, doc);
  walk_modules(
      tree.root, doc, std::nullopt,
      [&](const Node& n, const std::optional<ModuleUri>& current) {
        if (n.kind != NodeKind::Command || n.name != "symdef") return;
        int arity = 0;
        try {
          arity = arity_of_symdef(n);
        } catch (const Error& e) {
          out.diagnostics.push_back({ParseDiagnostic::Severity::Error, n.range,
                                     e.what(), "malformed-symdef"});
          return;
        }
        const Node& name_arg = n.arguments.front();
        std::string raw(slice(tree.text, name_arg.interior));
        std::string name = trim_copy(raw);
        if (!is_valid_command_name(name) || !is_letters_name(name)) {
          out.diagnostics.push_back(
              {ParseDiagnostic::Severity::Error, n.range,
               "symbol name '" + name + "' is not a valid command name",
               "invalid-symdef-name"});
          return;
        }
        SymdefDecl decl;
        auto definer = attach_module(current, doc, shape);
        decl.defining_module =
            definer ? *definer : ModuleUri{doc, shape.synthetic_id};
        decl.name = name;
        decl.arity = arity;
        decl.presentation = n.arguments.size() > 1
                                ? std::string(slice(
                                      tree.text, n.arguments[1].interior))
                                : std::string();
        decl.range = n.range;
        decl.name_range = trimmed_subrange(raw, name_arg.interior);
        out.symdefs.push_back(std::move(decl));
      });
}

void spot_definitions(const DocumentTree& tree, const DocumentUri& doc,
                      SpotterResult& out) {
  DocShape shape = compute_doc_shape(tree, doc);
  walk_modules(
      tree.root, doc, std::nullopt,
      [&](const Node& n, const std::optional<ModuleUri>& current) {
        if (!is_definition_env(n)) return;
        DefinitionBlock block;
        auto owner = attach_module(current, doc, shape);
        block.in_module = owner ? *owner : ModuleUri{doc, shape.synthetic_id};
        if (const OptionEntry* id = n.find_option("id")) {
          std::string v = trim_copy(id->value);
          if (!v.empty()) block.id = v;
        }
        if (const OptionEntry* title = n.find_option("title")) {
          block.title = trim_copy(title->value);
        }
        if (const OptionEntry* fo = n.find_option("for")) {
          std::string v = fo->value;
          std::size_t start = 0;
          while (start <= v.size()) {
            std::size_t comma = v.find(',', start);
            std::string part = trim_copy(
                v.substr(start, comma == std::string::npos ? std::string::npos
                                                           : comma - start));
            if (!part.empty()) block.for_symbols.push_back(part);
            if (comma == std::string::npos) break;
            start = comma + 1;
          }
        }
        block.text_range = n.interior;
        block.text = flatten_snippet(tree.text, n.interior);
        block.range = n.range;
        block.header_range = n.begin_range;
        block.end_range = n.end_range;
        block.kind = n.name;
        out.definitions.push_back(std::move(block));
      });
}

void spot_sections(const DocumentTree& tree, const DocumentUri& doc,
                   SpotterResult& out) {
  walk_modules(
      tree.root, doc, std::nullopt,
      [&](const Node& n, const std::optional<ModuleUri>&) {
        if (n.kind != NodeKind::Command) return;
        std::string base = n.name;
        if (!base.empty() && base.back() == '*') base.pop_back();
        SectionMark::Level level;
        if (base == "section") {
          level = SectionMark::Level::Section;
        } else if (base == "subsection") {
          level = SectionMark::Level::Subsection;
        } else if (base == "subsubsection") {
          level = SectionMark::Level::Subsubsection;
        } else {
          return;
        }
        SectionMark mark;
        mark.document = doc;
        mark.level = level;
        mark.title = n.arguments.empty() ? std::string()
                                         : flatten(n.arguments.front());
        mark.range = n.range;
        out.sections.push_back(std::move(mark));
      });
}

const std::set<std::string>& structural_command_names() {
  static const std::set<std::string> kNames = {
      "begin",   "end",        "symdef",       "importmodule",
      "section", "subsection", "subsubsection"};
  return kNames;
}

void spot_uses(const DocumentTree& tree, const DocumentUri& doc,
               SpotterResult& out) {
  DocShape shape = compute_doc_shape(tree, doc);
  walk_modules(
      tree.root, doc, std::nullopt,
      [&](const Node& n, const std::optional<ModuleUri>& current) {
        if (n.kind != NodeKind::Command) return;
        std::string base = n.name;
        if (!base.empty() && base.back() == '*') base.pop_back();
        if (!is_letters_name(n.name)) return;
        if (structural_command_names().count(base) > 0) return;
        SymbolUse use;
        use.in_module = attach_module(current, doc, shape);
        use.name = n.name;
        use.range = n.name_range;
        out.uses.push_back(std::move(use));
      });
}

}  // namespace

std::string to_string(SectionMark::Level level) {
  switch (level) {
    case SectionMark::Level::Section:
      return "section";
    case SectionMark::Level::Subsection:
      return "subsection";
    case SectionMark::Level::Subsubsection:
      return "subsubsection";
  }
  return "section";
}

std::string synthetic_module_id(const DocumentTree& tree,
                                const DocumentUri& doc) {
  return compute_doc_shape(tree, doc).synthetic_id;
}

bool is_valid_symbol_name(std::string_view name) {
  return is_valid_command_name(name.size() > 1 && name.back() == '*'
                                   ? name.substr(0, name.size() - 1)
                                   : name) &&
         is_letters_name(name);
}

SpotterRegistry SpotterRegistry::builtins() {
  SpotterRegistry reg;
  reg.register_spotter("modules", spot_modules);
  reg.register_spotter("imports", spot_imports);
  reg.register_spotter("symdefs", spot_symdefs);
  reg.register_spotter("definitions", spot_definitions);
  reg.register_spotter("sections", spot_sections);
  reg.register_spotter("uses", spot_uses);
  return reg;
}

void SpotterRegistry::register_spotter(std::string name, SpotterFn fn) {
  if (has(name)) {
    throw Error("DuplicateSpotterName",
                "spotter '" + name + "' is already registered");
  }
  spotters_.emplace_back(std::move(name), std::move(fn));
}

bool SpotterRegistry::has(std::string_view name) const {
  for (const auto& [n, fn] : spotters_) {
    if (n == name) return true;
  }
  return false;
}

SpotterResult run_spotters(const DocumentTree& tree, const DocumentUri& doc,
                           const SpotterRegistry& registry) {
  SpotterResult result;
  for (const auto& [name, fn] : registry.spotters()) {
    try {
      fn(tree, doc, result);
    } catch (const std::exception& e) {
      result.diagnostics.push_back(
          {ParseDiagnostic::Severity::Error, tree.root.range,
           "spotter '" + name + "' failed: " + e.what(), "spotter-failure"});
    }
  }
  return result;
}

namespace {

DocumentUri resolve_target_document(const DocumentUri& importer_doc,
                                    const std::string& path) {
  std::string dir = importer_doc.directory();
  std::string joined = dir.empty() ? path : dir + "/" + path;
  std::string norm = DocumentUri(joined).value();
  if (norm.size() < 4 || norm.substr(norm.size() - 4) != ".tex") {
    bool has_stex =
        norm.size() >= 5 && norm.substr(norm.size() - 5) == ".stex";
    if (!has_stex) norm += ".tex";
  }
  return DocumentUri(norm);
}

bool doc_has_module(const SpotterResult& result, const std::string& id) {
  for (const auto& m : result.modules) {
    if (m.id == id) return true;
  }
  return false;
}

}  // namespace

void resolve_imports(std::map<DocumentUri, SpotterResult>& results,
                     std::vector<WorkspaceDiagnostic>* diagnostics,
                     const std::set<DocumentUri>* only) {
  // id -> documents declaring a module with that id (for pathless lookup)
  std::map<std::string, std::vector<DocumentUri>> by_id;
  for (const auto& [doc, result] : results) {
    std::set<std::string> ids;
    for (const auto& m : result.modules) ids.insert(m.id);
    for (const auto& id : ids) by_id[id].push_back(doc);
  }
  auto report = [&](const DocumentUri& doc, const SourceRange& range,
                    const std::string& message, const char* code) {
    if (diagnostics != nullptr) {
      diagnostics->push_back(
          {doc, {ParseDiagnostic::Severity::Error, range, message, code}});
    }
  };
  for (auto& [doc, result] : results) {
    if (only != nullptr && only->count(doc) == 0) continue;
    for (auto& imp : result.imports) {
      imp.resolved = std::nullopt;
      if (imp.target_path) {
        DocumentUri target = resolve_target_document(doc, *imp.target_path);
        auto it = results.find(target);
        if (it == results.end()) {
          report(doc, imp.range,
                 "import of '" + imp.target_name + "': document '" +
                     target.value() + "' not found in workspace",
                 "unresolved-import");
          continue;
        }
        if (!doc_has_module(it->second, imp.target_name)) {
          report(doc, imp.range,
                 "import of '" + imp.target_name + "': no such module in '" +
                     target.value() + "'",
                 "unresolved-import");
          continue;
        }
        imp.resolved = ModuleUri{target, imp.target_name};
        continue;
      }
      // Pathless: same document first, then unique module across workspace.
      if (doc_has_module(result, imp.target_name)) {
        imp.resolved = ModuleUri{doc, imp.target_name};
        continue;
      }
      auto it = by_id.find(imp.target_name);
      if (it == by_id.end() || it->second.empty()) {
        report(doc, imp.range,
               "import of '" + imp.target_name +
                   "': no module with this id in the workspace",
               "unresolved-import");
        continue;
      }
      if (it->second.size() > 1) {
        std::string docs;
        for (const auto& d : it->second) {
          if (!docs.empty()) docs += ", ";
          docs += d.value();
        }
        report(doc, imp.range,
               "import of '" + imp.target_name +
                   "' is ambiguous; candidates in: " + docs,
               "ambiguous-import");
        continue;
      }
      imp.resolved = ModuleUri{it->second.front(), imp.target_name};
    }
  }
}

void resolve_symbol_uses(std::map<DocumentUri, SpotterResult>& results,
                         const TheoryIndex& theory,
                         std::vector<WorkspaceDiagnostic>* diagnostics,
                         const std::set<DocumentUri>* only) {
  std::map<std::string, std::set<ModuleUri>> definers;
  for (const auto& [doc, result] : results) {
    for (const auto& s : result.symdefs) {
      definers[s.name].insert(s.defining_module);
    }
  }
  auto report = [&](const DocumentUri& doc, const SourceRange& range,
                    const std::string& message, const char* code) {
    if (diagnostics != nullptr) {
      diagnostics->push_back(
          {doc, {ParseDiagnostic::Severity::Warning, range, message, code}});
    }
  };
  for (auto& [doc, result] : results) {
    if (only != nullptr && only->count(doc) == 0) continue;
    for (auto& use : result.uses) {
      use.resolved_definer = std::nullopt;
      auto it = definers.find(use.name);
      use.in_universe = it != definers.end();
      if (!use.in_universe) continue;
      if (!use.in_module) {
        report(doc, use.range,
               "\\" + use.name + " used outside any module", "unresolved-use");
        continue;
      }
      std::vector<ModuleUri> candidates;
      for (const auto& definer : it->second) {
        if (theory.has(*use.in_module) && theory.has(definer) &&
            theory.reachable(*use.in_module, definer)) {
          candidates.push_back(definer);
        }
      }
      if (candidates.empty()) {
        report(doc, use.range,
               "\\" + use.name + " is not defined in any imported module",
               "unresolved-use");
        continue;
      }
      if (candidates.size() > 1) {
        std::string mods;
        for (const auto& m : candidates) {
          if (!mods.empty()) mods += ", ";
          mods += m.render();
        }
        report(doc, use.range,
               "\\" + use.name + " is ambiguous; defined in: " + mods,
               "ambiguous-use");
        continue;
      }
      use.resolved_definer = candidates.front();
    }
  }
}

}  // namespace stexide
