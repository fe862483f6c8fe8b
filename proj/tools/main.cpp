// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stexide/builtin_macros.hpp"
#include "stexide/config.hpp"
#include "stexide/diff.hpp"
#include "stexide/engine.hpp"
#include "stexide/services.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stexide;

namespace {

struct CliContext {
  fs::path project_dir;
  fs::path root;
  ProjectConfig config;
  bool json_output = false;
  std::optional<std::vector<BuiltinMacro>> extra_macros;
};

json position_to_json(SourcePosition p) {
  return json{{"line", p.line}, {"column", p.column}};
}

json range_to_json(const SourceRange& r) {
  return json{{"start", position_to_json(r.start)},
              {"end", position_to_json(r.end)}};
}

json edit_to_json(const TextEdit& e) {
  return json{{"document", e.target.value()},
              {"range", range_to_json(e.range)},
              {"replacement", e.replacement}};
}

std::string severity_name(ServiceDiagnostic::Severity s) {
  switch (s) {
    case ServiceDiagnostic::Severity::Info:
      return "info";
    case ServiceDiagnostic::Severity::Warning:
      return "warning";
    case ServiceDiagnostic::Severity::Error:
      return "error";
  }
  return "unknown";
}

json item_to_json(const CompletionItem& item) {
  json j{{"name", item.name},
         {"arity", item.arity},
         {"requiresImport", item.requires_import},
         {"insertText", item.insert_text}};
  if (item.defining_module) j["module"] = item.defining_module->render();
  if (!item.explanation.empty()) j["explanation"] = item.explanation;
  return j;
}

void print_item_text(const CompletionItem& item) {
  std::cout << item.name << " (arity " << item.arity << ")";
  if (item.defining_module) {
    std::cout << " from " << item.defining_module->render();
  }
  if (item.requires_import) std::cout << " [needs import]";
  std::cout << "\n";
}

// Applies a plan to a copy of the workspace text; returns new text per doc.
std::map<DocumentUri, std::string> plan_result_texts(const Engine& engine,
                                                     const RenamePlan& plan) {
  Workspace ws = engine.workspace();
  for (const auto& [doc, edits] : plan.edits) {
    if (!ws.contains(doc)) ws.add_document(doc, "");
  }
  for (const auto& [doc, edits] : plan.edits) {
    for (const auto& e : edits) ws.apply_text_edit(e);
  }
  std::map<DocumentUri, std::string> out;
  for (const auto& [doc, edits] : plan.edits) {
    out[doc] = ws.find(doc)->text;
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw Error("IoError", "cannot write " + path.string());
  }
  os << content;
}

// Shared handling for rename-symbol / rename-module / split plan commands.
int emit_plan(const CliContext& ctx, const Engine& engine,
              const RenamePlan& plan, bool apply) {
  auto new_texts = plan_result_texts(engine, plan);
  if (apply) {
    for (const auto& [doc, text] : new_texts) {
      write_file(ctx.root / doc.value(), text);
    }
  }
  if (ctx.json_output) {
    json edits = json::object();
    for (const auto& [doc, es] : plan.edits) {
      json arr = json::array();
      for (const auto& e : es) arr.push_back(edit_to_json(e));
      edits[doc.value()] = std::move(arr);
    }
    json out{{"edits", std::move(edits)},
             {"touched", plan.touched_count},
             {"applied", apply}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  if (plan.edits.empty()) {
    std::cout << "nothing to change\n";
    return 0;
  }
  if (apply) {
    std::size_t edit_count = 0;
    for (const auto& [doc, es] : plan.edits) edit_count += es.size();
    std::cout << "applied " << edit_count << " edit(s) in "
              << plan.edits.size() << " file(s)\n";
    return 0;
  }
  for (const auto& [doc, text] : new_texts) {
    const Document* old_doc = engine.workspace().find(doc);
    std::string old_text = old_doc ? old_doc->text : "";
    std::cout << unified_diff(old_text, text, "a/" + doc.value(),
                              "b/" + doc.value());
  }
  return 0;
}

Engine open_engine(const CliContext& ctx) {
  std::vector<std::string> warnings;
  Engine engine = Engine::open(ctx.root, ctx.config.source_globs, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  engine.analyze_all();
  return engine;
}

ModuleUri parse_module_uri(const std::string& arg) {
  auto uri = ModuleUri::parse(arg);
  if (!uri) {
    throw Error("UsageError",
                "expected MODULE_URI as <document>#<module-id>, got '" + arg +
                    "'");
  }
  return *uri;
}

std::vector<SourceRange> parse_ranges_spec(const std::string& spec) {
  std::vector<SourceRange> out;
  std::size_t pos = 0;
  auto parse_num = [&](const std::string& part, std::size_t& i) {
    std::size_t start = i;
    while (i < part.size() && std::isdigit(static_cast<unsigned char>(part[i])))
      ++i;
    if (i == start) {
      throw Error("UsageError", "bad range spec '" + spec + "'");
    }
    return static_cast<std::uint32_t>(std::stoul(part.substr(start, i - start)));
  };
  while (pos < spec.size()) {
    std::size_t comma = spec.find(',', pos);
    std::string part = spec.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t i = 0;
    SourceRange r;
    r.start.line = parse_num(part, i);
    if (i >= part.size() || part[i] != ':')
      throw Error("UsageError", "bad range spec '" + spec + "'");
    ++i;
    r.start.column = parse_num(part, i);
    if (i >= part.size() || part[i] != '-')
      throw Error("UsageError", "bad range spec '" + spec + "'");
    ++i;
    r.end.line = parse_num(part, i);
    if (i >= part.size() || part[i] != ':')
      throw Error("UsageError", "bad range spec '" + spec + "'");
    ++i;
    r.end.column = parse_num(part, i);
    if (i != part.size())
      throw Error("UsageError", "bad range spec '" + spec + "'");
    out.push_back(r);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void print_outline_text(const std::vector<OutlineNode>& nodes, int depth) {
  for (const auto& n : nodes) {
    std::cout << std::string(static_cast<std::size_t>(depth) * 2, ' ')
              << n.kind << " " << n.label << " [" << to_string(n.range) << "]";
    if (n.target) std::cout << " -> " << n.target->render();
    std::cout << "\n";
    print_outline_text(n.children, depth + 1);
  }
}

json outline_to_json(const std::vector<OutlineNode>& nodes) {
  json arr = json::array();
  for (const auto& n : nodes) {
    json j{{"kind", n.kind},
           {"label", n.label},
           {"range", range_to_json(n.range)},
           {"children", outline_to_json(n.children)}};
    if (n.target) j["target"] = n.target->render();
    arr.push_back(std::move(j));
  }
  return arr;
}

json lint_diag_to_json(const ServiceDiagnostic& d) {
  json fixes = json::array();
  for (const auto& fix : d.fixes) {
    json group = json::array();
    for (const auto& e : fix) group.push_back(edit_to_json(e));
    fixes.push_back(std::move(group));
  }
  return json{{"document", d.document.value()},
              {"range", range_to_json(d.range)},
              {"severity", severity_name(d.severity)},
              {"code", d.code},
              {"message", d.message},
              {"fixes", std::move(fixes)}};
}

std::vector<ServiceDiagnostic> lint_all(const Engine& engine,
                                        const std::optional<ModuleUri>& only) {
  std::vector<ServiceDiagnostic> diags;
  std::vector<ModuleUri> modules;
  if (only) {
    modules.push_back(*only);
  } else {
    modules = engine.all_modules();
  }
  for (const auto& m : modules) {
    for (auto& d : minimize_imports(engine, m)) diags.push_back(std::move(d));
  }
  std::sort(diags.begin(), diags.end(),
            [](const ServiceDiagnostic& a, const ServiceDiagnostic& b) {
              if (a.document != b.document)
                return a.document.value() < b.document.value();
              if (a.range.start != b.range.start)
                return a.range.start < b.range.start;
              return a.code < b.code;
            });
  return diags;
}

int cmd_index(const CliContext& ctx) {
  Engine engine = open_engine(ctx);
  std::size_t modules = 0, imports = 0, resolved_imports = 0, symdefs = 0,
              uses = 0, resolved_uses = 0, definitions = 0, sections = 0;
  for (const auto& [doc, result] : engine.results()) {
    modules += result.modules.size();
    imports += result.imports.size();
    symdefs += result.symdefs.size();
    uses += result.uses.size();
    definitions += result.definitions.size();
    sections += result.sections.size();
    for (const auto& i : result.imports) resolved_imports += i.resolved ? 1 : 0;
    for (const auto& u : result.uses) resolved_uses += u.resolved_definer ? 1 : 0;
  }
  std::vector<WorkspaceDiagnostic> diags = engine.resolution_diagnostics();
  std::size_t parse_diag_count = 0;
  for (const auto& [doc, result] : engine.results()) {
    parse_diag_count += engine.parse_diagnostics(doc).size();
  }
  if (ctx.json_output) {
    json jd = json::array();
    for (const auto& d : diags) {
      jd.push_back(json{{"document", d.document.value()},
                        {"range", range_to_json(d.diagnostic.range)},
                        {"code", d.diagnostic.code},
                        {"message", d.diagnostic.message}});
    }
    json out{{"documents", engine.results().size()},
             {"modules", modules},
             {"imports", imports},
             {"resolvedImports", resolved_imports},
             {"symdefs", symdefs},
             {"uses", uses},
             {"resolvedUses", resolved_uses},
             {"definitions", definitions},
             {"sections", sections},
             {"parseDiagnostics", parse_diag_count},
             {"diagnostics", std::move(jd)}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "documents: " << engine.results().size() << "\n"
            << "modules: " << modules << "\n"
            << "imports: " << imports << " (" << resolved_imports
            << " resolved)\n"
            << "symdefs: " << symdefs << "\n"
            << "uses: " << uses << " (" << resolved_uses << " resolved)\n"
            << "definitions: " << definitions << "\n"
            << "sections: " << sections << "\n"
            << "parse diagnostics: " << parse_diag_count << "\n";
  for (const auto& d : diags) {
    std::cout << d.document.value() << ":" << to_string(d.diagnostic.range)
              << ": " << d.diagnostic.code << ": " << d.diagnostic.message
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stexide: semantic LaTeX workspace tools"};
  app.require_subcommand(1);

  std::string project = ".";
  std::string format;
  app.add_option("--project", project, "Project directory (default: .)");
  app.add_option("--format", format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* c_index = app.add_subcommand("index", "Analyze the workspace and print index statistics");

  std::string outline_file;
  auto* c_outline = app.add_subcommand("outline", "Print the structure outline of a document");
  c_outline->add_option("FILE", outline_file, "Document path relative to the project root")->required();

  std::string comp_file, comp_prefix;
  std::uint32_t comp_line = 1, comp_col = 0;
  auto* c_complete = app.add_subcommand("complete", "List completions at a position");
  c_complete->add_option("FILE", comp_file)->required();
  c_complete->add_option("LINE", comp_line, "1-based line")->required();
  c_complete->add_option("COL", comp_col, "0-based column")->required();
  c_complete->add_option("PREFIX", comp_prefix, "Typed prefix filter");

  std::string retr_prefix;
  auto* c_retrieve = app.add_subcommand("retrieve", "List all workspace symbols matching a prefix");
  c_retrieve->add_option("PREFIX", retr_prefix, "Name prefix (may be empty)");

  std::vector<std::string> search_terms;
  auto* c_search = app.add_subcommand("search", "Concept search over definition blocks");
  c_search->add_option("TERM", search_terms, "Search terms")->required();

  std::string rs_module, rs_old, rs_new;
  bool rs_apply = false;
  auto* c_rename_symbol = app.add_subcommand("rename-symbol", "Rename a symbol across the workspace");
  c_rename_symbol->add_option("MODULE_URI", rs_module)->required();
  c_rename_symbol->add_option("OLD", rs_old)->required();
  c_rename_symbol->add_option("NEW", rs_new)->required();
  c_rename_symbol->add_flag("--apply", rs_apply, "Write changes to disk");

  std::string rm_module, rm_new_id;
  bool rm_apply = false;
  auto* c_rename_module = app.add_subcommand("rename-module", "Rename a module id across the workspace");
  c_rename_module->add_option("MODULE_URI", rm_module)->required();
  c_rename_module->add_option("NEWID", rm_new_id)->required();
  c_rename_module->add_flag("--apply", rm_apply, "Write changes to disk");

  std::string lint_module;
  bool lint_apply_safe = false;
  auto* c_lint = app.add_subcommand("lint-imports", "Flag unused/redundant/replaceable imports");
  c_lint->add_option("MODULE_URI", lint_module, "Restrict to one module");
  c_lint->add_flag("--apply-safe", lint_apply_safe, "Apply all verified fixes");

  std::string sp_module, sp_ranges, sp_new_id, sp_new_file;
  bool sp_apply = false;
  auto* c_split = app.add_subcommand("split", "Move structures into a new module");
  c_split->add_option("MODULE_URI", sp_module)->required();
  c_split->add_option("--ranges", sp_ranges, "Comma-separated ranges line:col-line:col")->required();
  c_split->add_option("--new-id", sp_new_id, "Id of the new module")->required();
  c_split->add_option("--new-file", sp_new_file, "Path of the new document")->required();
  c_split->add_flag("--apply", sp_apply, "Write changes to disk");

  std::string graph_out;
  auto* c_graph = app.add_subcommand("graph", "Export the theory graph as DOT");
  c_graph->add_option("-o,--output", graph_out, "Write to a file instead of stdout");

  std::string omdoc_module, omdoc_out;
  auto* c_omdoc = app.add_subcommand("omdoc", "Export a module as an OMDoc skeleton");
  c_omdoc->add_option("MODULE_URI", omdoc_module)->required();
  c_omdoc->add_option("-o,--output", omdoc_out, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CliContext ctx;
  ctx.project_dir = project;
  bool json_requested = format == "json";
  try {
    ctx.config = load_config(ctx.project_dir);
    for (const auto& w : ctx.config.warnings) {
      std::cerr << "warning: " << w << "\n";
    }
    ctx.root = ctx.project_dir / ctx.config.root;
    ctx.json_output =
        format.empty() ? ctx.config.output_format == "json" : json_requested;
    if (ctx.config.builtin_macros_file) {
      ctx.extra_macros =
          load_macro_file(ctx.project_dir / *ctx.config.builtin_macros_file);
    }
  } catch (const Error& e) {
    if (json_requested) {
      std::cout << json{{"error", {{"code", e.code()}, {"message", e.what()}}}}
                       .dump(2)
                << "\n";
    } else {
      std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    }
    return 2;
  }

  try {
    if (*c_index) return cmd_index(ctx);

    Engine engine = open_engine(ctx);

    if (*c_outline) {
      DocumentUri doc(outline_file);
      std::vector<OutlineNode> nodes = outline(engine, doc);
      if (ctx.json_output) {
        std::cout << json{{"outline", outline_to_json(nodes)}}.dump(2) << "\n";
      } else {
        print_outline_text(nodes, 0);
      }
      return 0;
    }
    if (*c_complete) {
      DocumentUri doc(comp_file);
      auto items = complete_at(
          engine, doc, {comp_line, comp_col}, comp_prefix,
          ctx.extra_macros ? &*ctx.extra_macros : nullptr);
      if (ctx.json_output) {
        json arr = json::array();
        for (const auto& it : items) arr.push_back(item_to_json(it));
        std::cout << json{{"items", std::move(arr)}}.dump(2) << "\n";
      } else {
        for (const auto& it : items) print_item_text(it);
      }
      return 0;
    }
    if (*c_retrieve) {
      auto items = retrieve_all(engine, std::nullopt, retr_prefix);
      if (ctx.json_output) {
        json arr = json::array();
        for (const auto& it : items) arr.push_back(item_to_json(it));
        std::cout << json{{"items", std::move(arr)}}.dump(2) << "\n";
      } else {
        for (const auto& it : items) print_item_text(it);
      }
      return 0;
    }
    if (*c_search) {
      auto hits = concept_search(engine, search_terms);
      if (ctx.json_output) {
        json arr = json::array();
        for (const auto& h : hits) {
          json ev = json::array();
          for (const auto& e : h.evidence) {
            ev.push_back(json{{"document", e.block.in_module.document.value()},
                              {"range", range_to_json(e.block.range)},
                              {"matchedTerms", e.matched_terms}});
          }
          arr.push_back(json{{"name", h.symbol.name},
                             {"module", h.symbol.defining_module.render()},
                             {"score", h.score},
                             {"evidence", std::move(ev)}});
        }
        std::cout << json{{"hits", std::move(arr)}}.dump(2) << "\n";
      } else {
        for (const auto& h : hits) {
          std::cout << h.score << " " << h.symbol.name << " from "
                    << h.symbol.defining_module.render() << "\n";
          for (const auto& e : h.evidence) {
            std::cout << "  evidence: " << e.block.in_module.document.value()
                      << ":" << to_string(e.block.range) << "\n";
          }
        }
      }
      return 0;
    }
    if (*c_rename_symbol) {
      RenamePlan plan = rename_symbol(engine, parse_module_uri(rs_module),
                                      rs_old, rs_new);
      return emit_plan(ctx, engine, plan, rs_apply);
    }
    if (*c_rename_module) {
      RenamePlan plan =
          rename_module(engine, parse_module_uri(rm_module), rm_new_id);
      return emit_plan(ctx, engine, plan, rm_apply);
    }
    if (*c_lint) {
      std::optional<ModuleUri> only;
      if (!lint_module.empty()) only = parse_module_uri(lint_module);
      std::vector<ServiceDiagnostic> diags = lint_all(engine, only);
      if (lint_apply_safe) {
        // Apply one verified fix at a time, re-linting in between, until a
        // fixpoint: fixes can invalidate each other's ranges.
        int guard = 0;
        std::vector<ServiceDiagnostic> current = diags;
        while (guard++ < 100) {
          const std::vector<TextEdit>* fix = nullptr;
          for (const auto& d : current) {
            if (!d.fixes.empty()) {
              fix = &d.fixes.front();
              break;
            }
          }
          if (fix == nullptr) break;
          RenamePlan plan;
          for (const auto& e : *fix) plan.edits[e.target].push_back(e);
          auto texts = plan_result_texts(engine, plan);
          for (const auto& [doc, text] : texts) {
            write_file(ctx.root / doc.value(), text);
          }
          engine = open_engine(ctx);
          current = lint_all(engine, only);
        }
      }
      if (ctx.json_output) {
        json arr = json::array();
        for (const auto& d : diags) arr.push_back(lint_diag_to_json(d));
        std::cout << json{{"diagnostics", std::move(arr)},
                          {"applied", lint_apply_safe}}
                         .dump(2)
                  << "\n";
      } else {
        for (const auto& d : diags) {
          std::cout << d.document.value() << ":" << to_string(d.range) << ": "
                    << severity_name(d.severity) << " " << d.code << ": "
                    << d.message << "\n";
          // After --apply-safe the fixes are already on disk; a diff
          // preview against the updated engine would be stale.
          if (lint_apply_safe) continue;
          for (const auto& fix : d.fixes) {
            RenamePlan plan;
            for (const auto& e : fix) plan.edits[e.target].push_back(e);
            for (const auto& [doc, text] : plan_result_texts(engine, plan)) {
              const Document* old_doc = engine.workspace().find(doc);
              std::cout << unified_diff(old_doc ? old_doc->text : "", text,
                                        "a/" + doc.value(),
                                        "b/" + doc.value());
            }
          }
        }
      }
      return diags.empty() ? 0 : 1;
    }
    if (*c_split) {
      RenamePlan plan =
          split_module(engine, parse_module_uri(sp_module),
                       parse_ranges_spec(sp_ranges), sp_new_id,
                       DocumentUri(sp_new_file));
      return emit_plan(ctx, engine, plan, sp_apply);
    }
    if (*c_graph) {
      std::string dot = export_theory_graph(engine);
      if (!graph_out.empty()) {
        write_file(graph_out, dot);
        if (!ctx.json_output) std::cout << "wrote " << graph_out << "\n";
        else std::cout << json{{"written", graph_out}}.dump(2) << "\n";
      } else if (ctx.json_output) {
        std::cout << json{{"dot", dot}}.dump(2) << "\n";
      } else {
        std::cout << dot;
      }
      return 0;
    }
    if (*c_omdoc) {
      std::string xml =
          export_omdoc_skeleton(engine, parse_module_uri(omdoc_module));
      if (!omdoc_out.empty()) {
        write_file(omdoc_out, xml);
        if (!ctx.json_output) std::cout << "wrote " << omdoc_out << "\n";
        else std::cout << json{{"written", omdoc_out}}.dump(2) << "\n";
      } else if (ctx.json_output) {
        std::cout << json{{"xml", xml}}.dump(2) << "\n";
      } else {
        std::cout << xml;
      }
      return 0;
    }
  } catch (const Error& e) {
    if (ctx.json_output) {
      std::cout << json{{"error", {{"code", e.code()}, {"message", e.what()}}}}
                       .dump(2)
                << "\n";
    } else {
      std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    }
    return e.code() == "UsageError" ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
