// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end tests for the stexide command-line tool. Every test launches
// the real binary in a subprocess and checks exit code, stdout, and stderr.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using stexide::testutil::copy_tree;
using stexide::testutil::fixture_dir;
using stexide::testutil::golden_dir;
using stexide::testutil::read_file;
using stexide::testutil::write_file;
using stexide::testutil::TempDir;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the CLI with the given arguments, capturing both output streams.
// Global options (--project, --format) must precede the subcommand.
CmdResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string tag =
      std::to_string(::getpid()) + "_" + std::to_string(counter++);
  fs::path out_path = fs::temp_directory_path() / ("stexide_out_" + tag);
  fs::path err_path = fs::temp_directory_path() / ("stexide_err_" + tag);
  std::string cmd = std::string(STEXIDE_CLI_PATH) + " " + args + " >'" +
                    out_path.string() + "' 2>'" + err_path.string() + "'";
  int raw = std::system(cmd.c_str());
  CmdResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  fs::remove(out_path);
  fs::remove(err_path);
  return result;
}

std::string project_arg(const fs::path& dir) {
  return "--project '" + dir.string() + "'";
}

std::string corpus_arg() { return project_arg(fixture_dir() / "corpus"); }

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::size_t line_count(const std::string& text) {
  return count_of(text, "\n");
}

}  // namespace

TEST(CliIndex, TextStatistics) {
  CmdResult r = run_cli(corpus_arg() + " index");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("documents: 5\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("modules: 6\n"), std::string::npos);
  EXPECT_NE(r.out.find("imports: 4 (4 resolved)\n"), std::string::npos);
  EXPECT_NE(r.out.find("symdefs: 9\n"), std::string::npos);
  EXPECT_NE(r.out.find("definitions: 5\n"), std::string::npos);
  EXPECT_NE(r.out.find("sections: 3\n"), std::string::npos);
  EXPECT_NE(r.out.find("parse diagnostics: 0\n"), std::string::npos);
  // The strings fixture deliberately uses \defeq without importing base.
  EXPECT_NE(r.out.find("unresolved-use"), std::string::npos);
  EXPECT_NE(r.out.find("strings/strings.tex:"), std::string::npos);
}

TEST(CliIndex, JsonStatistics) {
  CmdResult r = run_cli("--format json " + corpus_arg() + " index");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["documents"].get<int>(), 5);
  EXPECT_EQ(j["modules"].get<int>(), 6);
  EXPECT_EQ(j["imports"].get<int>(), 4);
  EXPECT_EQ(j["resolvedImports"].get<int>(), 4);
  EXPECT_EQ(j["symdefs"].get<int>(), 9);
  EXPECT_EQ(j["parseDiagnostics"].get<int>(), 0);
  ASSERT_EQ(j["diagnostics"].size(), 1u);
  EXPECT_EQ(j["diagnostics"][0]["code"].get<std::string>(), "unresolved-use");
  EXPECT_EQ(j["diagnostics"][0]["document"].get<std::string>(),
            "strings/strings.tex");
}

TEST(CliOutline, PrintsDocumentTree) {
  CmdResult r = run_cli(corpus_arg() + " outline course/main.tex");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("module reals"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("symdef positiveReals"), std::string::npos);
  EXPECT_NE(r.out.find("import sets"), std::string::npos);
  EXPECT_NE(r.out.find("-> background/sets.tex#sets"), std::string::npos);
}

TEST(CliComplete, RespectsImportPosition) {
  // Before the import of sets has been seen, inset is not offered.
  CmdResult before = run_cli(corpus_arg() + " complete course/main.tex 1 24 in");
  ASSERT_EQ(before.exit_code, 0) << before.err;
  EXPECT_EQ(before.out.find("inset"), std::string::npos) << before.out;

  // Right after the import line it is.
  CmdResult after = run_cli(corpus_arg() + " complete course/main.tex 2 41 in");
  ASSERT_EQ(after.exit_code, 0) << after.err;
  EXPECT_NE(after.out.find("inset (arity 2) from background/sets.tex#sets"),
            std::string::npos)
      << after.out;
}

TEST(CliComplete, JsonItems) {
  CmdResult r = run_cli("--format json " + corpus_arg() +
                        " complete course/main.tex 2 41 inset");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = json::parse(r.out);
  ASSERT_GE(j["items"].size(), 1u);
  EXPECT_EQ(j["items"][0]["name"].get<std::string>(), "inset");
  EXPECT_EQ(j["items"][0]["module"].get<std::string>(),
            "background/sets.tex#sets");
  EXPECT_FALSE(j["items"][0]["requiresImport"].get<bool>());
}

TEST(CliRetrieve, PrefixFiltersAcrossWorkspace) {
  CmdResult r = run_cli(corpus_arg() + " retrieve s");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(line_count(r.out), 3u) << r.out;  // sconcat, setst, sq
  EXPECT_NE(r.out.find("sconcat"), std::string::npos);
  EXPECT_NE(r.out.find("setst"), std::string::npos);
  EXPECT_NE(r.out.find("sq (arity 1)"), std::string::npos);
  // Without an anchoring context nothing claims to need an import.
  EXPECT_EQ(r.out.find("[needs import]"), std::string::npos);
}

TEST(CliSearch, JsonHitsRankBestMatchFirst) {
  CmdResult r =
      run_cli("--format json " + corpus_arg() + " search set element");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = json::parse(r.out);
  ASSERT_GE(j["hits"].size(), 1u);
  EXPECT_EQ(j["hits"][0]["name"].get<std::string>(), "inset");
  EXPECT_EQ(j["hits"][0]["module"].get<std::string>(),
            "background/sets.tex#sets");
  EXPECT_DOUBLE_EQ(j["hits"][0]["score"].get<double>(), 14.0);
  EXPECT_EQ(j["hits"][0]["evidence"].size(), 2u);
}

TEST(CliRenameSymbol, PreviewShowsDiffs) {
  CmdResult r = run_cli(corpus_arg() +
                        " rename-symbol 'background/sets.tex#sets'"
                        " inset memberOf");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("--- a/background/sets.tex"), std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("+++ b/background/sets.tex"), std::string::npos);
  EXPECT_NE(r.out.find("--- a/course/main.tex"), std::string::npos);
  EXPECT_NE(r.out.find("--- a/course/extras.tex"), std::string::npos);
  EXPECT_NE(r.out.find("\\memberOf"), std::string::npos);
  // A preview must not touch the fixture on disk.
  EXPECT_EQ(read_file(fixture_dir() / "corpus/background/sets.tex")
                .find("memberOf"),
            std::string::npos);
}

TEST(CliRenameSymbol, ApplyRewritesFilesOnDisk) {
  TempDir tmp;
  copy_tree(fixture_dir() / "corpus", tmp.path);
  CmdResult r = run_cli(project_arg(tmp.path) +
                        " rename-symbol 'background/sets.tex#sets'"
                        " inset memberOf --apply");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("applied 4 edit(s) in 3 file(s)"), std::string::npos)
      << r.out;
  EXPECT_NE(read_file(tmp.path / "background/sets.tex")
                .find("\\symdef{memberOf}"),
            std::string::npos);
  EXPECT_NE(read_file(tmp.path / "course/main.tex").find("\\memberOf{x}"),
            std::string::npos);

  // The workspace still analyzes cleanly afterwards.
  CmdResult idx = run_cli(project_arg(tmp.path) + " index");
  EXPECT_EQ(idx.exit_code, 0);
  EXPECT_NE(idx.out.find("modules: 6\n"), std::string::npos);
  EXPECT_NE(idx.out.find("imports: 4 (4 resolved)\n"), std::string::npos);
  EXPECT_EQ(count_of(idx.out, "unresolved-use"), 1u) << idx.out;
}

TEST(CliRenameModule, ApplyUpdatesImports) {
  TempDir tmp;
  copy_tree(fixture_dir() / "corpus", tmp.path);
  CmdResult r = run_cli(project_arg(tmp.path) +
                        " rename-module 'background/sets.tex#sets'"
                        " setcore --apply");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(read_file(tmp.path / "background/sets.tex").find("[id=setcore]"),
            std::string::npos);
  EXPECT_NE(read_file(tmp.path / "course/main.tex").find("{setcore}"),
            std::string::npos);

  CmdResult idx = run_cli(project_arg(tmp.path) + " index");
  EXPECT_EQ(idx.exit_code, 0);
  EXPECT_NE(idx.out.find("modules: 6\n"), std::string::npos);
  EXPECT_NE(idx.out.find("imports: 4 (4 resolved)\n"), std::string::npos);
}

TEST(CliLintImports, FindsRedundantImportAndAppliesFix) {
  TempDir tmp;
  copy_tree(fixture_dir() / "lint", tmp.path);

  CmdResult first = run_cli(project_arg(tmp.path) + " lint-imports");
  EXPECT_EQ(first.exit_code, 1);
  EXPECT_NE(first.out.find("redundant-import"), std::string::npos)
      << first.out;
  // The preview includes a diff of the suggested fix.
  EXPECT_NE(first.out.find("--- a/c.tex"), std::string::npos);

  CmdResult apply = run_cli(project_arg(tmp.path) +
                            " lint-imports --apply-safe");
  EXPECT_EQ(apply.exit_code, 1);  // reports the findings it just fixed
  EXPECT_NE(apply.out.find("redundant-import"), std::string::npos);
  EXPECT_EQ(apply.out.find("--- a/"), std::string::npos) << apply.out;
  EXPECT_EQ(read_file(tmp.path / "c.tex").find("\\importmodule[a]{A}"),
            std::string::npos);

  CmdResult clean = run_cli(project_arg(tmp.path) + " lint-imports");
  EXPECT_EQ(clean.exit_code, 0);
  EXPECT_TRUE(clean.out.empty()) << clean.out;
}

TEST(CliLintImports, ScopesToOneModule) {
  std::string proj = project_arg(fixture_dir() / "lint");
  CmdResult clean = run_cli(proj + " lint-imports 'a.tex#A'");
  EXPECT_EQ(clean.exit_code, 0);
  EXPECT_TRUE(clean.out.empty()) << clean.out;

  CmdResult dirty = run_cli(proj + " lint-imports 'c.tex#C'");
  EXPECT_EQ(dirty.exit_code, 1);
  EXPECT_NE(dirty.out.find("redundant-import"), std::string::npos);
}

TEST(CliLintImports, JsonListsDiagnosticsWithFixes) {
  CmdResult r = run_cli("--format json " +
                        project_arg(fixture_dir() / "lint") + " lint-imports");
  EXPECT_EQ(r.exit_code, 1);
  json j = json::parse(r.out);
  EXPECT_FALSE(j["applied"].get<bool>());
  ASSERT_EQ(j["diagnostics"].size(), 1u);
  EXPECT_EQ(j["diagnostics"][0]["code"].get<std::string>(),
            "redundant-import");
  EXPECT_EQ(j["diagnostics"][0]["document"].get<std::string>(), "c.tex");
  EXPECT_EQ(j["diagnostics"][0]["fixes"].size(), 1u);
}

TEST(CliSplit, ApplyCreatesNewModuleFile) {
  TempDir tmp;
  copy_tree(fixture_dir() / "corpus", tmp.path);
  CmdResult r = run_cli(project_arg(tmp.path) +
                        " split 'course/main.tex#reals'"
                        " --ranges 5:2-5:34,6:2-8:18"
                        " --new-id posreals --new-file course/posreals.tex"
                        " --apply");
  ASSERT_EQ(r.exit_code, 0) << r.err << r.out;

  std::string created = read_file(tmp.path / "course/posreals.tex");
  EXPECT_NE(created.find("\\begin{module}[id=posreals]"), std::string::npos)
      << created;
  EXPECT_NE(created.find("\\importmodule[main]{reals}"), std::string::npos);
  EXPECT_NE(created.find("\\symdef{positiveReals}"), std::string::npos);

  CmdResult idx = run_cli(project_arg(tmp.path) + " index");
  EXPECT_EQ(idx.exit_code, 0);
  EXPECT_NE(idx.out.find("documents: 6\n"), std::string::npos);
  EXPECT_NE(idx.out.find("modules: 7\n"), std::string::npos);
  // Still only the intentional unresolved use in the strings fixture.
  EXPECT_EQ(count_of(idx.out, "unresolved-use"), 1u) << idx.out;
}

TEST(CliGraph, EmptyProjectPrintsEmptyDigraph) {
  TempDir tmp;
  CmdResult r = run_cli(project_arg(tmp.path) + " graph");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, "digraph theories {\n}\n");
}

TEST(CliGraph, WritesDotFile) {
  TempDir tmp;
  fs::path dot_path = tmp.path / "g.dot";
  CmdResult r =
      run_cli(corpus_arg() + " graph -o '" + dot_path.string() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, "wrote " + dot_path.string() + "\n");
  std::string dot = read_file(dot_path);
  EXPECT_EQ(dot.rfind("digraph theories {", 0), 0u) << dot;
  EXPECT_NE(dot.find("\"sets\" -> \"base\";"), std::string::npos);
  EXPECT_NE(dot.find("\"reals\" -> \"sets\";"), std::string::npos);
}

TEST(CliOmdoc, MatchesGoldenExport) {
  CmdResult r = run_cli(corpus_arg() + " omdoc 'course/main.tex#reals'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, read_file(golden_dir() / "reals.omdoc"));
}

TEST(CliOmdoc, JsonWriteReportsPath) {
  TempDir tmp;
  fs::path xml_path = tmp.path / "out" / "reals.omdoc";
  CmdResult r = run_cli("--format json " + corpus_arg() +
                        " omdoc 'course/main.tex#reals' -o '" +
                        xml_path.string() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["written"].get<std::string>(), xml_path.string());
  EXPECT_EQ(read_file(xml_path), read_file(golden_dir() / "reals.omdoc"));
}

TEST(CliConfig, ProjectConfigRestrictsGlobsAndWarns) {
  CmdResult r =
      run_cli(project_arg(fixture_dir() / "configproj") + " index");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("documents: 1\n"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("mystery_key"), std::string::npos) << r.err;
}

TEST(CliConfig, MalformedConfigExitsTwo) {
  TempDir tmp;
  write_file(tmp.path / "stexide.toml", "output_format = \"yaml\"\n");
  CmdResult r = run_cli(project_arg(tmp.path) + " index");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("MalformedConfig"), std::string::npos) << r.err;

  CmdResult rj = run_cli("--format json " + project_arg(tmp.path) + " index");
  EXPECT_EQ(rj.exit_code, 2);
  json j = json::parse(rj.out);
  EXPECT_EQ(j["error"]["code"].get<std::string>(), "MalformedConfig");
}

TEST(CliErrors, BadModuleUriIsUsageError) {
  CmdResult r = run_cli(corpus_arg() + " omdoc not-a-module-uri");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("UsageError"), std::string::npos) << r.err;
}

TEST(CliErrors, UnknownModuleExitsThree) {
  CmdResult r = run_cli(corpus_arg() + " omdoc 'course/main.tex#nope'");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.err.find("UnknownModule"), std::string::npos) << r.err;

  CmdResult rj = run_cli("--format json " + corpus_arg() +
                         " omdoc 'course/main.tex#nope'");
  EXPECT_EQ(rj.exit_code, 3);
  json j = json::parse(rj.out);
  EXPECT_EQ(j["error"]["code"].get<std::string>(), "UnknownModule");
}

TEST(CliErrors, UnknownSubcommandExitsTwo) {
  EXPECT_EQ(run_cli("bogus-subcommand").exit_code, 2);
  EXPECT_EQ(run_cli("").exit_code, 2);
  EXPECT_EQ(run_cli("--help").exit_code, 0);
}
