// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/config.hpp"

#include <gtest/gtest.h>

#include <set>

#include "stexide/builtin_macros.hpp"
#include "stexide/diff.hpp"
#include "stexide/source_model.hpp"
#include "test_util.hpp"

namespace stexide {
namespace {

using testutil::fixture_dir;
using testutil::TempDir;
using testutil::write_file;

TEST(Config, DefaultsWhenFileIsMissing) {
  TempDir dir;
  ProjectConfig cfg = load_config(dir.path);
  EXPECT_EQ(cfg.root, dir.path);
  EXPECT_EQ(cfg.source_globs, (std::vector<std::string>{"**/*.tex"}));
  EXPECT_FALSE(cfg.builtin_macros_file.has_value());
  EXPECT_EQ(cfg.output_format, "text");
  EXPECT_TRUE(cfg.warnings.empty());
}

TEST(Config, ParsesEveryKey) {
  TempDir dir;
  write_file(dir.path / "stexide.toml",
             "# a comment line\n"
             "root = \"src\"\n"
             "source_globs = [\"a/**/*.tex\", \"b/*.tex\"]\n"
             "builtin_macros_file = \"macros.txt\"  # trailing comment\n"
             "output_format = \"json\"\n");
  ProjectConfig cfg = load_config(dir.path);
  EXPECT_EQ(cfg.root, dir.path / "src");
  EXPECT_EQ(cfg.source_globs,
            (std::vector<std::string>{"a/**/*.tex", "b/*.tex"}));
  ASSERT_TRUE(cfg.builtin_macros_file.has_value());
  EXPECT_EQ(*cfg.builtin_macros_file, dir.path / "macros.txt");
  EXPECT_EQ(cfg.output_format, "json");
  EXPECT_TRUE(cfg.warnings.empty());
}

TEST(Config, AcceptsCamelCaseSpellings) {
  TempDir dir;
  write_file(dir.path / "stexide.toml",
             "sourceGlobs = [\"x/*.tex\"]\n"
             "builtinMacrosFile = \"m.txt\"\n"
             "outputFormat = \"json\"\n");
  ProjectConfig cfg = load_config(dir.path);
  EXPECT_EQ(cfg.source_globs, (std::vector<std::string>{"x/*.tex"}));
  EXPECT_TRUE(cfg.builtin_macros_file.has_value());
  EXPECT_EQ(cfg.output_format, "json");
}

TEST(Config, WarnsOnUnknownKeysAndSections) {
  TempDir dir;
  write_file(dir.path / "stexide.toml",
             "[tool.extra]\n"
             "mystery = \"x\"\n"
             "output_format = \"text\"\n");
  ProjectConfig cfg = load_config(dir.path);
  ASSERT_EQ(cfg.warnings.size(), 2u);
  EXPECT_NE(cfg.warnings[0].find("section"), std::string::npos);
  EXPECT_NE(cfg.warnings[1].find("mystery"), std::string::npos);
  EXPECT_EQ(cfg.output_format, "text");  // parsing continued
}

TEST(Config, MalformedInputsCarryLineNumbers) {
  TempDir dir;
  write_file(dir.path / "stexide.toml", "root = \".\"\nnot a kv pair\n");
  try {
    load_config(dir.path);
    FAIL() << "expected MalformedConfig";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "MalformedConfig");
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }

  write_file(dir.path / "stexide.toml", "output_format = \"yaml\"\n");
  EXPECT_THROW(load_config(dir.path), Error);

  write_file(dir.path / "stexide.toml", "root = \"unterminated\n");
  EXPECT_THROW(load_config(dir.path), Error);

  write_file(dir.path / "stexide.toml", "source_globs = \"not an array\"\n");
  EXPECT_THROW(load_config(dir.path), Error);

  write_file(dir.path / "stexide.toml", "root = \n");
  EXPECT_THROW(load_config(dir.path), Error);
}

TEST(Config, FixtureProjectRestrictsGlobs) {
  ProjectConfig cfg = load_config(fixture_dir() / "configproj");
  EXPECT_EQ(cfg.source_globs,
            (std::vector<std::string>{"included/**/*.tex"}));
  ASSERT_EQ(cfg.warnings.size(), 1u);
  EXPECT_NE(cfg.warnings[0].find("mystery_key"), std::string::npos);
}

TEST(MacroFile, LoadsNameArityPairs) {
  TempDir dir;
  write_file(dir.path / "macros.txt",
             "# comment only\n"
             "\n"
             "alpha 0\n"
             "pairwise 2  # inline comment\n");
  auto macros = load_macro_file(dir.path / "macros.txt");
  ASSERT_EQ(macros.size(), 2u);
  EXPECT_EQ(macros[0].name, "alpha");
  EXPECT_EQ(macros[0].arity, 0);
  EXPECT_EQ(macros[1].name, "pairwise");
  EXPECT_EQ(macros[1].arity, 2);
}

TEST(MacroFile, RejectsBadLines) {
  TempDir dir;
  write_file(dir.path / "m.txt", "alpha 0\nbeta\n");
  try {
    load_macro_file(dir.path / "m.txt");
    FAIL() << "expected MalformedMacroFile";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "MalformedMacroFile");
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
  write_file(dir.path / "m.txt", "alpha -1\n");
  EXPECT_THROW(load_macro_file(dir.path / "m.txt"), Error);
  write_file(dir.path / "m.txt", "alpha 1 junk\n");
  EXPECT_THROW(load_macro_file(dir.path / "m.txt"), Error);
  EXPECT_THROW(load_macro_file(dir.path / "missing.txt"), Error);
}

TEST(BuiltinMacros, KnowsCommonCommands) {
  const auto& macros = builtin_macros();
  ASSERT_FALSE(macros.empty());
  auto find = [&](const std::string& name) -> const BuiltinMacro* {
    for (const auto& m : macros) {
      if (m.name == name) return &m;
    }
    return nullptr;
  };
  ASSERT_NE(find("frac"), nullptr);
  EXPECT_EQ(find("frac")->arity, 2);
  ASSERT_NE(find("emph"), nullptr);
  EXPECT_EQ(find("emph")->arity, 1);
  ASSERT_NE(find("ldots"), nullptr);
  // No duplicate names.
  std::set<std::string> names;
  for (const auto& m : macros) {
    EXPECT_TRUE(names.insert(m.name).second) << "duplicate " << m.name;
  }
}

TEST(UnifiedDiff, EmptyForEqualTexts) {
  EXPECT_EQ(unified_diff("a\nb\n", "a\nb\n", "old", "new"), "");
  EXPECT_EQ(unified_diff("", "", "old", "new"), "");
}

TEST(UnifiedDiff, SingleLineChange) {
  std::string d = unified_diff("one\ntwo\nthree\n", "one\n2\nthree\n",
                               "a/f.tex", "b/f.tex", 1);
  EXPECT_EQ(d,
            "--- a/f.tex\n"
            "+++ b/f.tex\n"
            "@@ -1,3 +1,3 @@\n"
            " one\n"
            "-two\n"
            "+2\n"
            " three\n");
}

TEST(UnifiedDiff, MergesNearbyChangesIntoOneHunk) {
  std::string old_text = "a\nb\nc\nd\ne\nf\ng\n";
  std::string new_text = "a\nB\nc\nd\ne\nF\ng\n";
  std::string d = unified_diff(old_text, new_text, "o", "n", 2);
  // Changes at lines 2 and 6 are within 2*context keeps of each other, so
  // they share one hunk: exactly one header line.
  int headers = 0;
  for (std::size_t pos = 0; (pos = d.find("\n@@", pos)) != std::string::npos;
       ++pos) {
    ++headers;
  }
  EXPECT_EQ(headers, 1);
  EXPECT_NE(d.find("-b\n"), std::string::npos);
  EXPECT_NE(d.find("+F\n"), std::string::npos);
}

TEST(UnifiedDiff, SeparatesDistantChangesIntoHunks) {
  std::string old_text;
  std::string new_text;
  for (int i = 0; i < 30; ++i) {
    old_text += "line" + std::to_string(i) + "\n";
    new_text += (i == 2 || i == 25) ? "CHANGED" + std::to_string(i) + "\n"
                                    : "line" + std::to_string(i) + "\n";
  }
  std::string d = unified_diff(old_text, new_text, "o", "n", 2);
  int headers = 0;
  for (std::size_t pos = 0; (pos = d.find("\n@@", pos)) != std::string::npos;
       ++pos) {
    ++headers;
  }
  EXPECT_EQ(headers, 2);
}

TEST(UnifiedDiff, PureInsertionAndDeletion) {
  std::string ins = unified_diff("a\nb\n", "a\nx\nb\n", "o", "n", 0);
  EXPECT_NE(ins.find("+x"), std::string::npos);
  EXPECT_EQ(ins.find("-"), ins.find("--- o"));  // no deleted lines
  std::string del = unified_diff("a\nx\nb\n", "a\nb\n", "o", "n", 0);
  EXPECT_NE(del.find("-x"), std::string::npos);
}

}  // namespace
}  // namespace stexide
