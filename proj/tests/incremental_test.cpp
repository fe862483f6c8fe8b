// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/incremental.hpp"

#include <gtest/gtest.h>

#include <random>

#include "stexide/parser.hpp"
#include "stexide/spotters.hpp"
#include "test_util.hpp"

namespace stexide {
namespace {

struct Analyzed {
  std::string text;
  SpotterResult result;
  RangeTree tree;
};

Analyzed analyze(const std::string& text, const std::string& path = "d.tex") {
  Analyzed a;
  a.text = text;
  DocumentTree parsed = parse(text);
  a.result = run_spotters(parsed, DocumentUri(path),
                          SpotterRegistry::builtins());
  a.tree = build_range_tree(a.result, DocumentUri(path), 0);
  return a;
}

AnalysisAction classify(const Analyzed& a, const TextEdit& edit) {
  auto important = collect_important_ranges(a.result, a.text);
  return classify_edit(a.tree, 0, a.text, edit, important);
}

const std::string kDoc =
    "\\begin{module}[id=m]\n"                                   // line 1
    "  \\importmodule[other]{other}\n"                          // line 2
    "  \\symdef{f}[1]{#1!}\n"                                   // line 3
    "  \\begin{definition}[id=d,title=T,for=f]\n"               // line 4
    "    The f of a thing is that thing, loudly.\n"             // line 5
    "  \\end{definition}\n"                                     // line 6
    "\\end{module}\n";                                          // line 7

TEST(RangeTree, NestsStructuresByContainment) {
  Analyzed a = analyze(kDoc);
  ASSERT_EQ(a.tree.roots.size(), 1u);
  const RangeTreeNode& module_node = a.tree.roots[0];
  EXPECT_EQ(module_node.ref.kind, StructureKind::Module);
  // import, symdef, definition are children of the module.
  int kinds_seen = 0;
  for (const auto& child : module_node.children) {
    if (child.ref.kind == StructureKind::Import ||
        child.ref.kind == StructureKind::Symdef ||
        child.ref.kind == StructureKind::Definition) {
      ++kinds_seen;
    }
  }
  EXPECT_GE(kinds_seen, 3);
}

TEST(RangeTree, RefsAtFindsEnclosingStructures) {
  Analyzed a = analyze(kDoc);
  auto refs = refs_at(a.tree, SourcePosition{3, 5});  // inside the symdef
  bool module_hit = false, symdef_hit = false;
  for (const auto& r : refs) {
    if (r.kind == StructureKind::Module) module_hit = true;
    if (r.kind == StructureKind::Symdef) symdef_hit = true;
  }
  EXPECT_TRUE(module_hit);
  EXPECT_TRUE(symdef_hit);
  EXPECT_TRUE(refs_at(a.tree, SourcePosition{7, 0}).size() <= 1u);
}

TEST(ClassifyEdit, PlainTextInsideDefinitionIsShiftOnly) {
  Analyzed a = analyze(kDoc);
  TextEdit edit{DocumentUri("d.tex"), {{5, 12}, {5, 12}}, "very "};
  EXPECT_EQ(classify(a, edit).kind, AnalysisAction::Kind::ShiftOnly);
}

TEST(ClassifyEdit, PlainDeletionInsideDefinitionIsShiftOnly) {
  Analyzed a = analyze(kDoc);
  TextEdit edit{DocumentUri("d.tex"), {{5, 12}, {5, 17}}, ""};
  EXPECT_EQ(classify(a, edit).kind, AnalysisAction::Kind::ShiftOnly);
}

TEST(ClassifyEdit, StructuralCharactersForceReanalysis) {
  Analyzed a = analyze(kDoc);
  for (const std::string& ins :
       {"\\", "{", "}", "[", "]", "%", "\n", "a\\b"}) {
    TextEdit edit{DocumentUri("d.tex"), {{5, 12}, {5, 12}}, ins};
    EXPECT_EQ(classify(a, edit).kind, AnalysisAction::Kind::FullReanalysis)
        << "insertion: " << ins;
  }
}

TEST(ClassifyEdit, DeletingStructuralCharactersForcesReanalysis) {
  Analyzed a = analyze(kDoc);
  // Deleting across the \end{definition} line removes a backslash.
  TextEdit edit{DocumentUri("d.tex"), {{5, 40}, {6, 5}}, ""};
  EXPECT_EQ(classify(a, edit).kind, AnalysisAction::Kind::FullReanalysis);
}

TEST(ClassifyEdit, TouchingAStructureSpanForcesReanalysis) {
  Analyzed a = analyze(kDoc);
  // Typing right after the \symdef's closing brace.
  TextEdit at_end{DocumentUri("d.tex"), {{3, 20}, {3, 20}}, "x"};
  EXPECT_EQ(classify(a, at_end).kind, AnalysisAction::Kind::FullReanalysis);
  // One column before the \symdef (guard band).
  TextEdit before{DocumentUri("d.tex"), {{3, 1}, {3, 1}}, "x"};
  EXPECT_EQ(classify(a, before).kind, AnalysisAction::Kind::FullReanalysis);
}

TEST(ClassifyEdit, EditAdjoiningCommandNameForcesReanalysis) {
  // "loudly" in line 5 is plain text: typing letters right after a command
  // name elsewhere must still be caught via the left-scan.
  std::string doc = kDoc;
  Analyzed a = analyze(doc);
  // Position right after "The f" (a plain word) is ShiftOnly...
  TextEdit plain{DocumentUri("d.tex"), {{5, 9}, {5, 9}}, "x"};
  EXPECT_EQ(classify(a, plain).kind, AnalysisAction::Kind::ShiftOnly);
  // ...but the same single letter typed directly after a command name
  // inside math text must reanalyze. Build a doc with an inline use.
  std::string doc2 =
      "\\begin{module}[id=m]\n"
      "  \\symdef{fo}{x}\n"
      "  some text $\\fo$ more words here\n"
      "\\end{module}\n";
  Analyzed b = analyze(doc2);
  // Right after "\fo" (3:16 is just past the 'o').
  TextEdit adjoin{DocumentUri("d.tex"), {{3, 16}, {3, 16}}, "r"};
  EXPECT_EQ(classify(b, adjoin).kind, AnalysisAction::Kind::FullReanalysis);
}

TEST(ClassifyEdit, StaleVersionAndBadRangeThrow) {
  Analyzed a = analyze(kDoc);
  auto important = collect_important_ranges(a.result, a.text);
  TextEdit edit{DocumentUri("d.tex"), {{5, 12}, {5, 12}}, "x"};
  EXPECT_THROW(classify_edit(a.tree, 3, a.text, edit, important), Error);
  TextEdit bad{DocumentUri("d.tex"), {{99, 0}, {99, 1}}, "x"};
  EXPECT_THROW(classify_edit(a.tree, 0, a.text, bad, important), Error);
}

TEST(TranslatePosition, AllRelativeCases) {
  // Replace range [2:2, 2:5) with text ending at 2:4 (net -1 column).
  SourceRange edited{{2, 2}, {2, 5}};
  SourcePosition new_end{2, 4};
  EXPECT_EQ(translate_position({1, 7}, edited, new_end),
            (SourcePosition{1, 7}));
  EXPECT_EQ(translate_position({2, 2}, edited, new_end),
            (SourcePosition{2, 2}));
  EXPECT_EQ(translate_position({2, 4}, edited, new_end),
            (SourcePosition{2, 4}));
  EXPECT_EQ(translate_position({2, 5}, edited, new_end),
            (SourcePosition{2, 4}));
  EXPECT_EQ(translate_position({2, 9}, edited, new_end),
            (SourcePosition{2, 8}));
  EXPECT_EQ(translate_position({4, 1}, edited, new_end),
            (SourcePosition{4, 1}));

  // Multi-line insertion shifts following lines down.
  SourceRange point{{2, 2}, {2, 2}};
  SourcePosition nl_end{3, 1};
  EXPECT_EQ(translate_position({2, 5}, point, nl_end), (SourcePosition{3, 4}));
  EXPECT_EQ(translate_position({4, 7}, point, nl_end), (SourcePosition{5, 7}));

  // Multi-line deletion pulls following lines up.
  SourceRange del{{2, 2}, {4, 1}};
  SourcePosition del_end{2, 2};
  EXPECT_EQ(translate_position({4, 6}, del, del_end), (SourcePosition{2, 7}));
  EXPECT_EQ(translate_position({6, 3}, del, del_end), (SourcePosition{4, 3}));

  // translate_range shifts both endpoints.
  SourceRange moved = translate_range({{2, 7}, {4, 2}}, edited, new_end);
  EXPECT_EQ(moved, (SourceRange{{2, 6}, {4, 2}}));
}

TEST(ShiftRanges, MovesTreeAndBumpsVersion) {
  Analyzed a = analyze(kDoc);
  SourceRange before = a.tree.roots[0].range;
  TextEdit edit{DocumentUri("d.tex"), {{5, 12}, {5, 12}}, "xx"};
  shift_ranges(a.tree, edit);
  EXPECT_EQ(a.tree.version, 1u);
  EXPECT_EQ(a.tree.roots[0].range, before);  // module spans lines 1..7 still
}

// The load-bearing property: after a ShiftOnly edit, shifting the previous
// spotter result must equal re-running the spotters on the new text.
TEST(ShiftResult, MatchesReanalysisOnPlainEdits) {
  std::mt19937 rng(20260825);
  std::uniform_int_distribution<int> col(0, 39);
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_int_distribution<int> mode(0, 2);
  int shift_only_seen = 0;
  for (int iter = 0; iter < 300; ++iter) {
    Analyzed a = analyze(kDoc);
    // Random edit inside line 5's plain text region.
    std::string line5 = "    The f of a thing is that thing, loudly.";
    int c1 = col(rng);
    TextEdit edit{DocumentUri("d.tex"), {{5, 0}, {5, 0}}, ""};
    if (mode(rng) == 0) {
      // insertion of plain letters/spaces
      std::string ins;
      int n = len(rng);
      for (int i = 0; i < n; ++i)
        ins += static_cast<char>("abcdefgh stuv"[static_cast<std::size_t>(
            std::uniform_int_distribution<int>(0, 12)(rng))]);
      edit.range = {{5, static_cast<uint32_t>(c1)},
                    {5, static_cast<uint32_t>(c1)}};
      edit.replacement = ins;
    } else {
      int c2 = std::min<int>(static_cast<int>(line5.size()), c1 + len(rng));
      edit.range = {{5, static_cast<uint32_t>(c1)},
                    {5, static_cast<uint32_t>(c2)}};
      edit.replacement = mode(rng) == 1 ? "" : "qq";
    }
    auto important = collect_important_ranges(a.result, a.text);
    AnalysisAction action = classify_edit(a.tree, 0, a.text, edit, important);
    // Apply the edit textually.
    Workspace ws;
    ws.add_document(DocumentUri("d.tex"), kDoc);
    std::string new_text = ws.apply_text_edit(edit);
    if (action.kind != AnalysisAction::Kind::ShiftOnly) continue;
    ++shift_only_seen;

    SpotterResult shifted = a.result;
    shift_result(shifted, edit, new_text);
    Analyzed fresh = analyze(new_text);

    ASSERT_EQ(shifted.modules.size(), fresh.result.modules.size());
    for (std::size_t i = 0; i < shifted.modules.size(); ++i) {
      EXPECT_EQ(shifted.modules[i].range, fresh.result.modules[i].range);
      EXPECT_EQ(shifted.modules[i].body_range,
                fresh.result.modules[i].body_range);
    }
    ASSERT_EQ(shifted.definitions.size(), fresh.result.definitions.size());
    for (std::size_t i = 0; i < shifted.definitions.size(); ++i) {
      EXPECT_EQ(shifted.definitions[i].range,
                fresh.result.definitions[i].range)
          << "iter " << iter;
      EXPECT_EQ(shifted.definitions[i].text, fresh.result.definitions[i].text)
          << "iter " << iter;
    }
    ASSERT_EQ(shifted.uses.size(), fresh.result.uses.size());
    for (std::size_t i = 0; i < shifted.uses.size(); ++i) {
      EXPECT_EQ(shifted.uses[i].range, fresh.result.uses[i].range);
    }
  }
  EXPECT_GT(shift_only_seen, 50) << "edit generator stopped covering the "
                                    "ShiftOnly path";
}

TEST(StructureKindNames, Stable) {
  EXPECT_EQ(to_string(StructureKind::Module), "module");
  EXPECT_EQ(to_string(StructureKind::Import), "import");
  EXPECT_EQ(to_string(StructureKind::Symdef), "symdef");
  EXPECT_EQ(to_string(StructureKind::Use), "use");
  EXPECT_EQ(to_string(StructureKind::Definition), "definition");
  EXPECT_EQ(to_string(StructureKind::Section), "section");
}

TEST(ImportantRanges, CoverLatentEnvironmentHeaders) {
  // \begin/\end tokens of unknown environments are precarious even though
  // no structure is spotted for them.
  std::string text =
      "\\begin{module}[id=m]\n"
      "  \\begin{itemize} x \\end{itemize}\n"
      "  plain words here\n"
      "\\end{module}\n";
  Analyzed a = analyze(text);
  auto important = collect_important_ranges(a.result, a.text);
  // Typing a letter right after \begin{itemize} must reanalyze: it sits in
  // the attach zone of a latent header.
  TextEdit edit{DocumentUri("d.tex"), {{2, 17}, {2, 17}}, "x"};
  EXPECT_EQ(classify_edit(a.tree, 0, a.text, edit, important).kind,
            AnalysisAction::Kind::FullReanalysis);
  // Plain text in line 3 still shifts.
  TextEdit plain{DocumentUri("d.tex"), {{3, 10}, {3, 10}}, "x"};
  EXPECT_EQ(classify_edit(a.tree, 0, a.text, plain, important).kind,
            AnalysisAction::Kind::ShiftOnly);
}

TEST(ImportantRanges, CoverVerbatimSpans) {
  std::string text =
      "\\begin{module}[id=m]\n"
      "  \\verb|ab| and plain text after\n"
      "\\end{module}\n";
  Analyzed a = analyze(text);
  auto important = collect_important_ranges(a.result, a.text);
  // Editing inside the \verb span could re-pair its delimiters.
  TextEdit inside{DocumentUri("d.tex"), {{2, 8}, {2, 8}}, "x"};
  EXPECT_EQ(classify_edit(a.tree, 0, a.text, inside, important).kind,
            AnalysisAction::Kind::FullReanalysis);
  TextEdit plain{DocumentUri("d.tex"), {{2, 16}, {2, 16}}, "x"};
  EXPECT_EQ(classify_edit(a.tree, 0, a.text, plain, important).kind,
            AnalysisAction::Kind::ShiftOnly);
}

}  // namespace
}  // namespace stexide
