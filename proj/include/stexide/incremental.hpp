// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stexide/source_model.hpp"
#include "stexide/spotters.hpp"

namespace stexide {

enum class StructureKind { Module, Import, Symdef, Use, Definition, Section };

std::string to_string(StructureKind kind);

// Points back into the SpotterResult vectors.
struct StructureRef {
  StructureKind kind;
  std::size_t index = 0;
};

struct RangeTreeNode {
  StructureRef ref;
  SourceRange range;
  std::vector<RangeTreeNode> children;
};

// Spotted structures of one document, nested by range containment.
struct RangeTree {
  DocumentUri document;
  std::uint64_t version = 0;
  std::vector<RangeTreeNode> roots;
};

RangeTree build_range_tree(const SpotterResult& result, const DocumentUri& doc,
                           std::uint64_t version);

// Every structure whose range contains the position, outermost first.
std::vector<StructureRef> refs_at(const RangeTree& tree, SourcePosition pos);

struct AnalysisAction {
  enum class Kind { ShiftOnly, FullReanalysis };
  Kind kind = Kind::FullReanalysis;
  std::string reason;
};

// Ranges an edit must not touch for a shift-only update to be sound:
// structure-bearing syntax spans, extended over trailing blank space to the
// next visible character (where a bracket or brace could re-attach), plus
// potential begin/end headers and verbatim spans found by a token scan.
std::vector<SourceRange> collect_important_ranges(const SpotterResult& result,
                                                  std::string_view text);

// Decides whether the edit can be applied by shifting ranges or requires a
// re-parse. Throws Error("StaleVersion") when tree.version != doc_version
// and Error("RangeOutOfBounds") for an invalid edit range.
AnalysisAction classify_edit(const RangeTree& tree, std::uint64_t doc_version,
                             std::string_view doc_text, const TextEdit& edit,
                             const std::vector<SourceRange>& important);

// Position arithmetic for an edit replacing `edited` with text ending at
// `new_end` (in post-edit coordinates).
SourcePosition translate_position(SourcePosition pos, const SourceRange& edited,
                                  SourcePosition new_end);
SourceRange translate_range(const SourceRange& range, const SourceRange& edited,
                            SourcePosition new_end);

// Applies a shift-only edit to the tree ranges and bumps the version.
void shift_ranges(RangeTree& tree, const TextEdit& edit);

// Shifts every structure range in the result; definition blocks whose body
// contains the edit get their flattened text recomputed from new_text.
void shift_result(SpotterResult& result, const TextEdit& edit,
                  std::string_view new_text);

}  // namespace stexide
