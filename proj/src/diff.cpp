// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/diff.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string_view>
#include <vector>

namespace stexide {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

enum class Op { Keep, Del, Add };

struct Step {
  Op op;
  std::size_t old_index = 0;  // valid for Keep/Del
  std::size_t new_index = 0;  // valid for Keep/Add
};

// Longest-common-subsequence alignment of the two line vectors.
std::vector<Step> align(const std::vector<std::string>& a,
                        const std::vector<std::string>& b) {
  std::size_t n = a.size();
  std::size_t m = b.size();
  std::vector<std::vector<std::uint32_t>> lcs(
      n + 1, std::vector<std::uint32_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      if (a[i] == b[j]) {
        lcs[i][j] = lcs[i + 1][j + 1] + 1;
      } else {
        lcs[i][j] = std::max(lcs[i + 1][j], lcs[i][j + 1]);
      }
    }
  }
  std::vector<Step> steps;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      steps.push_back({Op::Keep, i++, j++});
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      steps.push_back({Op::Del, i++, 0});
    } else {
      steps.push_back({Op::Add, 0, j++});
    }
  }
  while (i < n) steps.push_back({Op::Del, i++, 0});
  while (j < m) steps.push_back({Op::Add, 0, j++});
  return steps;
}

}  // namespace

std::string unified_diff(const std::string& old_text,
                         const std::string& new_text,
                         const std::string& old_label,
                         const std::string& new_label, int context) {
  if (old_text == new_text) return "";
  std::vector<std::string> a = split_lines(old_text);
  std::vector<std::string> b = split_lines(new_text);
  std::vector<Step> steps = align(a, b);

  // Indices of change steps, then hunks covering them with context.
  std::ostringstream os;
  os << "--- " << old_label << "\n";
  os << "+++ " << new_label << "\n";

  std::size_t idx = 0;
  while (idx < steps.size()) {
    // Find the next change.
    while (idx < steps.size() && steps[idx].op == Op::Keep) ++idx;
    if (idx >= steps.size()) break;
    std::size_t hunk_begin = idx >= static_cast<std::size_t>(context)
                                 ? idx - context
                                 : 0;
    // Extend over subsequent changes separated by ≤ 2*context keeps.
    std::size_t hunk_end = idx;
    std::size_t scan = idx;
    while (scan < steps.size()) {
      if (steps[scan].op != Op::Keep) {
        hunk_end = scan + 1;
        ++scan;
        continue;
      }
      std::size_t keep_run = 0;
      std::size_t k = scan;
      while (k < steps.size() && steps[k].op == Op::Keep) {
        ++keep_run;
        ++k;
      }
      if (k >= steps.size() ||
          keep_run > static_cast<std::size_t>(2 * context)) {
        break;
      }
      scan = k;
    }
    std::size_t tail = std::min(steps.size(),
                                hunk_end + static_cast<std::size_t>(context));
    // Counts and start lines for the @@ header (1-based; 0 when empty).
    std::size_t old_count = 0;
    std::size_t new_count = 0;
    std::size_t old_start = a.size();
    std::size_t new_start = b.size();
    for (std::size_t s = hunk_begin; s < tail; ++s) {
      const Step& st = steps[s];
      if (st.op != Op::Add) {
        old_start = std::min(old_start, st.old_index);
        ++old_count;
      }
      if (st.op != Op::Del) {
        new_start = std::min(new_start, st.new_index);
        ++new_count;
      }
    }
    os << "@@ -" << (old_count == 0 ? old_start : old_start + 1) << ","
       << old_count << " +" << (new_count == 0 ? new_start : new_start + 1)
       << "," << new_count << " @@\n";
    for (std::size_t s = hunk_begin; s < tail; ++s) {
      const Step& st = steps[s];
      switch (st.op) {
        case Op::Keep:
          os << " " << a[st.old_index] << "\n";
          break;
        case Op::Del:
          os << "-" << a[st.old_index] << "\n";
          break;
        case Op::Add:
          os << "+" << b[st.new_index] << "\n";
          break;
      }
    }
    idx = tail;
  }
  return os.str();
}

}  // namespace stexide
