// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace stexide {

// Line-based unified diff ("--- old_label", "+++ new_label", @@ hunks).
// Returns an empty string when the texts are equal.
std::string unified_diff(const std::string& old_text,
                         const std::string& new_text,
                         const std::string& old_label,
                         const std::string& new_label, int context = 3);

}  // namespace stexide
