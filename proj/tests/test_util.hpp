// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stexide/engine.hpp"

namespace stexide::testutil {

inline std::filesystem::path fixture_dir() {
  return std::filesystem::path(STEXIDE_FIXTURE_DIR);
}

inline std::filesystem::path golden_dir() {
  return std::filesystem::path(STEXIDE_GOLDEN_DIR);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  os << content;
}

inline Workspace workspace_from(
    const std::vector<std::pair<std::string, std::string>>& docs) {
  Workspace ws;
  for (const auto& [path, text] : docs) {
    ws.add_document(DocumentUri(path), text);
  }
  return ws;
}

inline Engine engine_from(
    const std::vector<std::pair<std::string, std::string>>& docs) {
  Engine engine(workspace_from(docs));
  engine.analyze_all();
  return engine;
}

// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static int counter = 0;
    auto base = std::filesystem::temp_directory_path();
    for (;;) {
      path = base / ("stexide_test_" + std::to_string(::getpid()) + "_" +
                     std::to_string(counter++));
      if (std::filesystem::create_directory(path)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline void copy_tree(const std::filesystem::path& from,
                      const std::filesystem::path& to) {
  std::filesystem::copy(from, to,
                        std::filesystem::copy_options::recursive |
                            std::filesystem::copy_options::overwrite_existing);
}

}  // namespace stexide::testutil
