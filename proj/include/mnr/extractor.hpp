#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mnr/types.hpp"

namespace mnr {

struct MineSummary {
  size_t files_seen = 0;
  size_t files_skipped = 0;
  size_t methods_mined = 0;
  std::vector<std::string> diagnostics;
};

// Recognizes bodied method declarations at class-member depth via token-level
// brace matching. Constructors, initializer blocks, lambdas and annotation-type
// members are excluded. Unbalanced braces at EOF drop the open method and add a
// diagnostic; everything extracted before is kept.
std::vector<MethodRecord> extract_methods(const std::vector<JavaToken>& tokens,
                                          const std::string& source_path,
                                          std::vector<std::string>* diagnostics = nullptr);

// Walks `*.java` under root in lexicographically sorted path order and
// concatenates per-file extraction results. Unreadable or unlexable files are
// skipped with a diagnostic, never aborting the run.
std::vector<MethodRecord> mine_corpus(const std::filesystem::path& root,
                                      MineSummary* summary = nullptr);

}  // namespace mnr
