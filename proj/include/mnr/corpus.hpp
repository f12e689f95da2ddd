#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mnr/types.hpp"

namespace mnr {

struct CorpusReadSummary {
  size_t lines = 0;
  size_t rejected = 0;
};

// JSON Lines, one method per line. Required keys: class_name, method_name,
// return_type, parameters (list of [type, name]), body_tokens, source_path,
// is_test_context. Unknown keys are ignored; lines missing required keys are
// rejected and counted.
std::vector<MethodRecord> read_jsonl(std::istream& in, CorpusReadSummary* summary = nullptr);
std::vector<MethodRecord> read_jsonl_file(const std::filesystem::path& path,
                                          CorpusReadSummary* summary = nullptr);
void write_jsonl(std::ostream& out, const std::vector<MethodRecord>& records);
void write_jsonl_file(const std::filesystem::path& path,
                      const std::vector<MethodRecord>& records);

std::string record_to_json_line(const MethodRecord& record);

// Seeded synthetic corpus cycling through the five prefix categories with
// separable body shapes; OTHER names are recoverable from the body so the
// generator has something to learn.
std::vector<MethodRecord> synth_corpus(size_t n, uint64_t seed);

// Renders records as compilable-looking .java files under root (one class
// per file, grouped by class name). Used to exercise the extractor end to end.
void render_java_project(const std::filesystem::path& root,
                         const std::vector<MethodRecord>& records,
                         size_t methods_per_file = 20);

}  // namespace mnr
