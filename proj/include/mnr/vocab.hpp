#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "mnr/subtoken.hpp"
#include "mnr/types.hpp"

namespace mnr {

enum class VocabRole { Context, Name };

// Immutable subtoken <-> id map. Ids 0..3 are reserved; every other token
// occurred at least min_count times in the stream it was built from. Ids are
// assigned by descending count, ties broken lexicographically.
class Vocabulary {
 public:
  static constexpr int32_t kPad = 0;
  static constexpr int32_t kUnk = 1;
  static constexpr int32_t kStart = 2;
  static constexpr int32_t kEnd = 3;

  Vocabulary() = default;

  static Vocabulary build(const std::vector<MethodRecord>& records, int min_count,
                          VocabRole role);

  int32_t id_of(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? kUnk : it->second;
  }
  const std::string& token_of(int32_t id) const { return id_to_token_.at(id); }
  int32_t size() const { return static_cast<int32_t>(id_to_token_.size()); }
  int min_count() const { return min_count_; }
  VocabRole role() const { return role_; }

  // Text form: header line `#vocab v1 min_count=<n> role=<r>`, then
  // `token<TAB>id` lines in id order.
  std::string to_text() const;
  static Vocabulary from_text(const std::string& text);

 private:
  std::unordered_map<std::string, int32_t> token_to_id_;
  std::vector<std::string> id_to_token_;
  int min_count_ = 1;
  VocabRole role_ = VocabRole::Context;
};

// Field marker tokens used in context sequences. They contain characters a
// subtoken can never contain, so they cannot collide with real subtokens.
inline constexpr const char* kMarkCls = "<cls>";
inline constexpr const char* kMarkRet = "<ret>";
inline constexpr const char* kMarkPar = "<par>";
inline constexpr const char* kMarkBody = "<body>";

// The tagged subtoken sequence fed to the context encoder:
// <cls> tokens <ret> tokens <par> tokens <body> tokens, each marker present
// only when its field has tokens, truncated to max_len entries.
std::vector<std::string> context_sequence(const MethodRecord& record, size_t max_len = 200);

// Subtokens of the identifier-like body tokens (identifiers, keywords and
// annotations; literals/operators/punctuation are dropped).
std::vector<std::string> body_subtokens(const MethodRecord& record);

}  // namespace mnr
