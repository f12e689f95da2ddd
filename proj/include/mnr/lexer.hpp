#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mnr/types.hpp"

namespace mnr {

// Result of lexing one source file. When `error` is set the file should be
// skipped; `tokens` still holds whatever was lexed before the failure.
struct LexResult {
  std::vector<JavaToken> tokens;
  std::optional<std::string> error;
};

// Lexes Java source text into tokens. Comments and whitespace are dropped.
// String/char literals become single Literal tokens, so braces inside them
// never affect later brace matching. `@Name` lexes as one Annotation token.
LexResult lex_java(std::string_view source_text);

bool is_java_keyword(std::string_view word);

}  // namespace mnr
