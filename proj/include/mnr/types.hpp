#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mnr {

enum class TokenKind {
  Identifier,
  Keyword,
  Literal,
  Operator,
  Punctuation,
  Annotation,
};

struct JavaToken {
  TokenKind kind;
  std::string text;
  int line = 1;  // 1-based
};

// One extracted Java method. body_tokens excludes the enclosing braces;
// parameters preserve declaration order.
struct MethodRecord {
  std::string class_name;
  std::string method_name;
  std::string return_type;
  std::vector<std::pair<std::string, std::string>> parameters;  // (type, name)
  std::vector<std::string> body_tokens;
  std::string source_path;
  bool is_test_context = false;
};

}  // namespace mnr
