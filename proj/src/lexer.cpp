#include "mnr/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace mnr {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

const std::unordered_set<std::string_view>& keyword_set() {
  static const std::unordered_set<std::string_view> kw = {
      "abstract", "assert",     "boolean",  "break",     "byte",    "case",
      "catch",    "char",       "class",    "const",     "continue", "default",
      "do",       "double",     "else",     "enum",      "extends", "final",
      "finally",  "float",      "for",      "goto",      "if",      "implements",
      "import",   "instanceof", "int",      "interface", "long",    "native",
      "new",      "package",    "private",  "protected", "public",  "return",
      "short",    "static",     "strictfp", "super",     "switch",  "synchronized",
      "this",     "throw",      "throws",   "transient", "try",     "void",
      "volatile", "while",      "true",     "false",     "null",    "var",
      "record",   "yield"};
  return kw;
}

// Multi-char operators, longest first within each leading char.
const std::array<std::string_view, 36> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->",  "::", "==", "!=", "<=", ">=",
    "&&",   "||",  "++",  "--",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=",
    "^=",   "<<",  ">>",  "+",   "-",   "*",   "/",  "%",  "=",  "<",  ">",
    "!",    "&",   "|"};

}  // namespace

bool is_java_keyword(std::string_view word) { return keyword_set().count(word) > 0; }

LexResult lex_java(std::string_view src) {
  LexResult out;
  size_t i = 0;
  const size_t n = src.size();
  int line = 1;

  auto push = [&](TokenKind k, std::string text) {
    out.tokens.push_back(JavaToken{k, std::move(text), line});
  };

  while (i < n) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      int start_line = line;
      i += 2;
      bool closed = false;
      while (i < n) {
        if (src[i] == '\n') ++line;
        if (src[i] == '*' && i + 1 < n && src[i + 1] == '/') {
          i += 2;
          closed = true;
          break;
        }
        ++i;
      }
      if (!closed) {
        out.error = "unterminated block comment starting at line " + std::to_string(start_line);
        return out;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      const char quote = c;
      int start_line = line;
      size_t j = i + 1;
      // Text blocks (""" ... """) lex as one literal as well.
      bool text_block = quote == '"' && j + 1 < n && src[j] == '"' && src[j + 1] == '"';
      if (text_block) {
        j += 2;
        bool closed = false;
        while (j < n) {
          if (src[j] == '\n') ++line;
          if (src[j] == '"' && src.substr(j, 3) == "\"\"\"") {
            j += 3;
            closed = true;
            break;
          }
          ++j;
        }
        if (!closed) {
          out.error = "unterminated text block starting at line " + std::to_string(start_line);
          return out;
        }
      } else {
        bool closed = false;
        while (j < n) {
          if (src[j] == '\\' && j + 1 < n) {
            j += 2;
            continue;
          }
          if (src[j] == '\n') break;  // Java string literals cannot span lines
          if (src[j] == quote) {
            ++j;
            closed = true;
            break;
          }
          ++j;
        }
        if (!closed) {
          out.error = std::string("unterminated ") + (quote == '"' ? "string" : "char") +
                      " literal at line " + std::to_string(start_line);
          return out;
        }
      }
      push(TokenKind::Literal, std::string(src.substr(i, j - i)));
      i = j;
      continue;
    }
    if (c == '@') {
      size_t j = i + 1;
      while (j < n && std::isspace(static_cast<unsigned char>(src[j])) && src[j] != '\n') ++j;
      if (j < n && is_ident_start(src[j])) {
        size_t k = j;
        while (k < n && is_ident_char(src[k])) ++k;
        push(TokenKind::Annotation, "@" + std::string(src.substr(j, k - j)));
        i = k;
      } else {
        push(TokenKind::Operator, "@");
        ++i;
      }
      continue;
    }
    if (is_ident_start(c)) {
      size_t j = i;
      while (j < n && is_ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      push(is_java_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, std::move(word));
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                       src[j] == '.' ||
                       ((src[j] == '+' || src[j] == '-') && j > i &&
                        (src[j - 1] == 'e' || src[j - 1] == 'E')))) {
        ++j;
      }
      // trailing '.' belongs to the next token (e.g. "1..x" never valid anyway)
      while (j > i + 1 && src[j - 1] == '.') --j;
      push(TokenKind::Literal, std::string(src.substr(i, j - i)));
      i = j;
      continue;
    }
    if (c == '{' || c == '}' || c == '(' || c == ')' || c == '[' || c == ']' || c == ';' ||
        c == ',' || c == '.' || c == '?' || c == ':' || c == '~' || c == '^') {
      // ':' may be '::', '.' may be part of '...'; handled via operator table first.
      bool matched = false;
      for (std::string_view op : kOperators) {
        if (src.substr(i, op.size()) == op) {
          push(TokenKind::Operator, std::string(op));
          i += op.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (c == '.' && src.substr(i, 3) == "...") {
        push(TokenKind::Operator, "...");
        i += 3;
        continue;
      }
      if (c == ':' && i + 1 < n && src[i + 1] == ':') {
        push(TokenKind::Operator, "::");
        i += 2;
        continue;
      }
      push(TokenKind::Punctuation, std::string(1, c));
      ++i;
      continue;
    }
    bool matched = false;
    for (std::string_view op : kOperators) {
      if (src.substr(i, op.size()) == op) {
        push(TokenKind::Operator, std::string(op));
        i += op.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      // Unknown byte (stray unicode, etc.): emit as punctuation so nothing is lost.
      push(TokenKind::Punctuation, std::string(1, c));
      ++i;
    }
  }
  return out;
}

}  // namespace mnr
