#include <string>

#include "doctest.h"
#include "mnr/lexer.hpp"

using namespace mnr;

namespace {
std::vector<std::string> texts(const LexResult& r) {
  std::vector<std::string> out;
  for (const auto& t : r.tokens) out.push_back(t.text);
  return out;
}
}  // namespace

TEST_CASE("lex_java basic statement") {
  auto r = lex_java("int x = 1;");
  REQUIRE(!r.error);
  REQUIRE(r.tokens.size() == 5);
  CHECK(r.tokens[0].kind == TokenKind::Keyword);
  CHECK(r.tokens[0].text == "int");
  CHECK(r.tokens[1].kind == TokenKind::Identifier);
  CHECK(r.tokens[1].text == "x");
  CHECK(r.tokens[2].kind == TokenKind::Operator);
  CHECK(r.tokens[2].text == "=");
  CHECK(r.tokens[3].kind == TokenKind::Literal);
  CHECK(r.tokens[3].text == "1");
  CHECK(r.tokens[4].kind == TokenKind::Punctuation);
  CHECK(r.tokens[4].text == ";");
}

TEST_CASE("comments are discarded, braces inside them do not count") {
  auto r = lex_java("// {\n}");
  REQUIRE(!r.error);
  REQUIRE(r.tokens.size() == 1);
  CHECK(r.tokens[0].text == "}");

  auto r2 = lex_java("/* } { */ x");
  REQUIRE(!r2.error);
  CHECK(texts(r2) == std::vector<std::string>{"x"});
}

TEST_CASE("empty input lexes to empty token list") {
  auto r = lex_java("");
  CHECK(!r.error);
  CHECK(r.tokens.empty());
}

TEST_CASE("string and char literals are single tokens") {
  auto r = lex_java(R"(s = "a { b \" }"; c = '{';)");
  REQUIRE(!r.error);
  auto t = texts(r);
  CHECK(t == std::vector<std::string>{"s", "=", R"("a { b \" }")", ";", "c", "=", "'{'", ";"});
  CHECK(r.tokens[2].kind == TokenKind::Literal);
}

TEST_CASE("annotations lex as single tokens") {
  auto r = lex_java("@Test void f() {}");
  REQUIRE(!r.error);
  CHECK(r.tokens[0].kind == TokenKind::Annotation);
  CHECK(r.tokens[0].text == "@Test");
}

TEST_CASE("unterminated block comment reports the line") {
  auto r = lex_java("x\ny\n/* never closed");
  REQUIRE(r.error);
  CHECK(r.error->find("line 3") != std::string::npos);
}

TEST_CASE("unterminated string reports an error") {
  auto r = lex_java("String s = \"oops");
  REQUIRE(r.error);
  CHECK(r.error->find("string") != std::string::npos);
}

TEST_CASE("line numbers are tracked") {
  auto r = lex_java("a\nb\n\nc");
  REQUIRE(!r.error);
  CHECK(r.tokens[0].line == 1);
  CHECK(r.tokens[1].line == 2);
  CHECK(r.tokens[2].line == 4);
}

TEST_CASE("multi-char operators") {
  auto r = lex_java("a >>= b; x -> y; l::m");
  REQUIRE(!r.error);
  auto t = texts(r);
  CHECK(t == std::vector<std::string>{"a", ">>=", "b", ";", "x", "->", "y", ";", "l", "::", "m"});
}
