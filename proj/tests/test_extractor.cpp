#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mnr/extractor.hpp"
#include "mnr/lexer.hpp"

using namespace mnr;

namespace {
std::vector<MethodRecord> extract_src(const std::string& src) {
  auto lexed = lex_java(src);
  REQUIRE(!lexed.error);
  return extract_methods(lexed.tokens, "mem.java");
}
}  // namespace

TEST_CASE("simple getter is extracted") {
  auto recs = extract_src("class A { int getX(){ return x; } }");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].class_name == "A");
  CHECK(recs[0].method_name == "getX");
  CHECK(recs[0].return_type == "int");
  CHECK(recs[0].parameters.empty());
  CHECK(recs[0].body_tokens == std::vector<std::string>{"return", "x", ";"});
  CHECK(!recs[0].is_test_context);
}

TEST_CASE("interface methods without bodies yield nothing") {
  CHECK(extract_src("interface I { void f(); }").empty());
}

TEST_CASE("default interface methods have bodies and are extracted") {
  auto recs = extract_src("interface I { default int f() { return 1; } }");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].method_name == "f");
}

TEST_CASE("constructors are skipped") {
  CHECK(extract_src("class T { T() {} }").empty());
  auto recs = extract_src("class T { T(int x) { this.x = x; } int getX() { return x; } }");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].method_name == "getX");
}

TEST_CASE("parameters preserve order with flattened generic types") {
  auto recs = extract_src(
      "class A { Map<String,Integer> f(final List<String> names, int[] counts) "
      "{ return null; } }");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].return_type == "Map<String,Integer>");
  REQUIRE(recs[0].parameters.size() == 2);
  CHECK(recs[0].parameters[0] == std::pair<std::string, std::string>{"List<String>", "names"});
  CHECK(recs[0].parameters[1] == std::pair<std::string, std::string>{"int[]", "counts"});
}

TEST_CASE("nested classes attribute methods to the innermost class") {
  auto recs = extract_src(
      "class Outer { class Inner { void go() { run(); } } void top() { stop(); } }");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].class_name == "Inner");
  CHECK(recs[0].method_name == "go");
  CHECK(recs[1].class_name == "Outer");
  CHECK(recs[1].method_name == "top");
}

TEST_CASE("test context via class suffix and @Test annotation") {
  auto recs = extract_src("class FooTests { void checkIt() { foo(); } }");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].is_test_context);

  auto recs2 = extract_src("class Foo { @Test void checkIt() { foo(); } }");
  REQUIRE(recs2.size() == 1);
  CHECK(recs2[0].is_test_context);
}

TEST_CASE("initializer blocks and fields are skipped") {
  auto recs = extract_src(
      "class A { static { init(); } int x = 3; Runnable r = () -> { go(); }; "
      "void f() { use(x); } }");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].method_name == "f");
}

TEST_CASE("generic methods and throws clauses") {
  auto recs = extract_src(
      "class A { public <T> T pick(List<T> xs) throws IOException { return xs.get(0); } }");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].method_name == "pick");
  CHECK(recs[0].return_type == "T");
}

TEST_CASE("unbalanced braces at EOF keep earlier records and warn") {
  auto lexed = lex_java("class A { void ok() { x(); } void bad() { y(");
  REQUIRE(!lexed.error);
  std::vector<std::string> diags;
  auto recs = extract_methods(lexed.tokens, "m.java", &diags);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].method_name == "ok");
  CHECK(!diags.empty());
}

TEST_CASE("comment immunity: comments anywhere leave records unchanged") {
  std::string plain = "class A { int getX(){ return x; } void setY(int y){ this.y = y; } }";
  std::string commented =
      "class A { /* } { */ int getX(){ // }\n return x; } void setY(int y){ "
      "/* {{{ */ this.y = y; } }";
  auto a = extract_src(plain);
  auto b = extract_src(commented);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].method_name == b[i].method_name);
    CHECK(a[i].body_tokens == b[i].body_tokens);
  }
}

TEST_CASE("brace safety: extracted bodies are always balanced") {
  auto recs = extract_src(
      "class A { void f() { if (a) { b(); } else { c(); } } void g() { while (x) { y(); } } }");
  for (const auto& r : recs) {
    int depth = 0;
    for (const auto& t : r.body_tokens) {
      if (t == "{") ++depth;
      if (t == "}") --depth;
      CHECK(depth >= 0);
    }
    CHECK(depth == 0);
  }
}

TEST_CASE("idempotent re-lex of body token stream") {
  auto recs = extract_src("class A { int f(int n) { return n * 2 + g(n, \"s\"); } }");
  REQUIRE(recs.size() == 1);
  std::string joined;
  for (const auto& t : recs[0].body_tokens) {
    if (!joined.empty()) joined += ' ';
    joined += t;
  }
  auto relexed = lex_java(joined);
  REQUIRE(!relexed.error);
  REQUIRE(relexed.tokens.size() == recs[0].body_tokens.size());
  for (size_t i = 0; i < relexed.tokens.size(); ++i) {
    CHECK(relexed.tokens[i].text == recs[0].body_tokens[i]);
  }
}

TEST_CASE("mine_corpus walks sorted, skips unreadable, summarizes") {
  namespace fs = std::filesystem;
  fs::path root = fs::temp_directory_path() / "mnr_mine_test";
  fs::remove_all(root);
  fs::create_directories(root / "sub");
  std::ofstream(root / "b.java") << "class B { int getB() { return b; } }";
  std::ofstream(root / "a.java") << "class A { int getA() { return a; } }";
  std::ofstream(root / "sub" / "c.java") << "class C { int getC() { return c; } }";
  std::ofstream(root / "broken.java") << "class D { /* unterminated";

  MineSummary sum;
  auto recs = mine_corpus(root, &sum);
  CHECK(sum.files_seen == 4);
  CHECK(sum.files_skipped == 1);
  CHECK(sum.methods_mined == 3);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].method_name == "getA");
  CHECK(recs[1].method_name == "getB");
  CHECK(recs[2].method_name == "getC");

  // determinism: two runs are identical
  auto recs2 = mine_corpus(root);
  REQUIRE(recs2.size() == recs.size());
  for (size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].method_name == recs2[i].method_name);
    CHECK(recs[i].source_path == recs2[i].source_path);
  }
  fs::remove_all(root);
}

TEST_CASE("empty directory mines an empty stream") {
  namespace fs = std::filesystem;
  fs::path root = fs::temp_directory_path() / "mnr_empty_dir";
  fs::remove_all(root);
  fs::create_directories(root);
  MineSummary sum;
  CHECK(mine_corpus(root, &sum).empty());
  CHECK(sum.files_seen == 0);
  fs::remove_all(root);
}
