#include "doctest.h"
#include "mnr/heuristics.hpp"

using namespace mnr;

namespace {
MethodRecord rec(std::string ret, std::vector<std::pair<std::string, std::string>> params,
                 std::vector<std::string> body) {
  MethodRecord r;
  r.class_name = "C";
  r.method_name = "placeholder";
  r.return_type = std::move(ret);
  r.parameters = std::move(params);
  r.body_tokens = std::move(body);
  return r;
}
}  // namespace

TEST_CASE("R-GET plain field return") {
  auto out = apply_heuristic(rec("String", {}, {"return", "name", ";"}), PrefixCategory::Get);
  REQUIRE(!out.abstained());
  CHECK(*out.name_tokens == SubtokenSequence{"get", "name"});
}

TEST_CASE("R-GET this-qualified and multiword fields") {
  auto out = apply_heuristic(rec("int", {}, {"return", "this", ".", "maxCount", ";"}),
                             PrefixCategory::Get);
  REQUIRE(!out.abstained());
  CHECK(*out.name_tokens == SubtokenSequence{"get", "max", "count"});
}

TEST_CASE("R-GET boolean promotion to is") {
  auto out = apply_heuristic(rec("boolean", {}, {"return", "valid", ";"}),
                             PrefixCategory::Get);
  REQUIRE(!out.abstained());
  CHECK(*out.name_tokens == SubtokenSequence{"is", "valid"});
}

TEST_CASE("R-GET abstains on parameters or complex bodies") {
  CHECK(apply_heuristic(rec("int", {{"int", "i"}}, {"return", "x", ";"}),
                        PrefixCategory::Get)
            .abstained());
  CHECK(apply_heuristic(rec("int", {}, {"return", "x", "+", "1", ";"}),
                        PrefixCategory::Get)
            .abstained());
  CHECK(apply_heuristic(rec("int", {}, {"compute", "(", ")", ";"}), PrefixCategory::Get)
            .abstained());
}

TEST_CASE("R-IS simple boolean expressions over one field") {
  CHECK(*apply_heuristic(rec("boolean", {}, {"return", "empty", ";"}), PrefixCategory::Is)
             .name_tokens == SubtokenSequence{"is", "empty"});
  CHECK(*apply_heuristic(rec("boolean", {}, {"return", "!", "closed", ";"}),
                         PrefixCategory::Is)
             .name_tokens == SubtokenSequence{"is", "closed"});
  CHECK(*apply_heuristic(rec("boolean", {}, {"return", "owner", "!=", "null", ";"}),
                         PrefixCategory::Is)
             .name_tokens == SubtokenSequence{"is", "owner"});
  CHECK(apply_heuristic(rec("boolean", {}, {"return", "a", "&&", "b", ";"}),
                        PrefixCategory::Is)
            .abstained());
}

TEST_CASE("R-SET field assignment") {
  auto out = apply_heuristic(
      rec("void", {{"int", "v"}}, {"this", ".", "count", "=", "v", ";"}),
      PrefixCategory::Set);
  REQUIRE(!out.abstained());
  CHECK(*out.name_tokens == SubtokenSequence{"set", "count"});

  auto out2 = apply_heuristic(rec("void", {{"int", "v"}}, {"count", "=", "v", ";"}),
                              PrefixCategory::Set);
  REQUIRE(!out2.abstained());
  CHECK(*out2.name_tokens == SubtokenSequence{"set", "count"});
}

TEST_CASE("R-SET abstains without the setter shape") {
  CHECK(apply_heuristic(rec("int", {{"int", "v"}}, {"count", "=", "v", ";"}),
                        PrefixCategory::Set)
            .abstained());  // non-void return
  CHECK(apply_heuristic(rec("void", {}, {"count", "=", "1", ";"}), PrefixCategory::Set)
            .abstained());  // no parameter
  CHECK(apply_heuristic(
            rec("void", {{"int", "v"}}, {"count", "=", "v", "+", "1", ";"}),
            PrefixCategory::Set)
            .abstained());
}

TEST_CASE("R-TEST names the first invoked method") {
  auto r = rec("void", {}, {"mergeAll", "(", ")", ";", "check", "(", ")", ";"});
  r.is_test_context = true;
  auto out = apply_heuristic(r, PrefixCategory::Test);
  REQUIRE(!out.abstained());
  CHECK(*out.name_tokens == SubtokenSequence{"test", "merge", "all"});
}

TEST_CASE("R-TEST skips constructor calls and requires test context") {
  auto r = rec("void", {}, {"new", "Foo", "(", ")", ";", "runIt", "(", ")", ";"});
  r.is_test_context = true;
  auto out = apply_heuristic(r, PrefixCategory::Test);
  REQUIRE(!out.abstained());
  CHECK(*out.name_tokens == SubtokenSequence{"test", "run", "it"});

  auto r2 = rec("void", {}, {"runIt", "(", ")", ";"});
  r2.is_test_context = false;
  CHECK(apply_heuristic(r2, PrefixCategory::Test).abstained());

  auto r3 = rec("void", {}, {"int", "x", "=", "1", ";"});
  r3.is_test_context = true;
  CHECK(apply_heuristic(r3, PrefixCategory::Test).abstained());
}

TEST_CASE("OTHER category is a contract violation") {
  CHECK_THROWS_AS(apply_heuristic(rec("int", {}, {}), PrefixCategory::Other),
                  std::invalid_argument);
}

TEST_CASE("prefix soundness over many rule applications") {
  std::vector<PrefixCategory> cats = {PrefixCategory::Get, PrefixCategory::Set,
                                      PrefixCategory::Is, PrefixCategory::Test};
  auto r1 = rec("String", {}, {"return", "data", ";"});
  auto r2 = rec("void", {{"int", "x"}}, {"val", "=", "x", ";"});
  auto r3 = rec("boolean", {}, {"return", "ok", ";"});
  auto r4 = rec("void", {}, {"go", "(", ")", ";"});
  r4.is_test_context = true;
  std::vector<MethodRecord> recs{r1, r2, r3, r4};
  for (PrefixCategory c : cats) {
    for (const auto& r : recs) {
      auto out = apply_heuristic(r, c);
      if (out.abstained()) continue;
      const std::string& first = out.name_tokens->front();
      if (c == PrefixCategory::Get) {
        CHECK((first == "get" || first == "is"));  // boolean promotion
      } else {
        CHECK(first == category_token(c));
      }
    }
  }
}
