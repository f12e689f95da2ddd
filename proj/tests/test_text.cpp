#include <cmath>
#include <numeric>

#include "doctest.h"
#include "mnr/features.hpp"
#include "mnr/rng.hpp"
#include "mnr/subtoken.hpp"
#include "mnr/vocab.hpp"

using namespace mnr;

TEST_CASE("split_identifier basics") {
  CHECK(split_identifier("getUserName") == SubtokenSequence{"get", "user", "name"});
  CHECK(split_identifier("parseHTTP2Frame") == SubtokenSequence{"parse", "http", "2", "frame"});
  CHECK(split_identifier("foo_bar") == SubtokenSequence{"foo", "bar"});
  CHECK(split_identifier("HTTPServer") == SubtokenSequence{"http", "server"});
  CHECK(split_identifier("x") == SubtokenSequence{"x"});
  CHECK(split_identifier("__$__") == SubtokenSequence{"unk"});
}

TEST_CASE("split_identifier idempotent on its own output joined by underscore") {
  Rng rng(11);
  const char* samples[] = {"getUserName", "HTTPServer", "a1b2C3", "snake_case_name",
                           "XMLHttpRequest2", "value", "MAX_VALUE"};
  for (const char* s : samples) {
    auto once = split_identifier(s);
    std::string joined;
    for (const auto& t : once) {
      if (!joined.empty()) joined += '_';
      joined += t;
    }
    CHECK(split_identifier(joined) == once);
  }
}

TEST_CASE("camel_join round trip") {
  CHECK(camel_join({"get", "user", "name"}) == "getUserName");
  CHECK(camel_join({"run"}) == "run");
  CHECK(camel_join({"parse", "http", "2", "frame"}) == "parseHttp2Frame");
  // camel_join o split_identifier is identity on camel_join output
  SubtokenSequence toks{"update", "cache", "size"};
  CHECK(camel_join(split_identifier(camel_join(toks))) == camel_join(toks));
}

namespace {
MethodRecord simple_record() {
  MethodRecord rec;
  rec.class_name = "Account";
  rec.method_name = "getBalance";
  rec.return_type = "int";
  rec.body_tokens = {"return", "balance", ";"};
  return rec;
}
}  // namespace

TEST_CASE("vocabulary build: counts, min_count cutoff, tie-break") {
  std::vector<MethodRecord> recs(2, simple_record());
  Vocabulary v = Vocabulary::build(recs, 2, VocabRole::Context);
  CHECK(v.id_of("balance") != Vocabulary::kUnk);
  CHECK(v.id_of("account") != Vocabulary::kUnk);

  // token appearing once with min_count=2 maps to UNK
  MethodRecord odd = simple_record();
  odd.body_tokens.push_back("rare");
  recs.push_back(odd);
  Vocabulary v2 = Vocabulary::build(recs, 2, VocabRole::Context);
  CHECK(v2.id_of("rare") == Vocabulary::kUnk);

  // ties resolve lexicographically: "aa" and "zz" occur once each
  MethodRecord tie;
  tie.method_name = "f";
  tie.class_name = "ZzAa";
  Vocabulary vt = Vocabulary::build({tie}, 1, VocabRole::Context);
  CHECK(vt.id_of("aa") < vt.id_of("zz"));

  Vocabulary name_v = Vocabulary::build(recs, 1, VocabRole::Name);
  CHECK(name_v.id_of("get") != Vocabulary::kUnk);
  CHECK(name_v.id_of("balance") != Vocabulary::kUnk);
  CHECK(name_v.role() == VocabRole::Name);
}

TEST_CASE("vocabulary empty stream holds only reserved ids") {
  Vocabulary v = Vocabulary::build({}, 1, VocabRole::Name);
  CHECK(v.size() == 4);
  CHECK(v.id_of("anything") == Vocabulary::kUnk);
}

TEST_CASE("vocabulary text round trip") {
  std::vector<MethodRecord> recs{simple_record()};
  Vocabulary v = Vocabulary::build(recs, 1, VocabRole::Context);
  Vocabulary w = Vocabulary::from_text(v.to_text());
  CHECK(w.size() == v.size());
  CHECK(w.min_count() == v.min_count());
  for (int32_t i = 0; i < v.size(); ++i) CHECK(w.token_of(i) == v.token_of(i));
}

TEST_CASE("fnv1a64 fixed constants") {
  // reference values for the 64-bit FNV-1a parameters
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("featurize: unigrams plus bigrams, normalized") {
  MethodRecord rec;
  rec.method_name = "f";
  rec.body_tokens = {"return", "x", ";"};
  FeatureBag bag = featurize(rec);
  // body subtokens [return, x] -> 2 unigrams + 1 bigram, each weight 1/3
  REQUIRE(bag.indices.size() == 3);
  for (double w : bag.weights) CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(std::accumulate(bag.weights.begin(), bag.weights.end(), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // expected hashed ids
  CHECK(bag.indices[0] != bag.indices[1]);
}

TEST_CASE("featurize: empty record gives empty bag") {
  MethodRecord rec;
  rec.method_name = "f";
  FeatureBag bag = featurize(rec);
  CHECK(bag.indices.empty());
  CHECK(bag.weights.empty());
}

TEST_CASE("featurize: repeated token doubles weight before normalization") {
  MethodRecord rec;
  rec.method_name = "f";
  rec.body_tokens = {"x", "x"};
  FeatureBag bag = featurize(rec);
  // features: body:x (count 2), body:x|x (count 1) -> weights 2/3 and 1/3
  REQUIRE(bag.indices.size() == 2);
  double hi = std::max(bag.weights[0], bag.weights[1]);
  double lo = std::min(bag.weights[0], bag.weights[1]);
  CHECK(hi == doctest::Approx(2.0 / 3));
  CHECK(lo == doctest::Approx(1.0 / 3));
}

TEST_CASE("featurize determinism and weight properties") {
  MethodRecord rec = simple_record();
  rec.parameters = {{"List<String>", "names"}};
  FeatureBag a = featurize(rec);
  FeatureBag b = featurize(rec);
  CHECK(a.indices == b.indices);
  CHECK(a.weights == b.weights);
  double sum = std::accumulate(a.weights.begin(), a.weights.end(), 0.0);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  for (double w : a.weights) CHECK(w > 0);
  for (uint32_t idx : a.indices) CHECK(idx < kDefaultHashSpace);
}

TEST_CASE("method name never contributes features") {
  MethodRecord a;
  a.method_name = "aaa";
  a.body_tokens = {"x"};
  MethodRecord b = a;
  b.method_name = "completelyDifferent";
  FeatureBag fa = featurize(a);
  FeatureBag fb = featurize(b);
  CHECK(fa.indices == fb.indices);
}

TEST_CASE("context_sequence layout and truncation") {
  MethodRecord rec = simple_record();
  auto seq = context_sequence(rec);
  REQUIRE(seq.size() >= 4);
  CHECK(seq[0] == kMarkCls);
  CHECK(seq[1] == "account");
  CHECK(seq[2] == kMarkRet);
  CHECK(seq[3] == "int");
  CHECK(seq[4] == kMarkBody);

  MethodRecord empty;
  empty.method_name = "f";
  CHECK(context_sequence(empty).empty());

  MethodRecord big = simple_record();
  for (int i = 0; i < 500; ++i) big.body_tokens.push_back("tok");
  CHECK(context_sequence(big).size() == 200);
}
