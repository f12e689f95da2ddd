#pragma once

#include <optional>

#include "mnr/classifier.hpp"
#include "mnr/subtoken.hpp"
#include "mnr/types.hpp"

namespace mnr {

enum class HeuristicRule { Get, Is, Set, Test };

// name_tokens empty means ABSTAIN. When present, the first token is the
// category word, except the boolean-getter promotion GET -> "is".
struct HeuristicOutcome {
  std::optional<SubtokenSequence> name_tokens;
  HeuristicRule rule;
  bool abstained() const { return !name_tokens.has_value(); }
};

// Rule bodies:
//   GET:  no parameters, body `return <field>;` or `return this.<field>;`
//         -> [get] + split(field); boolean return type promotes to "is".
//   IS:   body `return <expr over one field>;` where expr is <field>,
//         !<field>, this.<field>, or <field> ==/!= <literal-ish>
//         -> [is] + split(field).
//   SET:  one parameter p, void return, body `<field> = p;` or
//         `this.<field> = p;` -> [set] + split(field).
//   TEST: is_test_context and the body invokes at least one method
//         -> [test] + split(first invoked method).
// Throws std::invalid_argument when category is OTHER (router bug).
HeuristicOutcome apply_heuristic(const MethodRecord& record, PrefixCategory category);

}  // namespace mnr
