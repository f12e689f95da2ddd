#include "mnr/heuristics.hpp"

#include <cctype>
#include <stdexcept>

#include "mnr/lexer.hpp"

namespace mnr {

namespace {

bool is_plain_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_' || s[0] == '$')) {
    return false;
  }
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$')) return false;
  }
  return !is_java_keyword(s);
}

// Matches `return <field>;` / `return this.<field>;`; returns the field.
std::optional<std::string> match_return_field(const std::vector<std::string>& b) {
  if (b.size() == 3 && b[0] == "return" && is_plain_identifier(b[1]) && b[2] == ";") {
    return b[1];
  }
  if (b.size() == 5 && b[0] == "return" && b[1] == "this" && b[2] == "." &&
      is_plain_identifier(b[3]) && b[4] == ";") {
    return b[3];
  }
  return std::nullopt;
}

std::optional<std::string> match_boolean_return(const std::vector<std::string>& b) {
  if (auto f = match_return_field(b)) return f;
  // `return !<field>;`
  if (b.size() == 4 && b[0] == "return" && b[1] == "!" && is_plain_identifier(b[2]) &&
      b[3] == ";") {
    return b[2];
  }
  // `return <field> ==|!= <literal>;`
  if (b.size() == 5 && b[0] == "return" && is_plain_identifier(b[1]) &&
      (b[2] == "==" || b[2] == "!=") && b[4] == ";") {
    return b[1];
  }
  return std::nullopt;
}

std::optional<std::string> match_assignment_field(const std::vector<std::string>& b,
                                                  const std::string& param) {
  if (b.size() == 4 && is_plain_identifier(b[0]) && b[1] == "=" && b[2] == param &&
      b[3] == ";") {
    return b[0];
  }
  if (b.size() == 6 && b[0] == "this" && b[1] == "." && is_plain_identifier(b[2]) &&
      b[3] == "=" && b[4] == param && b[5] == ";") {
    return b[2];
  }
  return std::nullopt;
}

// First `ident (` in the body that is not a constructor call.
std::optional<std::string> first_invoked_method(const std::vector<std::string>& b) {
  for (size_t i = 0; i + 1 < b.size(); ++i) {
    if (b[i + 1] == "(" && is_plain_identifier(b[i]) &&
        !(i > 0 && b[i - 1] == "new")) {
      return b[i];
    }
  }
  return std::nullopt;
}

SubtokenSequence with_prefix(const std::string& prefix, const std::string& field) {
  SubtokenSequence out{prefix};
  for (auto& t : split_identifier(field)) out.push_back(std::move(t));
  return out;
}

bool is_boolean_type(const std::string& t) { return t == "boolean" || t == "Boolean"; }

}  // namespace

HeuristicOutcome apply_heuristic(const MethodRecord& record, PrefixCategory category) {
  switch (category) {
    case PrefixCategory::Get: {
      HeuristicOutcome out{std::nullopt, HeuristicRule::Get};
      if (!record.parameters.empty()) return out;
      if (auto f = match_return_field(record.body_tokens)) {
        out.name_tokens =
            with_prefix(is_boolean_type(record.return_type) ? "is" : "get", *f);
      }
      return out;
    }
    case PrefixCategory::Is: {
      HeuristicOutcome out{std::nullopt, HeuristicRule::Is};
      if (!record.parameters.empty()) return out;
      if (auto f = match_boolean_return(record.body_tokens)) {
        out.name_tokens = with_prefix("is", *f);
      }
      return out;
    }
    case PrefixCategory::Set: {
      HeuristicOutcome out{std::nullopt, HeuristicRule::Set};
      if (record.parameters.size() != 1 || record.return_type != "void") return out;
      if (auto f = match_assignment_field(record.body_tokens,
                                          record.parameters.front().second)) {
        out.name_tokens = with_prefix("set", *f);
      }
      return out;
    }
    case PrefixCategory::Test: {
      HeuristicOutcome out{std::nullopt, HeuristicRule::Test};
      if (!record.is_test_context) return out;
      if (auto subject = first_invoked_method(record.body_tokens)) {
        out.name_tokens = with_prefix("test", *subject);
      }
      return out;
    }
    case PrefixCategory::Other:
      break;
  }
  throw std::invalid_argument("apply_heuristic: category OTHER has no rule");
}

}  // namespace mnr
