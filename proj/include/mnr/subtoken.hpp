#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mnr {

// Ordered lowercase subtokens of an identifier; every token matches [a-z0-9]+.
using SubtokenSequence = std::vector<std::string>;

// Splits on camelCase boundaries, underscores and letter<->digit boundaries.
// Consecutive capitals stay one token until a lowercase follows
// ("HTTPServer" -> [http, server]). Identifiers with no alphanumerics yield
// the single token "unk".
SubtokenSequence split_identifier(std::string_view identifier);

// Joins subtokens back to camelCase: first token lowercase, later tokens
// capitalized unless they are pure digits.
std::string camel_join(const SubtokenSequence& tokens);

}  // namespace mnr
