#include "mnr/subtoken.hpp"

#include <cctype>

namespace mnr {

namespace {
bool lower(char c) { return std::islower(static_cast<unsigned char>(c)); }
bool upper(char c) { return std::isupper(static_cast<unsigned char>(c)); }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }
}  // namespace

SubtokenSequence split_identifier(std::string_view id) {
  SubtokenSequence out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (size_t i = 0; i < id.size(); ++i) {
    char c = id[i];
    if (!alnum(c)) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      char p = id[i - 1];
      bool boundary = false;
      if (lower(p) && upper(c)) boundary = true;
      // run of capitals ends when a lowercase follows: HTTPServer -> HTTP|Server
      if (upper(p) && upper(c) && i + 1 < id.size() && lower(id[i + 1])) boundary = true;
      if ((digit(p) && !digit(c)) || (!digit(p) && digit(c) && alnum(p))) boundary = true;
      if (boundary) flush();
    }
    cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  flush();
  if (out.empty()) out.push_back("unk");
  return out;
}

std::string camel_join(const SubtokenSequence& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (t.empty()) continue;
    if (i == 0 || digit(t[0])) {
      out += t;
    } else {
      out += static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
      out += t.substr(1);
    }
  }
  return out;
}

}  // namespace mnr
