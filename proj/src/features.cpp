#include "mnr/features.hpp"

#include <map>
#include <string>

#include "mnr/subtoken.hpp"
#include "mnr/vocab.hpp"

namespace mnr {

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

void hash_field(std::map<uint32_t, double>& acc, const char* tag,
                const std::vector<std::string>& toks, uint32_t hash_space) {
  std::string buf;
  for (size_t i = 0; i < toks.size(); ++i) {
    buf.assign(tag);
    buf += toks[i];
    acc[static_cast<uint32_t>(fnv1a64(buf) % hash_space)] += 1.0;
    if (i + 1 < toks.size()) {
      buf.assign(tag);
      buf += toks[i];
      buf += '|';
      buf += toks[i + 1];
      acc[static_cast<uint32_t>(fnv1a64(buf) % hash_space)] += 1.0;
    }
  }
}

}  // namespace

FeatureBag featurize(const MethodRecord& record, uint32_t hash_space) {
  std::map<uint32_t, double> acc;  // ordered so the bag layout is deterministic
  std::vector<std::string> cls, ret, par;
  if (!record.class_name.empty()) cls = split_identifier(record.class_name);
  if (!record.return_type.empty()) ret = split_identifier(record.return_type);
  for (const auto& [type, name] : record.parameters) {
    for (auto& t : split_identifier(type)) par.push_back(std::move(t));
    for (auto& t : split_identifier(name)) par.push_back(std::move(t));
  }
  hash_field(acc, "cls:", cls, hash_space);
  hash_field(acc, "ret:", ret, hash_space);
  hash_field(acc, "par:", par, hash_space);
  hash_field(acc, "body:", body_subtokens(record), hash_space);

  FeatureBag bag;
  double total = 0;
  for (auto& [idx, w] : acc) total += w;
  bag.indices.reserve(acc.size());
  bag.weights.reserve(acc.size());
  for (auto& [idx, w] : acc) {
    bag.indices.push_back(idx);
    bag.weights.push_back(w / total);
  }
  return bag;
}

}  // namespace mnr
