#include "mnr/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mnr {

namespace {

bool identifier_like(const std::string& t) {
  if (t.empty()) return false;
  char c = t[0];
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '@';
}

void append_split(std::vector<std::string>& out, const std::string& text) {
  for (auto& s : split_identifier(text)) out.push_back(std::move(s));
}

}  // namespace

std::vector<std::string> body_subtokens(const MethodRecord& record) {
  std::vector<std::string> out;
  for (const auto& t : record.body_tokens) {
    if (!identifier_like(t)) continue;
    append_split(out, t);
  }
  return out;
}

std::vector<std::string> context_sequence(const MethodRecord& record, size_t max_len) {
  std::vector<std::string> seq;
  auto add_field = [&](const char* marker, std::vector<std::string> toks) {
    if (toks.empty()) return;
    seq.push_back(marker);
    for (auto& t : toks) seq.push_back(std::move(t));
  };
  std::vector<std::string> cls, ret, par;
  if (!record.class_name.empty()) append_split(cls, record.class_name);
  if (!record.return_type.empty()) append_split(ret, record.return_type);
  for (const auto& [type, name] : record.parameters) {
    append_split(par, type);
    append_split(par, name);
  }
  add_field(kMarkCls, std::move(cls));
  add_field(kMarkRet, std::move(ret));
  add_field(kMarkPar, std::move(par));
  add_field(kMarkBody, body_subtokens(record));
  if (seq.size() > max_len) seq.resize(max_len);
  return seq;
}

Vocabulary Vocabulary::build(const std::vector<MethodRecord>& records, int min_count,
                             VocabRole role) {
  std::unordered_map<std::string, int64_t> counts;
  for (const auto& rec : records) {
    if (role == VocabRole::Name) {
      for (const auto& t : split_identifier(rec.method_name)) ++counts[t];
    } else {
      for (const auto& t : context_sequence(rec)) ++counts[t];
    }
  }
  std::vector<std::pair<std::string, int64_t>> kept;
  kept.reserve(counts.size());
  for (auto& [tok, n] : counts) {
    if (n >= min_count) kept.emplace_back(tok, n);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary v;
  v.min_count_ = min_count;
  v.role_ = role;
  v.id_to_token_ = {"<pad>", "<unk>", "<s>", "</s>"};
  for (auto& [tok, n] : kept) v.id_to_token_.push_back(tok);
  for (int32_t i = 0; i < static_cast<int32_t>(v.id_to_token_.size()); ++i) {
    v.token_to_id_[v.id_to_token_[i]] = i;
  }
  return v;
}

std::string Vocabulary::to_text() const {
  std::ostringstream os;
  os << "#vocab v1 min_count=" << min_count_ << " role="
     << (role_ == VocabRole::Context ? "context" : "name") << "\n";
  for (size_t i = 0; i < id_to_token_.size(); ++i) {
    os << id_to_token_[i] << '\t' << i << '\n';
  }
  return os.str();
}

Vocabulary Vocabulary::from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || !line.starts_with("#vocab v1")) {
    throw std::runtime_error("vocabulary: bad header");
  }
  Vocabulary v;
  {
    auto mc = line.find("min_count=");
    if (mc != std::string::npos) v.min_count_ = std::stoi(line.substr(mc + 10));
    v.role_ = line.find("role=name") != std::string::npos ? VocabRole::Name
                                                          : VocabRole::Context;
  }
  std::map<int32_t, std::string> by_id;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw std::runtime_error("vocabulary: bad line");
    by_id[std::stoi(line.substr(tab + 1))] = line.substr(0, tab);
  }
  for (auto& [id, tok] : by_id) {
    if (id != static_cast<int32_t>(v.id_to_token_.size())) {
      throw std::runtime_error("vocabulary: non-contiguous ids");
    }
    v.id_to_token_.push_back(tok);
    v.token_to_id_[tok] = id;
  }
  if (v.id_to_token_.size() < 4) throw std::runtime_error("vocabulary: missing reserved ids");
  return v;
}

}  // namespace mnr
