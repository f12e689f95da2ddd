#include "mnr/eval.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "mnr/rng.hpp"

namespace mnr {

Prf token_prf(const SubtokenSequence& predicted, const SubtokenSequence& gold) {
  if (gold.empty()) throw std::invalid_argument("token_prf: empty gold");
  std::unordered_map<std::string, int> gold_counts;
  for (const auto& t : gold) ++gold_counts[t];
  int overlap = 0;
  std::unordered_map<std::string, int> used;
  for (const auto& t : predicted) {
    auto it = gold_counts.find(t);
    if (it != gold_counts.end() && used[t] < it->second) {
      ++used[t];
      ++overlap;
    }
  }
  Prf out;
  out.precision = predicted.empty()
                      ? 0.0
                      : static_cast<double>(overlap) / static_cast<double>(predicted.size());
  out.recall = static_cast<double>(overlap) / static_cast<double>(gold.size());
  out.f1 = (out.precision + out.recall) > 0
               ? 2 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

namespace {

struct Accum {
  size_t n = 0;
  double p = 0, r = 0, f = 0;
  void add(const Prf& x) {
    ++n;
    p += x.precision;
    r += x.recall;
    f += x.f1;
  }
  CategoryStats stats() const {
    CategoryStats s;
    s.n = n;
    if (n) {
      s.precision = p / n;
      s.recall = r / n;
      s.f1 = f / n;
    }
    return s;
  }
};

size_t length_bucket(size_t len) { return len >= 5 ? 4 : len - 1; }

}  // namespace

EvalReport evaluate(const Recommender& recommender,
                    const std::vector<MethodRecord>& test_set) {
  EvalReport rep;
  Accum total;
  size_t exact = 0;
  std::map<PrefixCategory, Accum> by_cat;
  std::array<Accum, 5> by_len;
  for (const auto& rec : test_set) {
    SubtokenSequence gold = split_identifier(rec.method_name);
    SubtokenSequence pred = recommender(rec);
    Prf prf = token_prf(pred, gold);
    total.add(prf);
    if (pred == gold) ++exact;
    by_cat[derive_label(gold)].add(prf);
    by_len[length_bucket(gold.size())].add(prf);
  }
  rep.n_methods = total.n;
  CategoryStats overall = total.stats();
  rep.precision = overall.precision;
  rep.recall = overall.recall;
  rep.f1 = overall.f1;
  rep.exact_match = total.n ? static_cast<double>(exact) / total.n : 0.0;
  for (auto& [cat, acc] : by_cat) rep.per_category[cat] = acc.stats();
  for (size_t i = 0; i < by_len.size(); ++i) rep.per_length[i] = by_len[i].stats();
  return rep;
}

std::vector<Fold> kfold_split(size_t corpus_size, int k, uint64_t seed) {
  if (k < 2) throw std::invalid_argument("kfold_split: k must be >= 2");
  if (corpus_size < static_cast<size_t>(k)) {
    throw std::invalid_argument("kfold_split: corpus smaller than k");
  }
  std::vector<size_t> ids(corpus_size);
  std::iota(ids.begin(), ids.end(), 0);
  Rng rng(seed);
  rng.shuffle(ids);
  std::vector<Fold> folds(k);
  // near-equal contiguous slices of the shuffled order
  size_t base = corpus_size / k, extra = corpus_size % k;
  size_t pos = 0;
  std::vector<std::pair<size_t, size_t>> ranges;
  for (int i = 0; i < k; ++i) {
    size_t len = base + (static_cast<size_t>(i) < extra ? 1 : 0);
    ranges.emplace_back(pos, pos + len);
    pos += len;
  }
  for (int i = 0; i < k; ++i) {
    for (size_t j = 0; j < corpus_size; ++j) {
      if (j >= ranges[i].first && j < ranges[i].second) {
        folds[i].test_ids.push_back(ids[j]);
      } else {
        folds[i].train_ids.push_back(ids[j]);
      }
    }
  }
  return folds;
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["n"] = n_methods;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f1"] = f1;
  j["exact_match"] = exact_match;
  j["averaging"] = "macro";
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [cat, s] : per_category) {
    cats[category_name(cat)] = {
        {"n", s.n}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  }
  j["per_category"] = cats;
  nlohmann::json lens = nlohmann::json::object();
  static const char* kLenKeys[5] = {"1", "2", "3", "4", "5+"};
  for (size_t i = 0; i < per_length.size(); ++i) {
    const auto& s = per_length[i];
    lens[kLenKeys[i]] = {
        {"n", s.n}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  }
  j["per_length"] = lens;
  if (!fold_f1.empty()) j["fold_f1"] = fold_f1;
  return j.dump(2);
}

std::string EvalReport::to_table() const {
  std::ostringstream os;
  char line[160];
  os << "methods: " << n_methods << "  (macro-averaged)\n";
  std::snprintf(line, sizeof(line), "overall   P=%.4f R=%.4f F1=%.4f exact=%.4f\n",
                precision, recall, f1, exact_match);
  os << line;
  for (const auto& [cat, s] : per_category) {
    std::snprintf(line, sizeof(line), "%-8s n=%-6zu P=%.4f R=%.4f F1=%.4f\n",
                  category_name(cat), s.n, s.precision, s.recall, s.f1);
    os << line;
  }
  static const char* kLenKeys[5] = {"len=1", "len=2", "len=3", "len=4", "len>=5"};
  for (size_t i = 0; i < per_length.size(); ++i) {
    const auto& s = per_length[i];
    if (!s.n) continue;
    std::snprintf(line, sizeof(line), "%-8s n=%-6zu P=%.4f R=%.4f F1=%.4f\n", kLenKeys[i],
                  s.n, s.precision, s.recall, s.f1);
    os << line;
  }
  return os.str();
}

}  // namespace mnr
