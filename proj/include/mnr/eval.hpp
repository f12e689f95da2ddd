#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mnr/classifier.hpp"
#include "mnr/subtoken.hpp"
#include "mnr/types.hpp"

namespace mnr {

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Multiset-overlap precision/recall/F1 against a non-empty gold sequence.
// Empty predictions score zero. Throws on empty gold.
Prf token_prf(const SubtokenSequence& predicted, const SubtokenSequence& gold);

struct CategoryStats {
  size_t n = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct EvalReport {
  size_t n_methods = 0;
  double precision = 0;  // macro over methods
  double recall = 0;
  double f1 = 0;
  double exact_match = 0;
  std::map<PrefixCategory, CategoryStats> per_category;
  // stratification by gold-name token length: 1, 2, 3, 4, >=5
  std::array<CategoryStats, 5> per_length;
  std::vector<double> fold_f1;  // filled by cross-validation drivers

  std::string to_json() const;
  std::string to_table() const;
};

using Recommender = std::function<SubtokenSequence(const MethodRecord&)>;

// Macro-averages token_prf over the test set; categories come from
// derive_label on the gold names.
EvalReport evaluate(const Recommender& recommender,
                    const std::vector<MethodRecord>& test_set);

struct Fold {
  std::vector<size_t> train_ids;
  std::vector<size_t> test_ids;
};

// Seeded shuffle, then k near-equal contiguous folds. Throws when n < k or
// k < 2.
std::vector<Fold> kfold_split(size_t corpus_size, int k, uint64_t seed);

}  // namespace mnr
