#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "mnr/types.hpp"

namespace mnr {

// Normalized hashed bag of field-tagged unigrams and bigrams. Weights are
// positive and sum to 1 when the bag is non-empty; indices are < hash_space.
struct FeatureBag {
  std::vector<uint32_t> indices;
  std::vector<double> weights;
};

// Fixed 64-bit FNV-1a; feature ids must be identical across runs and platforms.
uint64_t fnv1a64(std::string_view s);

inline constexpr uint32_t kDefaultHashSpace = 1u << 20;

// Builds the classifier input bag. Fields are processed in the fixed order
// cls, ret, par, body; each contributes tagged unigrams ("ret:tok") and
// adjacent-pair bigrams within the field ("ret:a|b"). Duplicate features
// accumulate weight before normalization. The method name never contributes.
FeatureBag featurize(const MethodRecord& record, uint32_t hash_space = kDefaultHashSpace);

}  // namespace mnr
