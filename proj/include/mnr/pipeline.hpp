#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mnr/classifier.hpp"
#include "mnr/generator.hpp"
#include "mnr/heuristics.hpp"
#include "mnr/types.hpp"

namespace mnr {

enum class Route { Heuristic, Generator, GeneratorForcedPrefix };

const char* route_name(Route r);

struct PipelineConfig {
  ClassifierTrainConfig classifier;
  GeneratorTrainConfig generator;
  DecodeConfig decode;

  // applies one seed to both phases
  void set_seed(uint64_t seed) {
    classifier.seed = seed;
    generator.seed = seed;
  }
};

// Trained two-phase recommender. Vocabularies live inside the generator and
// are present even in degraded mode (no OTHER-category training data), where
// has_generator is false and the generator tensors are empty.
struct PipelineModel {
  ClassifierModel classifier;
  GeneratorModel generator;
  bool has_generator = false;
  PipelineConfig config;
};

struct Candidate {
  std::string name;  // camelCase join of subtokens
  SubtokenSequence subtokens;
  double score;
};

struct Recommendation {
  std::vector<Candidate> candidates;  // rank-1 first
  Route route;
  PrefixCategory category;
  double confidence;
};

// Phase 1 classifies; phase 2 applies the category rule or decodes.
// Heuristic ABSTAIN falls back to prefix-forced generation. Heuristic scores
// are 1.0; generator scores are exp(length-normalized log-prob). The two
// routes never mix candidate lists.
Recommendation recommend(const PipelineModel& pipeline, const MethodRecord& record,
                         int top_k);

// Trains the classifier on every record and the generator on OTHER-category
// records only. A corpus with no OTHER records yields degraded mode plus a
// warning. Model weights are rounded to float32 after training so that a
// save/load round trip is bit-exact.
PipelineModel train_pipeline(const std::vector<MethodRecord>& corpus,
                             const PipelineConfig& config,
                             std::vector<std::string>* warnings = nullptr);

void save_model(const PipelineModel& pipeline, const std::filesystem::path& path);
PipelineModel load_model(const std::filesystem::path& path);

}  // namespace mnr
