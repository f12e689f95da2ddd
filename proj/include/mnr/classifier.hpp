#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mnr/features.hpp"
#include "mnr/subtoken.hpp"
#include "mnr/types.hpp"

namespace mnr {

// Fixed order; used directly as matrix column index and for tie-breaking.
enum class PrefixCategory : int { Get = 0, Set = 1, Is = 2, Test = 3, Other = 4 };

inline constexpr int kNumCategories = 5;

const char* category_name(PrefixCategory c);   // "GET", "SET", ...
const char* category_token(PrefixCategory c);  // "get", "set", "is", "test", ""

// GET/SET/IS/TEST iff the first subtoken equals exactly that word; else OTHER.
PrefixCategory derive_label(const SubtokenSequence& name_subtokens);

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Linear bag-of-features classifier: hidden state is the weight-normalized
// mean of feature embedding rows, logits a single affine map.
struct ClassifierModel {
  RowMajorMatrix A;     // H x d feature embeddings
  Eigen::MatrixXd B;    // d x K output weights
  Eigen::VectorXd bias; // K
  int d = 0;
  uint32_t hash_space = 0;
  uint64_t rng_seed = 0;
};

struct ClassifierTrainConfig {
  int epochs = 5;
  double learning_rate = 0.1;  // linearly decayed to 0
  int d = 64;
  uint32_t hash_space = kDefaultHashSpace;
  uint64_t seed = 1;
};

Eigen::VectorXd classifier_hidden(const ClassifierModel& model, const FeatureBag& bag);

// softmax(B^T hidden + bias), computed with max-subtraction.
Eigen::VectorXd forward(const ClassifierModel& model, const FeatureBag& bag);

using LabeledBag = std::pair<FeatureBag, PrefixCategory>;

// Mean negative log-likelihood over the batch.
double nll_loss(const ClassifierModel& model, const std::vector<LabeledBag>& batch);

struct ClassifierGrads {
  std::map<uint32_t, Eigen::VectorXd> dA;  // only rows touched by the batch
  Eigen::MatrixXd dB;
  Eigen::VectorXd dbias;
  double loss = 0;
};

// Analytic gradients of nll_loss; shared by SGD and the gradient-check tests.
ClassifierGrads nll_gradients(const ClassifierModel& model,
                              const std::vector<LabeledBag>& batch);

struct ClassifierTrainResult {
  ClassifierModel model;
  std::vector<double> epoch_losses;
};

// Seeded single-threaded SGD, one example per update, learning rate decayed
// linearly to zero over the run. Throws std::invalid_argument on an empty
// training set.
ClassifierTrainResult train_classifier(const std::vector<FeatureBag>& bags,
                                       const std::vector<PrefixCategory>& labels,
                                       const ClassifierTrainConfig& config);

ClassifierTrainResult train_classifier(const std::vector<MethodRecord>& records,
                                       const std::vector<PrefixCategory>& labels,
                                       const ClassifierTrainConfig& config);

// Argmax of forward(featurize(record)); ties broken by category order.
std::pair<PrefixCategory, double> classify(const ClassifierModel& model,
                                           const MethodRecord& record);

}  // namespace mnr
